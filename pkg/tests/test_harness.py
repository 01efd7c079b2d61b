import json

import numpy as np
import pytest

from crossfv.cli import main
from crossfv.config import (
    ConfigError,
    load_config,
    parse_config,
    parse_kernel,
    preset_to_config,
)
from crossfv.grid import Mesh
from crossfv.presets import REGISTRY, get_preset
from crossfv.scheme import State
from crossfv.studies import (
    convergence_ladder,
    gap_widths,
    localization_alphas,
    overlap_integral,
    run_single,
)


def test_registry_contents():
    assert set(str(k) for k in range(13, 22)) <= set(REGISTRY)
    assert {"NLTL2", "NLTL3", "NLTL4", "NLTL5", "NLTL6", "NLTL7", "SEG2", "SEG3"} <= set(REGISTRY)
    for name, preset in REGISTRY.items():
        assert preset.name == name
        assert preset.initial.n == preset.n
    with pytest.raises(KeyError):
        get_preset("nope")


def test_preset_parameter_spot_checks():
    p13 = get_preset("13")
    np.testing.assert_allclose(p13.A, [[0.1251, 0.25], [1.0, 2.0]])
    np.testing.assert_allclose(p13.pi, [4.0, 1.0])
    assert p13.sigma == 1e-4 and p13.T == 1.0
    seg = get_preset("SEG2")
    assert seg.sigma == 0.0 and seg.hypothesis_mode == "warn"
    assert seg.kernel.radius == 0.1 and seg.kernel.amplitude == 100.0
    nltl = get_preset("NLTL3")
    spec = nltl.kernel_family(0.05)
    assert spec.kind == "indicator" and spec.amplitude == pytest.approx(10.0)


def test_kernel_parsing_round_trip():
    spec = parse_kernel({"kind": "triangle", "radius": 0.3, "amplitude": 2.0})
    assert spec.kind == "triangle" and spec.amplitude == 2.0
    with pytest.raises(ConfigError):
        parse_kernel({"kind": "triangle", "radius": 0.3, "bogus": 1})
    with pytest.raises(ConfigError):
        parse_kernel({"kind": "box", "radius": 0.3})


def test_preset_config_round_trip():
    cfg = parse_config(preset_to_config("13"))
    preset = get_preset("13")
    assert cfg.N == preset.N and cfg.T == preset.T and cfg.dt == preset.dt
    np.testing.assert_allclose(cfg.model.A, preset.A)
    mesh = Mesh(cfg.N)
    np.testing.assert_allclose(
        cfg.initial.cell_averages(mesh), preset.initial.cell_averages(mesh), atol=1e-14
    )


def test_localization_preset_needs_alpha():
    with pytest.raises(ConfigError):
        preset_to_config("NLTL3")
    cfg = parse_config(preset_to_config("NLTL3", alpha=0.125))
    assert cfg.model.n == 3


def test_unknown_keys_rejected():
    doc = preset_to_config("13")
    doc["bogus"] = 1
    with pytest.raises(ConfigError):
        parse_config(doc)
    doc = preset_to_config("13")
    doc["mesh"]["M"] = 4
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_config_requires_time_grid():
    doc = preset_to_config("13")
    doc["time"] = {"T": -1.0, "dt": 0.1}
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


def test_ladders():
    assert convergence_ladder("desk") == [
        (32, 1 / 64),
        (64, 1 / 128),
        (128, 1 / 256),
        (256, 1 / 512),
        (512, 1 / 1024),
    ]
    assert convergence_ladder("paper")[-1] == (2048, 1 / 4096)
    mesh = Mesh(256)
    alphas = localization_alphas(mesh, "desk")
    assert alphas[0] == pytest.approx(32 * mesh.dx) and alphas[-1] == pytest.approx(mesh.dx)
    assert len(localization_alphas(Mesh(512), "paper")) == 8


def test_gap_widths_and_overlap():
    mesh = Mesh(10)
    u = np.zeros((2, 10))
    u[0, 2:4] = 1.0
    u[1, 6:8] = 1.0
    state = State(u=u, time=0.0, mesh=mesh)
    assert gap_widths(state) == pytest.approx([0.2, 0.4])
    assert overlap_integral(state) == 0.0
    u[1, 3] = 2.0
    state = State(u=u, time=0.0, mesh=mesh)
    assert overlap_integral(state) == pytest.approx(mesh.dx * 2.0)
    full = State(u=np.ones((1, 10)), time=0.0, mesh=mesh)
    assert gap_widths(full) == []
    empty = State(u=np.zeros((1, 10)), time=0.0, mesh=mesh)
    assert gap_widths(empty) == [1.0]


def test_run_single_writes_artifacts(tmp_path):
    doc = preset_to_config("13")
    doc["mesh"]["N"] = 32
    doc["time"] = {"T": 0.125, "dt": 1.0 / 64.0}
    doc["outputs"] = {"dir": str(tmp_path), "run_id": "t13", "snapshot_times": [0.125]}
    cfg = parse_config(doc)
    result = run_single(cfg, out_dir=tmp_path)
    names = set(result["artifacts"])
    assert any(n.endswith(".csv") and n.startswith("t13_t") for n in names)
    assert any(n.endswith(".png") for n in names)
    assert "t13_entropy.csv" in names
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert sorted(names) == manifest["artifacts"]
    snap = next(n for n in sorted(names) if n.startswith("t13_t0.125"))
    header = (tmp_path / snap).read_text().splitlines()[0]
    assert header == "x,u_1,u_2"


def test_cli_list_and_errors(capsys):
    assert main(["list-testcases"]) == 0
    out = capsys.readouterr().out
    assert "SEG2" in out and "NLTL3" in out
    assert main(["run", "--preset", "nope"]) == 2
    assert main(["run"]) == 2


def test_cli_run_config(tmp_path, capsys):
    doc = preset_to_config("13")
    doc["mesh"]["N"] = 16
    doc["time"] = {"T": 0.0625, "dt": 1.0 / 32.0}
    doc["outputs"] = {"run_id": "quick", "figures": False}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    assert main(["run", "--config", str(path), "--out", str(tmp_path / "out")]) == 0
    assert "completed 2 steps" in capsys.readouterr().out
    assert (tmp_path / "out" / "manifest.json").exists()


def test_cli_counterexample(capsys):
    assert main(["verify-counterexample", "--N", "8"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert main(["verify-counterexample", "--N", "7"]) == 2
