"""
Experiment drivers: single runs, the convergence ladder, the localization
ladder, and the segregation comparison.

Each driver writes delimited output (17 significant digits) plus rendered
figures under the output directory and records every artifact in a
manifest file.  The desk scale bounds runtimes for CI; the paper scale
reproduces the published protocol.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import plots
from .config import RunConfig
from .entropy import ledger, write_entropy_csv
from .grid import Mesh, TimeGrid
from .metrics import ErrorRecord, eoc, lp_error, restrict, wasserstein1, write_study_csv
from .model import validate
from .presets import Preset, get_preset
from .scheme import State, run

DESK = "desk"
PAPER = "paper"


@dataclass
class Artifacts:
    directory: Path
    files: list[str] = field(default_factory=list)

    def register(self, path: Path) -> Path:
        self.files.append(str(path.relative_to(self.directory)))
        return path

    def write_manifest(self) -> Path:
        path = self.directory / "manifest.json"
        path.write_text(json.dumps({"artifacts": sorted(self.files)}, indent=2) + "\n")
        return path


def _make_out(out_dir) -> Artifacts:
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    return Artifacts(directory=directory)


def _write_snapshot(state: State, run_id: str, art: Artifacts) -> Path:
    path = art.directory / f"{run_id}_t{state.time:.6f}.csv"
    header = "x," + ",".join(f"u_{i + 1}" for i in range(state.n))
    rows = [header]
    for ell in range(state.mesh.N):
        vals = [f"{state.mesh.centers[ell]:.17g}"] + [
            f"{state.u[i, ell]:.17g}" for i in range(state.n)
        ]
        rows.append(",".join(vals))
    path.write_text("\n".join(rows) + "\n")
    return art.register(path)


def _aggregate_errors(
    a: np.ndarray, b: np.ndarray, mesh: Mesh, with_w1: bool = True
) -> dict[str, float]:
    """Distances between two multi-species states on a shared mesh.

    L1 and W1 are summed over species, Linf is the max over species.
    """
    n = a.shape[0]
    out = {
        "L1": sum(lp_error(a[i], b[i], 1.0, mesh) for i in range(n)),
        "Linf": max(lp_error(a[i], b[i], np.inf, mesh) for i in range(n)),
    }
    if with_w1:
        out["W1"] = sum(wasserstein1(a[i], b[i], mesh) for i in range(n))
    return out


def run_single(cfg: RunConfig, out_dir=None, entropy_ledger: bool = True) -> dict:
    """One simulation with full CSV/figure output."""
    art = _make_out(out_dir or cfg.outputs.directory)
    run_id = cfg.outputs.run_id
    mesh = Mesh(cfg.N)
    validate(cfg.model, mesh)
    nt = max(1, round(cfg.T / cfg.dt))
    time_grid = TimeGrid(T=cfg.T, Nt=nt)
    trajectory, reports = run(cfg.initial, time_grid, cfg.model, mesh=mesh)

    snap_times = cfg.outputs.snapshot_times or (cfg.T,)
    written = []
    for t in snap_times:
        state = min(trajectory, key=lambda s: abs(s.time - t))
        written.append(_write_snapshot(state, run_id, art))
        if cfg.outputs.figures:
            fig_path = art.directory / f"{run_id}_t{state.time:.6f}.png"
            plots.plot_profiles(state, fig_path, title=f"{run_id}, t = {state.time:.4g}")
            art.register(fig_path)

    ent_reports = []
    if entropy_ledger:
        ent_reports = ledger(trajectory, cfg.model)
        ent_path = art.directory / f"{run_id}_entropy.csv"
        write_entropy_csv(ent_reports, cfg.model.n, ent_path)
        art.register(ent_path)
        if cfg.outputs.figures:
            fig_path = art.directory / f"{run_id}_entropy.png"
            plots.plot_entropy(ent_reports, fig_path, title=run_id)
            art.register(fig_path)

    art.write_manifest()
    return {
        "trajectory": trajectory,
        "step_reports": reports,
        "entropy_reports": ent_reports,
        "artifacts": art.files,
    }


def convergence_ladder(scale: str) -> list[tuple[int, float]]:
    """(N, dt) pairs, doubling N and halving dt from 32 and 1/64."""
    n_end = 2048 if scale == PAPER else 512
    out = []
    N, dt = 32, 1.0 / 64.0
    while N <= n_end:
        out.append((N, dt))
        N, dt = 2 * N, dt / 2.0
    return out


def run_convergence_study(preset: Preset | str, scale: str = DESK, out_dir="out") -> dict:
    """Mesh-refinement ladder against the finest level as reference."""
    preset = get_preset(preset) if isinstance(preset, str) else preset
    art = _make_out(out_dir)
    model = preset.model()
    ladder = convergence_ladder(scale)
    finals: list[State] = []
    for N, dt in ladder:
        mesh = Mesh(N)
        validate(model, mesh)
        time_grid = TimeGrid(T=preset.T, Nt=round(preset.T / dt))
        trajectory, _ = run(preset.initial, time_grid, model, mesh=mesh, keep_every=time_grid.Nt)
        finals.append(trajectory[-1])

    reference = finals[-1]
    records = []
    for state in finals[:-1]:
        coarse = state.mesh
        ref = np.stack(
            [restrict(reference.u[i], reference.mesh, coarse) for i in range(model.n)]
        )
        records.append(ErrorRecord(h=coarse.dx, errors=_aggregate_errors(state.u, ref, coarse)))
    orders = eoc(records)

    prefix = art.directory / f"{preset.name}_convergence"
    for path in write_study_csv(records, orders, prefix):
        art.register(Path(path))
    fig_path = art.directory / f"{preset.name}_convergence.png"
    plots.plot_error_ladder(
        records, orders, fig_path, xlabel="h", title=f"testcase {preset.name}"
    )
    art.register(fig_path)
    art.write_manifest()
    return {
        "records": records,
        "orders": orders,
        "final_level_error": records[-1].errors,
        "artifacts": art.files,
    }


def localization_alphas(mesh: Mesh, scale: str) -> list[float]:
    """Halving ladder from 2^7 dx (paper) or 2^5 dx (desk) down to dx."""
    k = 7 if scale == PAPER else 5
    return [(2**s) * mesh.dx for s in range(k, -1, -1)]


def run_localization_study(preset: Preset | str, scale: str = DESK, out_dir="out") -> dict:
    """Kernel localization ladder against the local (Dirac) reference."""
    preset = get_preset(preset) if isinstance(preset, str) else preset
    if preset.kernel_family is None:
        raise ValueError(f"preset {preset.name} has no kernel family")
    art = _make_out(out_dir)
    N = preset.N if scale == PAPER else 256
    dt = preset.dt
    mesh = Mesh(N)
    time_grid = TimeGrid(T=preset.T, Nt=round(preset.T / dt))

    local_model = preset.model_local()
    trajectory, _ = run(
        preset.initial, time_grid, local_model, mesh=mesh, keep_every=time_grid.Nt
    )
    reference = trajectory[-1]

    records = []
    for alpha in localization_alphas(mesh, scale):
        model = preset.model(preset.kernel_family(alpha))
        validate(model, mesh)
        trajectory, _ = run(preset.initial, time_grid, model, mesh=mesh, keep_every=time_grid.Nt)
        records.append(
            ErrorRecord(h=alpha, errors=_aggregate_errors(trajectory[-1].u, reference.u, mesh))
        )
    records.sort(key=lambda r: r.h, reverse=True)
    orders = eoc(records)

    prefix = art.directory / f"{preset.name}_localization"
    for path in write_study_csv(records, orders, prefix):
        art.register(Path(path))
    fig_path = art.directory / f"{preset.name}_localization.png"
    plots.plot_error_ladder(
        records, orders, fig_path, xlabel="alpha", title=f"testcase {preset.name}"
    )
    art.register(fig_path)
    art.write_manifest()
    return {"records": records, "orders": orders, "artifacts": art.files}


def gap_widths(state: State, threshold: float = 1e-3) -> list[float]:
    """Widths of maximal circular runs where every species is below threshold."""
    below = np.all(state.u < threshold, axis=0)
    if np.all(below):
        return [1.0]
    if not np.any(below):
        return []
    # rotate so a populated cell sits at index 0, then scan plain runs
    start = int(np.argmin(below))
    rolled = np.roll(below, -start)
    widths = []
    count = 0
    for flag in rolled:
        if flag:
            count += 1
        elif count:
            widths.append(count * state.mesh.dx)
            count = 0
    if count:
        widths.append(count * state.mesh.dx)
    return sorted(widths)


def overlap_integral(state: State) -> float:
    """Max over species pairs of sum_l dx u_i u_j."""
    n = state.n
    out = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            out = max(out, float(state.mesh.dx * np.dot(state.u[i], state.u[j])))
    return out


def run_segregation(preset: Preset | str, out_dir="out", snapshot_times=(0.02, 0.2)) -> dict:
    """Local vs nonlocal segregation runs with gap report."""
    preset = get_preset(preset) if isinstance(preset, str) else preset
    art = _make_out(out_dir)
    mesh = Mesh(preset.N)
    time_grid = TimeGrid(T=preset.T, Nt=round(preset.T / preset.dt))
    keep = max(1, round(min(snapshot_times) / preset.dt))

    results = {}
    gap_rows = ["variant,t,gap_widths,overlap"]
    for variant, model in (("local", preset.model_local()), ("nonlocal", preset.model())):
        validate(model, mesh)
        trajectory, _ = run(preset.initial, time_grid, model, mesh=mesh, keep_every=keep)
        snaps = {}
        for t in snapshot_times:
            state = min(trajectory, key=lambda s: abs(s.time - t))
            run_id = f"{preset.name}_{variant}"
            _write_snapshot(state, run_id, art)
            fig_path = art.directory / f"{run_id}_t{state.time:.6f}.png"
            plots.plot_profiles(state, fig_path, title=f"{run_id}, t = {state.time:.4g}")
            art.register(fig_path)
            gaps = gap_widths(state)
            overlap = overlap_integral(state)
            snaps[t] = {"state": state, "gaps": gaps, "overlap": overlap}
            gap_rows.append(
                f"{variant},{state.time:.17g},"
                + ";".join(f"{g:.17g}" for g in gaps)
                + f",{overlap:.17g}"
            )
        results[variant] = snaps
    gap_path = art.directory / f"{preset.name}_gaps.csv"
    gap_path.write_text("\n".join(gap_rows) + "\n")
    art.register(gap_path)
    art.write_manifest()
    results["artifacts"] = art.files
    return results
