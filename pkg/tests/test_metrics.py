import numpy as np
import pytest

from crossfv.grid import Mesh
from crossfv.metrics import (
    ErrorRecord,
    MetricError,
    eoc,
    lp_error,
    restrict,
    wasserstein1,
    write_study_csv,
)

from oracles import w1_lp


def test_restrict_exact_averaging():
    fine = Mesh(8)
    coarse = Mesh(4)
    v = np.array([1.0, 3.0, 2.0, 4.0, 0.0, 6.0, 5.0, 5.0])
    np.testing.assert_allclose(restrict(v, fine, coarse), [2.0, 3.0, 3.0, 5.0])
    with pytest.raises(MetricError):
        restrict(np.zeros(9), Mesh(9), Mesh(4))


def test_restrict_preserves_mass():
    rng = np.random.default_rng(0)
    fine = Mesh(64)
    coarse = Mesh(16)
    v = rng.random(64)
    assert coarse.dx * restrict(v, fine, coarse).sum() == pytest.approx(
        fine.dx * v.sum(), abs=1e-14
    )


def test_lp_error_hand_values():
    mesh = Mesh(4)
    a = np.array([1.0, 2.0, 3.0, 4.0])
    b = np.array([1.0, 2.0, 3.0, 2.0])
    assert lp_error(a, b, 1.0, mesh) == pytest.approx(0.5)
    assert lp_error(a, b, np.inf, mesh) == pytest.approx(2.0)
    assert lp_error(a, a, 1.0, mesh) == 0.0


def test_wasserstein_translation_by_half_torus():
    # unit masses half a torus apart: distance 0.5 (the torus diameter)
    mesh = Mesh(8)
    a = np.zeros(8)
    b = np.zeros(8)
    a[0] = 8.0
    b[4] = 8.0
    assert wasserstein1(a, b, mesh) == pytest.approx(0.5, abs=1e-12)


def test_wasserstein_small_shift_beats_line_formula():
    # neighbouring point masses across the wrap point: circle distance dx
    mesh = Mesh(8)
    a = np.zeros(8)
    b = np.zeros(8)
    a[0] = 8.0
    b[7] = 8.0
    assert wasserstein1(a, b, mesh) == pytest.approx(mesh.dx, abs=1e-12)


def test_wasserstein_validation():
    mesh = Mesh(4)
    with pytest.raises(MetricError):
        wasserstein1(np.array([1.0, 0, 0, -0.5]), np.ones(4) * 0.125, mesh)
    with pytest.raises(MetricError):
        wasserstein1(np.ones(4), 2.0 * np.ones(4), mesh)


@pytest.mark.parametrize("N", [4, 5, 6, 7, 8])
def test_wasserstein_matches_lp_oracle(N):
    rng = np.random.default_rng(N)
    mesh = Mesh(N)
    for _ in range(8):
        a = rng.integers(0, 10, N).astype(float)
        b = rng.permutation(a)
        assert wasserstein1(a, b, mesh) == pytest.approx(w1_lp(a, b, mesh.dx), abs=1e-9)


def test_eoc_exact_power_law():
    records = [ErrorRecord(h=h, errors={"L1": 3.0 * h**1.5, "Linf": h}) for h in (0.1, 0.05, 0.025)]
    orders = eoc(records)
    assert orders["L1"] == pytest.approx(1.5, abs=1e-12)
    assert orders["Linf"] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(MetricError):
        eoc(records[:1])


def test_eoc_nonpositive_error_is_nan():
    records = [ErrorRecord(h=0.1, errors={"L1": 0.0}), ErrorRecord(h=0.05, errors={"L1": 1.0})]
    assert np.isnan(eoc(records)["L1"])


def test_write_study_csv(tmp_path):
    records = [
        ErrorRecord(h=1.0 / 32, errors={"L1": 1e-2, "Linf": 3e-2, "W1": 5e-3}),
        ErrorRecord(h=1.0 / 64, errors={"L1": 5e-3, "Linf": 1.5e-2, "W1": 2.5e-3}),
    ]
    orders = eoc(records)
    study, order_file = write_study_csv(records, orders, tmp_path / "case")
    lines = open(study).read().splitlines()
    assert lines[0] == "h,N,L1,Linf,W1"
    assert lines[1].split(",")[1] == "32"
    order_lines = open(order_file).read().splitlines()
    assert order_lines[0] == "norm,order"
    assert len(order_lines) == 4
