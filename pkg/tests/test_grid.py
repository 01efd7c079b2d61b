import numpy as np
import pytest

from crossfv.grid import (
    GridError,
    Mesh,
    TimeGrid,
    bv_norm,
    diff,
    mass,
    norm_lq,
    norm_w1q,
    seminorm_w1q,
)


def test_mesh_basics():
    mesh = Mesh(8)
    assert mesh.dx == pytest.approx(1.0 / 8.0)
    np.testing.assert_allclose(mesh.centers, np.arange(8) / 8.0)
    with pytest.raises(GridError):
        Mesh(2)


def test_time_grid():
    tg = TimeGrid(T=1.0, Nt=64)
    assert tg.dt == pytest.approx(1.0 / 64.0)
    np.testing.assert_allclose(tg.times(), np.arange(65) / 64.0)
    with pytest.raises(GridError):
        TimeGrid(T=0.0, Nt=4)


def test_diff_hand_values():
    mesh = Mesh(4)
    np.testing.assert_allclose(diff(np.array([0.0, 2.0, 0.0, 2.0]), mesh), [8.0, -8.0, 8.0, -8.0])
    np.testing.assert_allclose(diff(np.array([0.0, 1.0, 2.0, 3.0]), mesh), [4.0, 4.0, 4.0, -12.0])


def test_diff_constant_and_mismatch():
    mesh = Mesh(6)
    np.testing.assert_array_equal(diff(np.full(6, 3.7), mesh), np.zeros(6))
    with pytest.raises(GridError):
        diff(np.zeros(5), mesh)


def test_norms_constant_field():
    mesh = Mesh(10)
    v = np.full(10, 2.0)
    assert norm_lq(v, 1.0, mesh) == pytest.approx(2.0)
    assert norm_lq(v, 2.0, mesh) == pytest.approx(2.0)
    assert norm_lq(v, np.inf, mesh) == pytest.approx(2.0)
    assert seminorm_w1q(v, 2.0, mesh) == 0.0
    assert norm_w1q(v, 2.0, mesh) == pytest.approx(2.0)
    assert bv_norm(v, mesh) == pytest.approx(2.0)
    assert mass(v, mesh) == pytest.approx(2.0)


def test_norm_monotone_in_q():
    # on a probability space the L^q norms are nondecreasing in q
    rng = np.random.default_rng(3)
    mesh = Mesh(32)
    v = rng.standard_normal(32)
    qs = [1.0, 2.0, 4.0, np.inf]
    vals = [norm_lq(v, q, mesh) for q in qs]
    assert all(a <= b + 1e-12 for a, b in zip(vals[:-1], vals[1:]))


def test_norm_rejects_bad_exponent():
    mesh = Mesh(4)
    with pytest.raises(GridError):
        norm_lq(np.ones(4), 0.5, mesh)
