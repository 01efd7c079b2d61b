import numpy as np
import pytest

from crossfv.entropy import (
    boltzmann_entropy,
    dissipation_forms,
    ledger,
    write_entropy_csv,
)
from crossfv.grid import Mesh, TimeGrid
from crossfv.kernels import KernelSpec
from crossfv.model import ModelParams
from crossfv.presets import get_preset
from crossfv.scheme import State, project_initial, run
from crossfv import rao_entropy

from oracles import qgrad_double_loop, rao_double_loop


def _weights(model, mesh):
    return {
        pair: (None if k.mode == "dirac" else k.weights)
        for pair, k in model.tabulate_kernels(mesh).items()
    }


def test_boltzmann_hand_value():
    preset = get_preset("13")
    # N = 34: the jumps of the indicator data sit on cell faces, both
    # species are 0/1-valued with masses 1/2 and H_B = (4 + 1) * 0.5 * h(1)
    state = project_initial(preset.initial, Mesh(34))
    assert boltzmann_entropy(state, preset.model()) == pytest.approx(-2.5, abs=1e-12)
    # N = 32: the jumps fall mid-cell, each species has 15 full cells and
    # two half cells; H_B = 5 * dx * (15 h(1) + 2 h(1/2))
    state = project_initial(preset.initial, Mesh(32))
    expected = 5.0 / 32.0 * (-15.0 + (np.log(0.5) - 1.0))
    assert boltzmann_entropy(state, preset.model()) == pytest.approx(expected, abs=1e-12)


def test_boltzmann_zero_state():
    mesh = Mesh(8)
    model = get_preset("13").model()
    state = State(u=np.zeros((2, 8)), time=0.0, mesh=mesh)
    assert boltzmann_entropy(state, model) == 0.0
    with pytest.raises(ValueError):
        boltzmann_entropy(State(u=np.full((2, 8), -1e-6), time=0.0, mesh=mesh), model)


@pytest.mark.parametrize("N", [6, 8, 12, 16])
def test_rao_matches_double_loop(N):
    preset = get_preset("13")
    model = preset.model()
    mesh = Mesh(N)
    kernels = model.tabulate_kernels(mesh)
    rng = np.random.default_rng(N)
    state = State(u=rng.random((2, N)) * 3.0, time=0.0, mesh=mesh)
    oracle = rao_double_loop(state.u, model.A, model.pi, _weights(model, mesh), mesh.dx)
    assert rao_entropy(state, model, kernels) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("N", [6, 8, 12, 16])
def test_qgrad_matches_double_loop(N):
    preset = get_preset("13")
    model = preset.model()
    mesh = Mesh(N)
    kernels = model.tabulate_kernels(mesh)
    rng = np.random.default_rng(100 + N)
    state = State(u=rng.random((2, N)) * 2.0, time=0.0, mesh=mesh)
    Q, _ = dissipation_forms(state, model, kernels)
    oracle = qgrad_double_loop(state.u, model.A, model.pi, _weights(model, mesh), mesh.dx)
    assert Q == pytest.approx(oracle, abs=1e-12 * max(1.0, abs(oracle)))


def test_qgrad_three_species_matches_double_loop():
    preset = get_preset("NLTL2")
    model = preset.model(preset.kernel_family(0.1))
    mesh = Mesh(12)
    kernels = model.tabulate_kernels(mesh)
    rng = np.random.default_rng(9)
    state = State(u=rng.random((3, 12)), time=0.0, mesh=mesh)
    Q, _ = dissipation_forms(state, model, kernels)
    oracle = qgrad_double_loop(state.u, model.A, model.pi, _weights(model, mesh), mesh.dx)
    assert Q == pytest.approx(oracle, abs=1e-12 * max(1.0, abs(oracle)))


def test_rao_dirac_reduces_to_local_form():
    model = ModelParams.with_shared_kernel(
        n=2,
        A=np.array([[0.1251, 0.25], [1.0, 2.0]]),
        pi=np.array([4.0, 1.0]),
        sigma=0.0,
        kernel=KernelSpec.dirac(),
    )
    mesh = Mesh(10)
    rng = np.random.default_rng(2)
    u = rng.random((2, 10))
    state = State(u=u, time=0.0, mesh=mesh)
    expected = 0.0
    for i in range(2):
        for j in range(2):
            expected += 0.5 * model.pi[i] * model.A[i, j] * mesh.dx * float(np.dot(u[i], u[j]))
    assert rao_entropy(state, model, model.tabulate_kernels(mesh)) == pytest.approx(
        expected, abs=1e-13
    )


def test_dissipation_nonnegative_for_valid_params():
    preset = get_preset("13")
    model = preset.model()
    mesh = Mesh(24)
    kernels = model.tabulate_kernels(mesh)
    rng = np.random.default_rng(4)
    for _ in range(50):
        state = State(u=rng.random((2, 24)) * 5.0, time=0.0, mesh=mesh)
        Q, D = dissipation_forms(state, model, kernels)
        assert Q >= -1e-12
        assert D >= 0.0


def test_ledger_monotone_entropies_short_run(tmp_path):
    preset = get_preset("14")
    model = preset.model()
    mesh = Mesh(64)
    trajectory, _ = run(preset.initial, TimeGrid(T=0.25, Nt=32), model, mesh=mesh)
    reports = ledger(trajectory, model)
    for prev, cur in zip(reports[:-1], reports[1:]):
        assert cur.H_B <= prev.H_B + 1e-8 * (1.0 + abs(prev.H_B))
        assert cur.H_R <= prev.H_R + 1e-8 * (1.0 + abs(prev.H_R))
    path = tmp_path / "entropy.csv"
    write_entropy_csv(reports, model.n, path)
    header = path.read_text().splitlines()[0]
    assert header == "t,H_B,H_R,Q_grad,D_rao,mass_1,mass_2"
    assert len(path.read_text().splitlines()) == len(reports) + 1
