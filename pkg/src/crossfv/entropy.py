"""
Discrete Boltzmann and Rao entropies and their dissipation forms.

The ledger evaluates, per accepted time level, the entropies, masses, the
pair-matrix quadratic form Q_grad on the difference quotients (reported
unscaled; prefactors like c0*dt/(n-1) belong to the caller), and the
mobility-weighted drift dissipation D_rao.  For parameter sets that
violate the coercivity hypothesis the entropies are still recorded but no
monotonicity is claimed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .grid import diff
from .kernels import DiscreteKernel, convolve
from .model import ModelParams
from .scheme import SchemeOperator, State


@dataclass
class EntropyReport:
    t: float
    H_B: float
    H_R: float
    mass: np.ndarray
    Q_grad: float
    D_rao: float


def _h(s: np.ndarray) -> np.ndarray:
    # s (log s - 1) with h(0) = 0 by continuity
    out = np.zeros_like(s)
    pos = s > 0.0
    out[pos] = s[pos] * (np.log(s[pos]) - 1.0)
    return out


def boltzmann_entropy(state: State, params: ModelParams, tol_neg: float = 1e-12) -> float:
    """H_B = sum_i sum_l dx pi_i h(u_{i,l})."""
    if float(np.min(state.u)) < -tol_neg:
        raise ValueError(f"state entry {np.min(state.u):.3e} below -{tol_neg:.0e}")
    u = np.maximum(state.u, 0.0)
    return float(state.mesh.dx * np.dot(params.pi, _h(u).sum(axis=1)))


def rao_entropy(
    state: State,
    params: ModelParams,
    kernels: dict[tuple[int, int], DiscreteKernel],
) -> float:
    """Quadratic diversity functional with kernel-weighted cross products."""
    mesh, u = state.mesh, state.u
    n = params.n
    out = 0.5 * mesh.dx * float(
        np.sum(params.pi * params.A.diagonal() * np.sum(u * u, axis=1))
    )
    for i in range(n):
        for j in range(n):
            if j != i:
                conv = convolve(kernels[(i, j)], u[j], mesh)
                out += 0.5 * params.pi[i] * params.A[i, j] * mesh.dx * float(np.dot(u[i], conv))
    return out


def dissipation_forms(
    state: State,
    params: ModelParams,
    kernels: dict[tuple[int, int], DiscreteKernel],
    operator: SchemeOperator | None = None,
) -> tuple[float, float]:
    """(Q_grad, D_rao) at one time level.

    Q_grad is the pair-matrix quadratic form on the difference quotients
    with the 1/(n-1) pairing convention (for n = 1 it degenerates to the
    weighted H^1 seminorm).  D_rao = sum_i sum_l dx pi_i uhat (D p_i)^2.
    """
    mesh, u = state.mesh, state.u
    n = params.n
    du = np.stack([diff(u[i], mesh) for i in range(n)])
    pi, A = params.pi, params.A
    if n == 1:
        Q_grad = float(pi[0] * A[0, 0] * mesh.dx * np.sum(du[0] ** 2))
    else:
        Q_grad = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                local = pi[i] * A[i, i] * mesh.dx * np.sum(du[i] ** 2) + pi[j] * A[
                    j, j
                ] * mesh.dx * np.sum(du[j] ** 2)
                cross = (
                    (n - 1)
                    * (pi[i] * A[i, j] + pi[j] * A[j, i])
                    * mesh.dx
                    * float(np.dot(du[i], convolve(kernels[(i, j)], du[j], mesh)))
                )
                Q_grad += (local + cross) / (n - 1)

    op = operator or SchemeOperator(mesh=mesh, params=params, kernels=kernels)
    p = op.nonlocal_p(u)
    dp = np.roll(p, -1, axis=1) - p
    uhat = op._uhat(np.maximum(u, 0.0), dp)
    D_rao = float(mesh.dx * np.dot(pi, np.sum(uhat * (dp / mesh.dx) ** 2, axis=1)))
    return Q_grad, D_rao


def ledger(
    trajectory: list[State],
    params: ModelParams,
    kernels: dict[tuple[int, int], DiscreteKernel] | None = None,
) -> list[EntropyReport]:
    """Entropy/mass/dissipation report for every state of a trajectory."""
    if not trajectory:
        return []
    mesh = trajectory[0].mesh
    if kernels is None:
        kernels = params.tabulate_kernels(mesh)
    op = SchemeOperator(mesh=mesh, params=params, kernels=kernels)
    reports = []
    for state in trajectory:
        Q_grad, D_rao = dissipation_forms(state, params, kernels, op)
        reports.append(
            EntropyReport(
                t=state.time,
                H_B=boltzmann_entropy(state, params),
                H_R=rao_entropy(state, params, kernels),
                mass=state.masses(),
                Q_grad=Q_grad,
                D_rao=D_rao,
            )
        )
    return reports


def write_entropy_csv(reports: list[EntropyReport], n: int, path) -> None:
    """t,H_B,H_R,Q_grad,D_rao,mass_1,...,mass_n rows, one per time level."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t", "H_B", "H_R", "Q_grad", "D_rao"] + [f"mass_{i + 1}" for i in range(n)]
        )
        for rep in reports:
            row = [rep.t, rep.H_B, rep.H_R, rep.Q_grad, rep.D_rao] + list(rep.mass)
            writer.writerow([f"{v:.17g}" for v in row])
