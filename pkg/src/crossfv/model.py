"""
Model parameters, detailed-balance and coercivity checks.

A model is an n-species interaction matrix A = (a_ij), positive weights
pi_i, a diffusion coefficient sigma, one kernel per ordered pair (i, j)
with i != j, and a mobility rule.  Validation covers the detailed-balance
condition pi_i a_ij = pi_j a_ji and positive definiteness of the 2x2 pair
matrices

    ( pi_i a_ii                 (n-1) pi_i a_ij B_m )
    ( (n-1) pi_j a_ji B_m       pi_j a_jj           )

over all pairs i < j and kernel offsets m; c_M is their uniform smallest
eigenvalue.  In warn mode a violation sets a flag instead of raising,
which is what the segregation experiments need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import mobility
from .grid import Mesh
from .kernels import DiscreteKernel, KernelSpec, cell_average


class DetailedBalanceViolation(ValueError):
    """pi_i a_ij != pi_j a_ji beyond tolerance in strict mode."""


class HypothesisH3Violation(ValueError):
    """Some pair matrix fails positive definiteness in strict mode."""


_DB_RTOL = 1e-12  # relative tolerance for user-entered decimal parameters


@dataclass
class ModelParams:
    """Parameters of the nonlocal cross-diffusion model."""

    n: int
    A: np.ndarray
    pi: np.ndarray
    sigma: float
    kernels: dict[tuple[int, int], KernelSpec]
    mobility_rule: str = mobility.UPWIND
    hypothesis_mode: str = "strict"

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        self.pi = np.asarray(self.pi, dtype=float)
        if self.n < 1:
            raise ValueError(f"species count must be >= 1, got {self.n}")
        if self.A.shape != (self.n, self.n):
            raise ValueError(f"interaction matrix must be {self.n}x{self.n}")
        if self.pi.shape != (self.n,) or np.any(self.pi <= 0.0):
            raise ValueError("weights pi must be positive, one per species")
        if self.sigma < 0.0:
            raise ValueError(f"diffusion sigma must be >= 0, got {self.sigma}")
        if self.mobility_rule not in (mobility.UPWIND, mobility.LOGMEAN):
            raise ValueError(f"unknown mobility rule {self.mobility_rule!r}")
        if self.hypothesis_mode not in ("strict", "warn"):
            raise ValueError(f"unknown hypothesis mode {self.hypothesis_mode!r}")
        for i in range(self.n):
            for j in range(self.n):
                if i != j and (i, j) not in self.kernels:
                    raise ValueError(f"missing kernel for species pair ({i}, {j})")

    @staticmethod
    def with_shared_kernel(n, A, pi, sigma, kernel: KernelSpec, **kw) -> "ModelParams":
        """All ordered pairs use the same kernel (the common case)."""
        kernels = {(i, j): kernel for i in range(n) for j in range(n) if i != j}
        return ModelParams(n=n, A=A, pi=pi, sigma=sigma, kernels=kernels, **kw)

    def tabulate_kernels(self, mesh: Mesh) -> dict[tuple[int, int], DiscreteKernel]:
        return {pair: cell_average(spec, mesh) for pair, spec in self.kernels.items()}

    def all_dirac(self) -> bool:
        return all(spec.kind == "dirac" for spec in self.kernels.values())


def check_detailed_balance(params: ModelParams) -> float:
    """Max defect |pi_i a_ij - pi_j a_ji| over pairs; raises in strict mode."""
    P = params.pi[:, None] * params.A
    defect = float(np.max(np.abs(P - P.T))) if params.n > 1 else 0.0
    scale = float(np.max(np.abs(P)))
    if params.hypothesis_mode == "strict" and defect > _DB_RTOL * max(scale, 1e-300):
        raise DetailedBalanceViolation(
            f"detailed-balance defect {defect:.3e} exceeds {_DB_RTOL:.0e} x {scale:.3e}"
        )
    return defect


def assemble_pair_matrix(params: ModelParams, i: int, j: int, b: float) -> np.ndarray:
    """2x2 pair matrix for species i < j at kernel value b."""
    if i >= j:
        raise ValueError(f"pair matrix requires i < j, got ({i}, {j})")
    n, A, pi = params.n, params.A, params.pi
    return np.array(
        [
            [pi[i] * A[i, i], (n - 1) * pi[i] * A[i, j] * b],
            [(n - 1) * pi[j] * A[j, i] * b, pi[j] * A[j, j]],
        ]
    )


def _min_eig_2x2(M: np.ndarray) -> float:
    # closed-form smallest eigenvalue of a (near-)symmetric 2x2 matrix
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    disc = max(tr * tr - 4.0 * det, 0.0)
    return 0.5 * (tr - np.sqrt(disc))


def coercivity_constant(
    params: ModelParams,
    discrete_kernels: dict[tuple[int, int], DiscreteKernel],
) -> tuple[float | None, bool]:
    """Uniform smallest eigenvalue c_M over pairs i < j and offsets.

    Returns (c_M, violated).  Dirac cross-kernels have no offset-indexed
    matrix family; if every cross-kernel is dirac the constant is reported
    as None (not applicable) and no strictness is enforced.  In strict
    mode c_M <= 0 raises; in warn mode the flag is set instead.
    """
    if params.n == 1:
        c = float(params.pi[0] * params.A[0, 0])
        return c, c <= 0.0
    c_M = np.inf
    any_tabulated = False
    for i in range(params.n):
        for j in range(i + 1, params.n):
            kernel = discrete_kernels[(i, j)]
            if kernel.mode == "dirac":
                continue
            any_tabulated = True
            for b in np.unique(kernel.weights):
                c_M = min(c_M, _min_eig_2x2(assemble_pair_matrix(params, i, j, b)))
    if not any_tabulated:
        return None, False
    violated = c_M <= 0.0
    if violated and params.hypothesis_mode == "strict":
        raise HypothesisH3Violation(f"pair matrices are not positive definite, c_M={c_M:.3e}")
    return float(c_M), violated


def validate(params: ModelParams, mesh: Mesh) -> tuple[float | None, bool]:
    """Run detailed-balance and coercivity checks; returns (c_M, warn flag)."""
    check_detailed_balance(params)
    return coercivity_constant(params, params.tabulate_kernels(mesh))
