"""
Implicit Euler finite-volume scheme on the periodic mesh.

Per step the nonlinear system

    (dx/dt)(u_i,l - uprev_i,l) + F_{i,l+1/2} - F_{i,l-1/2} = 0
    F_{i,l+1/2} = -(sigma/dx)(u_{i,l+1} - u_{i,l})
                  - (uhat_{i,l+1/2}/dx)(p_{i,l+1} - p_{i,l})
    p_{i,l} = a_ii u_{i,l} + sum_{j != i} a_ij (B^{ij} conv u_j)_l

is solved by a full Newton iteration on the n*N density unknowns with the
exact Jacobian (periodic tridiagonal blocks from sigma and the local a_ii
part, dense circulant blocks from the convolutions; the upwind branch is
frozen per iteration).  An Armijo backtracking line search guards the
update and a failed solve retries on two half steps.  Accepted states are
mass conserving to 1e-10 and nonnegative to 1e-12 by construction of the
scheme; both are asserted, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import mobility
from .grid import Mesh, TimeGrid
from .initial import InitialData
from .kernels import DiscreteKernel
from .model import ModelParams


class SolverError(RuntimeError):
    """Base class for step-solver failures."""


class NewtonDivergence(SolverError):
    """Newton failed to converge after all time-step retries."""


class NegativeStateUnrecoverable(SolverError):
    """Converged state violates nonnegativity beyond tolerance."""


@dataclass
class SolverOptions:
    tol_newton: float = 1e-10  # scaled by (dx/dt + 1)
    max_newton_iter: int = 50
    max_retries: int = 4  # dt halvings on failure
    tol_neg: float = 1e-12
    tol_mass: float = 1e-10
    armijo_beta: float = 0.5
    armijo_c: float = 1e-4


@dataclass
class StepReport:
    newton_iterations: int
    final_residual_inf: float
    dt_used: float
    retries: int
    mass_defect: np.ndarray  # per species


@dataclass
class State:
    """Densities of all species at one time level."""

    u: np.ndarray  # shape (n, N)
    time: float
    mesh: Mesh

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        if self.u.ndim != 2 or self.u.shape[1] != self.mesh.N:
            raise ValueError(f"state shape {self.u.shape} does not match mesh N={self.mesh.N}")

    @property
    def n(self) -> int:
        return self.u.shape[0]

    def masses(self) -> np.ndarray:
        return self.mesh.dx * self.u.sum(axis=1)


def project_initial(initial: InitialData, mesh: Mesh) -> State:
    """Exact cell averages of the initial data (2.ic style projection)."""
    u0 = initial.cell_averages(mesh)
    if np.min(u0) < -1e-13:
        raise ValueError(f"negative initial data, min cell average {np.min(u0):.3e}")
    return State(u=np.maximum(u0, 0.0), time=0.0, mesh=mesh)


@dataclass
class SchemeOperator:
    """Precomputed per-(mesh, model) data reused across every time step."""

    mesh: Mesh
    params: ModelParams
    kernels: dict[tuple[int, int], DiscreteKernel]
    conv: dict[tuple[int, int], np.ndarray] = field(init=False)

    def __post_init__(self):
        # C_ij[l, l'] = dx * a_ij * B^{ij}_{l-l'} (identity scaling for dirac)
        self.conv = {}
        for (i, j), kernel in self.kernels.items():
            self.conv[(i, j)] = self.params.A[i, j] * kernel.matrix(self.mesh)

    def nonlocal_p(self, u: np.ndarray) -> np.ndarray:
        """Drift potentials p_i for a full state, shape (n, N)."""
        n = self.params.n
        p = self.params.A.diagonal()[:, None] * u
        for i in range(n):
            for j in range(n):
                if j != i:
                    p[i] += self.conv[(i, j)] @ u[j]
        return p

    def _uhat(self, u: np.ndarray, dp: np.ndarray) -> np.ndarray:
        # Newton iterates may dip negative; upwind takes them as-is, the
        # log mean floors its arguments at 1e-14 (solver-internal only)
        uR = np.roll(u, -1, axis=1)
        if self.params.mobility_rule == mobility.UPWIND:
            return np.where(dp >= 0.0, uR, u)
        return mobility.logmean(np.maximum(u, 1e-14), np.maximum(uR, 1e-14))

    def face_fluxes(self, u: np.ndarray, p: np.ndarray) -> np.ndarray:
        """Fluxes F_{i,l+1/2} indexed by the left cell l, shape (n, N)."""
        dx = self.mesh.dx
        du = np.roll(u, -1, axis=1) - u
        dp = np.roll(p, -1, axis=1) - p
        return -(self.params.sigma / dx) * du - (self._uhat(u, dp) / dx) * dp

    def residual(self, u: np.ndarray, u_prev: np.ndarray, dt: float) -> np.ndarray:
        """Implicit Euler residual R_{i,l}, shape (n, N)."""
        F = self.face_fluxes(u, self.nonlocal_p(u))
        return (self.mesh.dx / dt) * (u - u_prev) + F - np.roll(F, 1, axis=1)

    def jacobian(self, u: np.ndarray, dt: float) -> np.ndarray:
        """Exact Jacobian of the residual, shape (n*N, n*N).

        The upwind selection is differentiated with the branch frozen at
        the current dp; negative entries feeding the log mean are floored
        at 1e-14 inside the mobility only.
        """
        n, N = u.shape
        dx = self.mesh.dx
        p = self.nonlocal_p(u)
        dp = np.roll(p, -1, axis=1) - p
        uhat = self._uhat(u, dp)
        if self.params.mobility_rule == mobility.LOGMEAN:
            uL = np.maximum(u, 1e-14)
            uR = np.roll(uL, -1, axis=1)
        else:
            uL = u
            uR = np.roll(u, -1, axis=1)
        dhL, dhR = mobility.face_mobility_derivatives(self.params.mobility_rule, uL, uR, dp)

        eye = np.eye(N)
        J = np.zeros((n * N, n * N))
        for i in range(n):
            # dF_i/du_j on faces, then divergence rows F_l - F_{l-1};
            # the face increment and divergence are periodic row rolls
            for j in range(n):
                if j == i:
                    dP = self.params.A[i, i] * eye
                else:
                    dP = self.conv[(i, j)]
                dF = -(uhat[i][:, None] / dx) * (np.roll(dP, -1, axis=0) - dP)
                if j == i:
                    sig = self.params.sigma / dx
                    mobL = (dp[i] / dx) * dhL[i]
                    mobR = (dp[i] / dx) * dhR[i]
                    rows = np.arange(N)
                    dF[rows, rows] += sig - mobL
                    dF[rows, (rows + 1) % N] += -sig - mobR
                block = dF - np.roll(dF, 1, axis=0)
                if j == i:
                    block[rows, rows] += dx / dt
                J[i * N : (i + 1) * N, j * N : (j + 1) * N] = block
        return J

    def _newton(self, u_prev: np.ndarray, dt: float, opts: SolverOptions):
        n, N = u_prev.shape
        tol = opts.tol_newton * (self.mesh.dx / dt + 1.0)
        u = u_prev.copy()
        res = self.residual(u, u_prev, dt)
        res_inf = float(np.max(np.abs(res)))
        iters = 0
        while res_inf > tol:
            if iters >= opts.max_newton_iter:
                return None, iters, res_inf
            J = self.jacobian(u, dt)
            try:
                delta = np.linalg.solve(J, -res.ravel()).reshape(n, N)
            except np.linalg.LinAlgError:
                return None, iters, res_inf
            # Armijo backtracking on the Euclidean residual norm
            phi0 = float(np.linalg.norm(res))
            t = 1.0
            accepted = False
            for _ in range(30):
                u_trial = u + t * delta
                res_trial = self.residual(u_trial, u_prev, dt)
                if not np.all(np.isfinite(res_trial)):
                    t *= opts.armijo_beta
                    continue
                if float(np.linalg.norm(res_trial)) <= (1.0 - opts.armijo_c * t) * phi0 or t < 1e-8:
                    u, res = u_trial, res_trial
                    accepted = True
                    break
                t *= opts.armijo_beta
            if not accepted:
                return None, iters, res_inf
            res_inf = float(np.max(np.abs(res)))
            iters += 1
        return u, iters, res_inf

    def step(
        self,
        state: State,
        dt: float,
        opts: SolverOptions | None = None,
        _depth: int = 0,
    ) -> tuple[State, StepReport]:
        """Advance one implicit Euler step of size dt.

        On Newton failure (or an unrecoverable negative state) the step is
        re-taken as two half steps, up to max_retries nested halvings.
        """
        opts = opts or SolverOptions()
        u_prev = state.u
        u_next, iters, res_inf = self._newton(u_prev, dt, opts)
        failure = None
        if u_next is None:
            failure = NewtonDivergence(
                f"Newton stalled at t={state.time:.6g}, dt={dt:.3e}, |R|_inf={res_inf:.3e}"
            )
        elif float(np.min(u_next)) < -opts.tol_neg:
            failure = NegativeStateUnrecoverable(
                f"state min {np.min(u_next):.3e} below -{opts.tol_neg:.0e} at t={state.time:.6g}"
            )
        if failure is not None:
            if _depth >= opts.max_retries:
                raise failure
            half_dt = dt / 2.0
            mid, rep1 = self.step(state, half_dt, opts, _depth + 1)
            out, rep2 = self.step(mid, half_dt, opts, _depth + 1)
            report = StepReport(
                newton_iterations=rep1.newton_iterations + rep2.newton_iterations,
                final_residual_inf=max(rep1.final_residual_inf, rep2.final_residual_inf),
                dt_used=min(rep1.dt_used, rep2.dt_used),
                retries=1 + rep1.retries + rep2.retries,
                mass_defect=np.abs(out.masses() - state.masses()),
            )
            return out, report

        # clamp solver-tolerance negatives only after convergence
        u_next[(u_next > -opts.tol_neg) & (u_next < 0.0)] = 0.0
        next_state = State(u=u_next, time=state.time + dt, mesh=self.mesh)
        defect = np.abs(next_state.masses() - state.masses())
        if np.any(defect > opts.tol_mass * (1.0 + state.masses())):
            raise SolverError(f"mass defect {np.max(defect):.3e} exceeds tolerance")
        return next_state, StepReport(
            newton_iterations=iters,
            final_residual_inf=res_inf,
            dt_used=dt,
            retries=0,
            mass_defect=defect,
        )


def run(
    initial: InitialData | State,
    time_grid: TimeGrid,
    params: ModelParams,
    mesh: Mesh | None = None,
    opts: SolverOptions | None = None,
    keep_every: int = 1,
) -> tuple[list[State], list[StepReport]]:
    """Time loop over the implicit scheme.

    Returns the trajectory (initial state always included, thinned by
    keep_every but always keeping the final state) and per-step reports.
    """
    if isinstance(initial, State):
        state = initial
        mesh = state.mesh
    else:
        if mesh is None:
            raise ValueError("mesh required when starting from analytic initial data")
        state = project_initial(initial, mesh)
    op = SchemeOperator(mesh=mesh, params=params, kernels=params.tabulate_kernels(mesh))
    trajectory = [state]
    reports: list[StepReport] = []
    for k in range(time_grid.Nt):
        state, report = op.step(state, time_grid.dt, opts)
        reports.append(report)
        if (k + 1) % keep_every == 0 or k == time_grid.Nt - 1:
            trajectory.append(state)
    return trajectory, reports
