"""
Independent brute-force oracles used by the test suite.

Everything here is written against the definitions directly, with plain
loops and dense matrices, and deliberately shares no code path with the
library: the implicit step is solved by damped Picard iteration instead
of Newton, the entropies and quadratic forms by O(N^2) double loops, and
the transport distance by an explicit linear program.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def conv_matrix(weights, N, dx):
    """Dense convolution matrix C[l, lp] = dx * B_{l-lp}; None means Dirac."""
    if weights is None:
        return np.eye(N)
    C = np.zeros((N, N))
    for ell in range(N):
        for lp in range(N):
            C[ell, lp] = dx * weights[(ell - lp) % N]
    return C


def picard_step(u_prev, A, pi, sigma, weights, dx, dt, damping=0.5, tol=1e-12, max_iter=20000):
    """One implicit Euler step by damped Picard iteration with direct solves.

    weights maps (i, j) to a kernel weight vector (None for Dirac).  The
    upwind mobility and the potential are frozen from the current iterate,
    the resulting linear system in the new densities is solved densely,
    and the iterate is relaxed with the damping factor.
    """
    A = np.asarray(A, dtype=float)
    n, N = u_prev.shape
    S = np.zeros((N, N))  # (S v)_l = v_{l+1}
    for ell in range(N):
        S[ell, (ell + 1) % N] = 1.0
    G = S - np.eye(N)  # face increment, indexed by the left cell
    Dv = np.eye(N) - S.T  # divergence of face values, F_l - F_{l-1}

    C = {
        (i, j): A[i, j] * conv_matrix(weights[(i, j)], N, dx)
        for i in range(n)
        for j in range(n)
        if i != j
    }

    def potential(u):
        p = np.zeros((n, N))
        for i in range(n):
            p[i] = A[i, i] * u[i]
            for j in range(n):
                if j != i:
                    p[i] += C[(i, j)] @ u[j]
        return p

    u = u_prev.copy()
    for _ in range(max_iter):
        p = potential(u)
        # frozen upwind mobility from the current iterate
        uhat = np.zeros((n, N))
        for i in range(n):
            for ell in range(N):
                dp = p[i, (ell + 1) % N] - p[i, ell]
                uhat[i, ell] = u[i, (ell + 1) % N] if dp >= 0.0 else u[i, ell]

        # linear system M v = (dx/dt) u_prev over all n*N unknowns
        M = np.zeros((n * N, n * N))
        for i in range(n):
            rows = slice(i * N, (i + 1) * N)
            M[rows, rows] += (dx / dt) * np.eye(N)
            for j in range(n):
                cols = slice(j * N, (j + 1) * N)
                P_block = A[i, i] * np.eye(N) if j == i else C[(i, j)]
                flux = -(np.diag(uhat[i]) / dx) @ G @ P_block
                if j == i:
                    flux += -(sigma / dx) * G
                M[rows, cols] += Dv @ flux
        v = np.linalg.solve(M, (dx / dt) * u_prev.ravel()).reshape(n, N)
        u_new = (1.0 - damping) * u + damping * v
        if np.max(np.abs(u_new - u)) < tol:
            return u_new
        u = u_new
    raise RuntimeError("Picard oracle did not converge")


def rao_double_loop(u, A, pi, weights, dx):
    """Rao entropy by explicit double sums."""
    A = np.asarray(A, dtype=float)
    n, N = u.shape
    out = 0.0
    for i in range(n):
        for ell in range(N):
            out += 0.5 * pi[i] * A[i, i] * dx * u[i, ell] ** 2
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            B = weights[(i, j)]
            for ell in range(N):
                for lp in range(N):
                    b = 1.0 / dx if B is None and ell == lp else (0.0 if B is None else B[(ell - lp) % N])
                    out += 0.5 * pi[i] * A[i, j] * dx * dx * b * u[i, ell] * u[j, lp]
    return out


def qgrad_double_loop(u, A, pi, weights, dx):
    """Pair quadratic form on difference quotients by explicit double sums."""
    A = np.asarray(A, dtype=float)
    n, N = u.shape
    du = np.zeros((n, N))
    for i in range(n):
        for ell in range(N):
            du[i, ell] = (u[i, (ell + 1) % N] - u[i, ell]) / dx
    out = 0.0
    for i in range(n):
        for ell in range(N):
            out += dx * pi[i] * A[i, i] * du[i, ell] ** 2
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            B = weights[(i, j)]
            for ell in range(N):
                for lp in range(N):
                    b = 1.0 / dx if B is None and ell == lp else (0.0 if B is None else B[(ell - lp) % N])
                    out += dx * dx * pi[i] * A[i, j] * b * du[i, ell] * du[j, lp]
    return out


def w1_lp(a, b, dx):
    """Wasserstein-1 on the circle by a dense transport linear program.

    Cell masses dx*a_l sit at the cell centers; the ground cost is the
    torus distance between centers.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    N = a.size
    cost = np.zeros((N, N))
    for ell in range(N):
        for lp in range(N):
            d = abs(ell - lp) * dx
            cost[ell, lp] = min(d, 1.0 - d)
    A_eq = np.zeros((2 * N, N * N))
    for ell in range(N):
        A_eq[ell, ell * N : (ell + 1) * N] = 1.0
        A_eq[N + ell, ell::N] = 1.0
    b_eq = np.concatenate([dx * a, dx * b])
    res = linprog(cost.ravel(), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    return float(res.fun)
