"""
Witness that cell-pair double integrals of an indicator kernel can form an
indefinite matrix.

For the indicator kernel with radius 3*dx/2 the N x N matrix of exact
double integrals over cell pairs is pentadiagonal-periodic with entries
dx^2, (7/8) dx^2, (1/8) dx^2 by closed-form overlap areas.  The
alternating +-1 vector is an exact eigenvector with negative eigenvalue,
so the associated quadratic form takes negative values for any symmetric
positive definite weight matrix.  Entries are hard-coded from the overlap
computation and cross-checked against 2-D Gauss quadrature; any mismatch
fails loudly.

This matrix is the double integral over both cells, not the scheme's
cell-average weight dx^2 * B_{l-l'}; the two must not be conflated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss


class CounterexampleError(ValueError):
    """Invalid input or falsified construction."""


@dataclass(frozen=True)
class ExactPairMatrix:
    N: int
    matrix: np.ndarray  # N x N, pentadiagonal-periodic


def build_exact_matrix(N: int) -> ExactPairMatrix:
    """Exact double-integral matrix for the indicator kernel, r = 3 dx / 2."""
    if N <= 5 or N % 2 != 0:
        raise CounterexampleError(f"need an even cell count > 5, got N={N}")
    dx = 1.0 / N
    M = np.zeros((N, N))
    entries = {0: dx * dx, 1: 0.875 * dx * dx, 2: 0.125 * dx * dx}
    for offset, value in entries.items():
        for ell in range(N):
            M[ell, (ell + offset) % N] = value
            M[ell, (ell - offset) % N] = value
    return ExactPairMatrix(N=N, matrix=M)


def quadrature_entry(N: int, offset: int, nodes: int = 8) -> float:
    """Quadrature evaluation of one matrix entry, independent of the table.

    Reduces the double integral over the cell pair to a 1-D integral of
    the overlap length len([x-r, x+r] cap cell'), which is piecewise
    linear; Gauss panels split at its kinks make the quadrature exact.
    """
    dx = 1.0 / N
    r = 1.5 * dx
    d = offset * dx
    if d > 0.5:
        d -= 1.0
    # second cell is [d, d + dx] relative to the first cell's [0, dx]
    kinks = [d - r, d + r, d + dx - r, d + dx + r]
    breaks = sorted({0.0, dx, *(k for k in kinks if 0.0 < k < dx)})
    x, wx = leggauss(nodes)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        xs = 0.5 * (b - a) * (x + 1.0) + a
        ws = 0.5 * (b - a) * wx
        length = np.maximum(np.minimum(xs + r, d + dx) - np.maximum(xs - r, d), 0.0)
        total += float(np.dot(ws, length))
    return total


@dataclass
class Certificate:
    N: int
    entry_defect: float
    eigenvalue: float
    eigen_residual: float
    J: float
    passed: bool


def verify_negative_direction(N: int, weight_matrix: np.ndarray) -> Certificate:
    """Build the alternating direction and certify J < 0.

    weight_matrix is the symmetric positive definite n x n matrix of
    weighted couplings; the direction takes z_i = v_i * w with v its top
    eigenvector and w the alternating +-1 vector.
    """
    P = np.asarray(weight_matrix, dtype=float)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise CounterexampleError("weight matrix must be square")
    if np.max(np.abs(P - P.T)) > 1e-12 * max(1.0, np.max(np.abs(P))):
        raise CounterexampleError("weight matrix must be symmetric")
    evals, evecs = np.linalg.eigh(P)
    if evals[0] <= 0.0:
        raise CounterexampleError("weight matrix must be positive definite")

    exact = build_exact_matrix(N)
    Mhat = exact.matrix
    dx = 1.0 / N

    # checked offsets cover the full pentadiagonal band plus one zero entry
    entry_defect = 0.0
    for offset in (0, 1, 2, 3):
        expected = Mhat[0, offset % N]
        entry_defect = max(entry_defect, abs(expected - quadrature_entry(N, offset)))

    w = np.where(np.arange(N) % 2 == 1, 1.0, -1.0)
    rayleigh = float(w @ Mhat @ w / (w @ w))
    eigen_residual = float(np.max(np.abs(Mhat @ w - rayleigh * w)))

    v_top = evecs[:, -1]
    n = P.shape[0]
    z = np.stack([v_top[i] * w for i in range(n)])
    J = 0.0
    for i in range(n):
        for j in range(n):
            J += P[i, j] * float(z[i] @ Mhat @ z[j])
    passed = (
        entry_defect <= 1e-12
        and eigen_residual <= 1e-14
        and rayleigh < 0.0
        and J < 0.0
    )
    if J >= 0.0:
        raise CounterexampleError(f"construction falsified: J={J:.3e} >= 0 for N={N}")
    return Certificate(
        N=N,
        entry_defect=entry_defect,
        eigenvalue=rayleigh,
        eigen_residual=eigen_residual,
        J=J,
        passed=passed,
    )


def certificate_lines(cert: Certificate) -> list[str]:
    """Human-readable certificate for the CLI."""
    dx2 = (1.0 / cert.N) ** 2
    return [
        f"N = {cert.N}",
        f"entry check vs quadrature: max defect {cert.entry_defect:.3e}",
        f"alternating vector eigenvalue: {cert.eigenvalue:.17g} "
        f"(= {cert.eigenvalue / dx2:+.6g} * dx^2; "
        "note: the alternating row sum of the stated band gives -dx^2/2)",
        f"eigenvector residual: {cert.eigen_residual:.3e}",
        f"quadratic form value J = {cert.J:.17g}",
        "PASS" if cert.passed else "FAIL",
    ]
