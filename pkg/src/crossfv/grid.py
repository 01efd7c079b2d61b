"""
Uniform periodic mesh of the unit torus and discrete norms.

Cells are K_l = ((l-1/2)*dx, (l+1/2)*dx) with centers x_l = l*dx for
l = 0..N-1 and dx = 1/N; all index arithmetic is modulo N.  Fields are
plain numpy vectors of length N holding piecewise-constant cell values.
All norms carry the dx weight; no unweighted variants are exposed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    """Invalid mesh or field input."""


@dataclass(frozen=True)
class Mesh:
    """Uniform periodic mesh of the unit torus with N cells."""

    N: int
    dx: float = field(init=False)
    centers: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.N < 3:
            raise GridError(f"mesh needs at least 3 cells, got N={self.N}")
        object.__setattr__(self, "dx", 1.0 / self.N)
        object.__setattr__(self, "centers", np.arange(self.N) * (1.0 / self.N))

    def check_field(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        if v.shape != (self.N,):
            raise GridError(f"field of length {v.shape} does not match mesh N={self.N}")
        return v


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid on (0, T] with Nt implicit Euler steps."""

    T: float
    Nt: int
    dt: float = field(init=False)

    def __post_init__(self):
        if self.T <= 0.0:
            raise GridError(f"end time must be positive, got T={self.T}")
        if self.Nt < 0:
            raise GridError(f"step count must be nonnegative, got Nt={self.Nt}")
        object.__setattr__(self, "dt", self.T / self.Nt if self.Nt > 0 else self.T)

    def times(self) -> np.ndarray:
        return np.arange(self.Nt + 1) * self.dt


def diff(v: np.ndarray, mesh: Mesh) -> np.ndarray:
    """Forward difference quotient (v_{l+1} - v_l)/dx on the torus."""
    v = mesh.check_field(v)
    return (np.roll(v, -1) - v) / mesh.dx


def norm_lq(v: np.ndarray, q: float, mesh: Mesh) -> float:
    """Discrete L^q norm (sum_l dx |v_l|^q)^(1/q); max |v_l| for q = inf."""
    v = mesh.check_field(v)
    if q == np.inf:
        return float(np.max(np.abs(v))) if v.size else 0.0
    if q < 1.0:
        raise GridError(f"norm exponent must be >= 1, got q={q}")
    return float((mesh.dx * np.sum(np.abs(v) ** q)) ** (1.0 / q))


def seminorm_w1q(v: np.ndarray, q: float, mesh: Mesh) -> float:
    """Discrete W^{1,q} seminorm |v|_{1,q}: L^q norm of the difference quotient."""
    return norm_lq(diff(v, mesh), q, mesh)


def norm_w1q(v: np.ndarray, q: float, mesh: Mesh) -> float:
    """Discrete W^{1,q} norm, (|v|_{1,q}^q + ||v||_{0,q}^q)^(1/q)."""
    if q == np.inf:
        return max(norm_lq(v, q, mesh), seminorm_w1q(v, q, mesh))
    return float((norm_lq(v, q, mesh) ** q + seminorm_w1q(v, q, mesh) ** q) ** (1.0 / q))


def bv_norm(v: np.ndarray, mesh: Mesh) -> float:
    """BV norm on the torus: ||v||_{0,1} + |v|_{1,1}."""
    return norm_lq(v, 1.0, mesh) + seminorm_w1q(v, 1.0, mesh)


def mass(v: np.ndarray, mesh: Mesh) -> float:
    """Total mass sum_l dx v_l."""
    v = mesh.check_field(v)
    return float(mesh.dx * np.sum(v))
