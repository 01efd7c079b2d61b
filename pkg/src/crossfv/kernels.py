"""
Interaction kernels: analytic shapes, exact cell averaging, and the
periodic discrete convolution.

The discrete weights are cell averages B_m = (1/dx) * integral of the
periodized kernel over K_m, computed from closed-form antiderivatives
(error function for the Gaussian), so that sum_m dx B_m equals the total
kernel mass to machine precision.  A Dirac kernel is a distinct mode whose
convolution is the identity.  Convolution is a dense circulant
matrix-vector product; no FFT.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import circulant
from scipy.special import erf

from .grid import Mesh


class KernelError(ValueError):
    """Invalid kernel specification or mismatched mesh."""


@dataclass(frozen=True)
class KernelSpec:
    """Analytic kernel shape in torus units.

    kind is one of "dirac", "indicator", "triangle", "gaussian", "custom".
    radius is the support half-width for indicator/triangle, width the
    Gaussian standard deviation, amplitude a global scale factor.  Custom
    kernels carry a tabulated weight vector directly.
    """

    kind: str
    radius: float = 0.0
    width: float = 0.0
    amplitude: float = 1.0
    table: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("dirac", "indicator", "triangle", "gaussian", "custom"):
            raise KernelError(f"unknown kernel kind {self.kind!r}")
        if self.kind in ("indicator", "triangle"):
            if not 0.0 < self.radius <= 0.5:
                raise KernelError(
                    f"{self.kind} radius must lie in (0, 1/2], got {self.radius}"
                )
        if self.kind == "gaussian" and self.width <= 0.0:
            raise KernelError(f"gaussian width must be positive, got {self.width}")
        if self.amplitude < 0.0:
            raise KernelError(f"kernel amplitude must be nonnegative, got {self.amplitude}")
        if self.kind == "custom":
            if self.table is None:
                raise KernelError("custom kernel requires a weight table")
            if min(self.table) < 0.0:
                raise KernelError("custom kernel weights must be nonnegative")

    @staticmethod
    def dirac() -> "KernelSpec":
        return KernelSpec("dirac")

    @staticmethod
    def indicator(radius: float, amplitude: float = 1.0) -> "KernelSpec":
        return KernelSpec("indicator", radius=radius, amplitude=amplitude)

    @staticmethod
    def triangle(radius: float, amplitude: float = 1.0) -> "KernelSpec":
        return KernelSpec("triangle", radius=radius, amplitude=amplitude)

    @staticmethod
    def gaussian(width: float, amplitude: float = 1.0) -> "KernelSpec":
        return KernelSpec("gaussian", width=width, amplitude=amplitude)

    @staticmethod
    def custom(weights) -> "KernelSpec":
        return KernelSpec("custom", table=tuple(float(w) for w in weights))

    def antiderivative(self, z: np.ndarray) -> np.ndarray:
        """Antiderivative of the (non-periodized) kernel, vanishing at 0."""
        z = np.asarray(z, dtype=float)
        a = self.amplitude
        if self.kind == "indicator":
            return a * np.clip(z, -self.radius, self.radius)
        if self.kind == "triangle":
            r = self.radius
            zc = np.clip(z, -r, r)
            return a * np.sign(zc) * (np.abs(zc) - zc * zc / (2.0 * r))
        if self.kind == "gaussian":
            return a * 0.5 * erf(z / (self.width * np.sqrt(2.0)))
        raise KernelError(f"no antiderivative for kernel kind {self.kind!r}")

    def total_mass(self) -> float:
        if self.kind == "indicator":
            return self.amplitude * 2.0 * self.radius
        if self.kind == "triangle":
            return self.amplitude * self.radius
        if self.kind == "gaussian":
            return self.amplitude
        raise KernelError(f"no analytic mass for kernel kind {self.kind!r}")


@dataclass(frozen=True)
class DiscreteKernel:
    """Cell-averaged kernel weights B_m indexed by periodic offset m."""

    mode: str  # "dirac" | "tabulated"
    N: int
    weights: np.ndarray | None = None  # length N, offset-indexed

    def __post_init__(self):
        if self.mode == "tabulated":
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (self.N,):
                raise KernelError("weight vector length must equal cell count")
            if np.min(w) < 0.0:
                raise KernelError("negative tabulated kernel weight")
            object.__setattr__(self, "weights", w)

    def matrix(self, mesh: Mesh) -> np.ndarray:
        """Dense convolution matrix C with C[l, l'] = dx * B_{l-l'}."""
        if mesh.N != self.N:
            raise KernelError("kernel tabulated on a different mesh")
        if self.mode == "dirac":
            return np.eye(self.N)
        return mesh.dx * circulant(self.weights)

    def discrete_mass(self, mesh: Mesh) -> float:
        if self.mode == "dirac":
            return 1.0
        return float(mesh.dx * np.sum(self.weights))


def cell_average(spec: KernelSpec, mesh: Mesh) -> DiscreteKernel:
    """Tabulate a kernel on a mesh by exact cell averaging.

    B_m = (1/dx) * integral over K_m = ((m-1/2)dx, (m+1/2)dx) of the
    periodized kernel, evaluated through the closed-form antiderivative
    summed over periodic images until the tail is exhausted.
    """
    if spec.kind == "dirac":
        return DiscreteKernel(mode="dirac", N=mesh.N)
    if spec.kind == "custom":
        w = np.asarray(spec.table, dtype=float)
        if w.shape != (mesh.N,):
            raise KernelError(
                f"custom table of length {w.size} does not match mesh N={mesh.N}"
            )
        return DiscreteKernel(mode="tabulated", N=mesh.N, weights=w)

    if spec.kind == "gaussian":
        # images until the Gaussian tail is below 1e-14 of the mass
        n_img = max(2, int(np.ceil(9.0 * spec.width + 1.0)))
    else:
        n_img = 2
    m = np.arange(mesh.N)
    lo = (m - 0.5) * mesh.dx
    hi = (m + 0.5) * mesh.dx
    w = np.zeros(mesh.N)
    for k in range(-n_img, n_img + 1):
        w += spec.antiderivative(hi - k) - spec.antiderivative(lo - k)
    w = np.maximum(w / mesh.dx, 0.0)  # clip quadrature-level negative dust
    return DiscreteKernel(mode="tabulated", N=mesh.N, weights=w)


def convolve(kernel: DiscreteKernel, v: np.ndarray, mesh: Mesh) -> np.ndarray:
    """Periodic discrete convolution out_l = sum_{l'} dx B_{l-l'} v_{l'}."""
    v = mesh.check_field(v)
    if kernel.N != mesh.N:
        raise KernelError("kernel tabulated on a different mesh")
    if kernel.mode == "dirac":
        return v.copy()
    # naive circulant sum, O(N^2); N stays <= 2048 in all experiments
    out = np.empty(mesh.N)
    B = kernel.weights
    for ell in range(mesh.N):
        out[ell] = mesh.dx * np.dot(B[(ell - np.arange(mesh.N)) % mesh.N], v)
    return out


def transpose_kernel(kernel: DiscreteKernel) -> DiscreteKernel:
    """Weights of the reversed kernel, B'_m = B_{-m mod N}."""
    if kernel.mode == "dirac":
        return kernel
    w = kernel.weights
    return DiscreteKernel(
        mode="tabulated", N=kernel.N, weights=w[(-np.arange(kernel.N)) % kernel.N]
    )


def dump_kernel_csv(kernel: DiscreteKernel, mesh: Mesh, path) -> None:
    """Write offset_index, offset_x, weight rows for a tabulated kernel."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["offset_index", "offset_x", "weight"])
        for m in range(mesh.N):
            x = m * mesh.dx
            if x > 0.5:
                x -= 1.0
            wt = 0.0 if kernel.mode == "dirac" else kernel.weights[m]
            writer.writerow([m, f"{x:.17g}", f"{wt:.17g}"])
