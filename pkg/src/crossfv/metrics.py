"""
Error norms between discrete solutions and convergence-order regression.

Cross-mesh comparison restricts the fine field to the coarse mesh by
exact averaging (never prolongs).  The 1-D Wasserstein-1 distance is the
circle version: cumulative differences shifted by their optimal constant,
which on a uniform mesh is the median.  Orders come from one least-squares
fit of log(error) against log(h) over all refinement levels.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .grid import Mesh, norm_lq


class MetricError(ValueError):
    """Incompatible fields handed to a metric."""


@dataclass
class ErrorRecord:
    h: float
    errors: dict[str, float]  # keys among "L1", "Linf", "W1"


def restrict(fine: np.ndarray, fine_mesh: Mesh, coarse_mesh: Mesh) -> np.ndarray:
    """Exact restriction of a fine field to a nested coarser mesh."""
    fine = fine_mesh.check_field(fine)
    if fine_mesh.N % coarse_mesh.N != 0:
        raise MetricError(f"meshes N={fine_mesh.N} and N={coarse_mesh.N} are not nested")
    ratio = fine_mesh.N // coarse_mesh.N
    return fine.reshape(coarse_mesh.N, ratio).mean(axis=1)


def lp_error(a: np.ndarray, b: np.ndarray, p: float, mesh: Mesh) -> float:
    """Discrete L^p norm of a - b on a shared mesh (p in {1, 2, inf})."""
    return norm_lq(mesh.check_field(a) - mesh.check_field(b), p, mesh)


def wasserstein1(a: np.ndarray, b: np.ndarray, mesh: Mesh, mass_tol: float = 1e-8) -> float:
    """Wasserstein-1 distance between nonnegative equal-mass fields on the circle.

    W1 = sum_l dx |G_l - c*| with G the cumulative difference and c* its
    median (the optimal constant shift on the circle).
    """
    a = mesh.check_field(a)
    b = mesh.check_field(b)
    if np.min(a) < 0.0 or np.min(b) < 0.0:
        raise MetricError("wasserstein1 requires nonnegative fields")
    if abs(mesh.dx * (np.sum(a) - np.sum(b))) > mass_tol:
        raise MetricError(
            f"mass mismatch {mesh.dx * (np.sum(a) - np.sum(b)):.3e} exceeds {mass_tol:.0e}"
        )
    G = np.cumsum(mesh.dx * (a - b))
    c = np.median(G)
    return float(mesh.dx * np.sum(np.abs(G - c)))


def eoc(records: list[ErrorRecord]) -> dict[str, float]:
    """Least-squares slope of log(error) vs log(h) per norm."""
    if len(records) < 2:
        raise MetricError("order regression needs at least two refinement levels")
    keys = records[0].errors.keys()
    orders: dict[str, float] = {}
    for key in keys:
        h = np.array([r.h for r in records])
        e = np.array([r.errors[key] for r in records])
        if np.any(e <= 0.0) or np.any(h <= 0.0):
            orders[key] = float("nan")
            continue
        slope = np.polyfit(np.log(h), np.log(e), 1)[0]
        orders[key] = float(slope)
    return orders


def write_study_csv(records: list[ErrorRecord], orders: dict[str, float], path_prefix) -> tuple[str, str]:
    """Write h,N,L1,Linf,W1 rows plus a companion norm,order file."""
    study_path = f"{path_prefix}_study.csv"
    orders_path = f"{path_prefix}_orders.csv"
    keys = ["L1", "Linf", "W1"]
    with open(study_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["h", "N"] + keys)
        for rec in records:
            row = [f"{rec.h:.17g}", str(round(1.0 / rec.h))]
            row += [f"{rec.errors[k]:.17g}" if k in rec.errors else "" for k in keys]
            writer.writerow(row)
    with open(orders_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["norm", "order"])
        for key, val in orders.items():
            writer.writerow([key, f"{val:.17g}"])
    return study_path, orders_path
