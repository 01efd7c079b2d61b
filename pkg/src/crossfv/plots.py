"""
Figure rendering for the report path.

Every study and single run can drop PNG figures next to its delimited
output: species profiles per snapshot, log-log error ladders with the
regressed slopes, and the entropy decay curves.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .entropy import EntropyReport
from .metrics import ErrorRecord
from .scheme import State


def plot_profiles(state: State, path, title: str | None = None) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for i in range(state.n):
        ax.plot(state.mesh.centers, state.u[i], label=f"species {i + 1}")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.set_title(title or f"t = {state.time:.4g}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_error_ladder(
    records: list[ErrorRecord],
    orders: dict[str, float],
    path,
    xlabel: str = "h",
    title: str | None = None,
) -> None:
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    h = np.array([r.h for r in records])
    for key in records[0].errors:
        e = np.array([r.errors[key] for r in records])
        label = key
        if key in orders and np.isfinite(orders[key]):
            label += f" (order {orders[key]:.3f})"
        ax.loglog(h, e, "o-", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("error")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_entropy(reports: list[EntropyReport], path, title: str | None = None) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(9.6, 4.0))
    t = [r.t for r in reports]
    axes[0].plot(t, [r.H_B for r in reports], label="Boltzmann")
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("H_B")
    axes[1].plot(t, [r.H_R for r in reports], color="C1", label="Rao")
    axes[1].set_xlabel("t")
    axes[1].set_ylabel("H_R")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
