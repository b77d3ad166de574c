"""Figure rendering for the scenario runner.

Every CLI report path that writes delimited output can also render a
matplotlib figure next to it.  All rendering uses the Agg backend so the
package works headless; no window is ever opened.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["trajectory_figure", "sweep_figure", "reconstruction_figure"]

_DPI = 130


def trajectory_figure(record, path: str) -> None:
    """Two-panel trajectory report: scale function g_minus and squeezing factor."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(record.t, record.g_minus, lw=0.9, label="g_minus")
    ax1.plot(record.t, record.omega_I / record.omega, lw=1.2, ls="--",
             label="omega_I / omega")
    ax1.set_ylabel("scale function")
    ax1.legend(loc="best", fontsize=9)
    ax2.plot(record.t, np.maximum(record.S, 0.0), lw=0.9, color="tab:red",
             label="S")
    ax2.set_xlabel("t")
    ax2.set_ylabel("squeezing factor S")
    ax2.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def sweep_figure(axis1_name: str, axis1_values, axis2_name: str | None,
                 axis2_values, log10_s: np.ndarray, path: str) -> None:
    """Terminal-S sweep report: heat map for 2 axes, line plot for 1."""
    fig, ax = plt.subplots(figsize=(7, 5))
    if axis2_name is None:
        ax.plot(axis1_values, log10_s.ravel(), marker="o", lw=1.0)
        ax.set_xlabel(axis1_name)
        ax.set_ylabel("log10 terminal S")
    else:
        grid = log10_s.reshape(len(axis1_values), len(axis2_values))
        mesh = ax.pcolormesh(axis1_values, axis2_values, grid.T, shading="nearest")
        fig.colorbar(mesh, ax=ax, label="log10 terminal S")
        ax.set_xlabel(axis1_name)
        ax.set_ylabel(axis2_name)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def reconstruction_figure(t, omega, temp_ratio, path: str) -> None:
    """Reconstruction report: recovered omega(t) and temperature ratio T/T0."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.plot(t, omega, lw=1.0, color="tab:blue")
    ax1.set_ylabel("omega(t)")
    ax2.plot(t, temp_ratio, lw=1.0, color="tab:orange")
    ax2.set_xlabel("t")
    ax2.set_ylabel("T / T0")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
