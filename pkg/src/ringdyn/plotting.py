"""Figure rendering for the report path.

Kept separate from the CSV-producing commands: the data series stay
machine-readable CSV, these helpers draw the same series to PNG files.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .equilibrium import RATIO_SENTINEL

FIGSIZE = (5.4, 3.4)


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    return fig, ax


def save_force_ratio(rows, path, n_particles):
    x = np.array([r[0] for r in rows])
    ratio = np.array([r[1] for r in rows])
    keep = ratio < RATIO_SENTINEL
    fig, ax = _new_axes("x / R", "|radial| / |tangential|",
                        f"Force anisotropy near the ring (N = {n_particles})")
    ax.semilogy(x[keep], ratio[keep], "-", lw=1.2)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_oscillations(t, undamped, damped, path, resistance):
    fig, ax = _new_axes("t / T", "x / x0", "Radial oscillations")
    ax.plot(t, undamped, lw=1.0, label="k = 0")
    ax.plot(t, damped, lw=1.0, label=f"k = {resistance:g}")
    ax.legend(loc="upper right", fontsize=8)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_omega_ratio(rows, path):
    n = np.array([r[0] for r in rows], dtype=float)
    ratio = np.array([r[2] for r in rows])
    fig, ax = _new_axes("N", "Omega / Omega0",
                        "Rotation rate against particle count")
    ax.semilogx(n, ratio, "o-", lw=1.0, ms=3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
