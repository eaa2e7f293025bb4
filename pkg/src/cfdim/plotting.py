"""Figure rendering for the report-emitting CLI paths.

Each function writes one PNG next to the delimited artifact it illustrates.
Rendering is headless (Agg); figures share a plain numeric style.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

__all__ = ["plot_gap_ratios", "plot_nested_ratios", "plot_sb_curve"]

_DPI = 150


def plot_gap_ratios(orders: Sequence[int], ratios: Sequence[float],
                    thresholds: dict[int, float], path: Path) -> None:
    """Scatter of min-gap / interval-length per word, with the per-order
    guaranteed floors drawn as horizontal segments."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.scatter(range(len(ratios)), ratios, s=8, c=orders, cmap="viridis",
               label="gap / length")
    for order, floor in sorted(thresholds.items()):
        ax.axhline(floor, ls="--", lw=0.8, color="grey")
        ax.annotate(f"floor at order {order}", (0, floor),
                    textcoords="offset points", xytext=(2, 3), fontsize=7)
    ax.set_xlabel("word (enumeration index)")
    ax.set_ylabel("min gap / |J|")
    ax.set_yscale("log")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_nested_ratios(ks: Sequence[int], ratios: Sequence[float],
                       target: float, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ks, ratios, "o-", ms=4, label="R_k")
    ax.axhline(target, color="crimson", ls="--", lw=1,
               label=f"limit 1/(1+b^2) = {target:.4g}")
    ax.set_xlabel("k")
    ax.set_ylabel("nested-interval ratio")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def plot_sb_curve(Bs: Sequence[float], values: Sequence[float],
                  path: Path) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(Bs, values, "o-", ms=4)
    ax.set_xscale("log")
    ax.set_xlabel("base B")
    ax.set_ylabel("crossing exponent")
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
