"""Static figures written next to the delimited/JSON outputs.

Figures are drawn on an Agg canvas directly, so importing this module never
changes the global matplotlib backend.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .exceptions import InputError

FIG_DPI = 120


def _save(fig: Figure, path: str) -> str:
    FigureCanvasAgg(fig)
    try:
        fig.savefig(path, dpi=FIG_DPI)
    except OSError as exc:
        raise InputError(f"cannot write figure {path}: {exc.strerror or exc}") from exc
    return path


def plot_range(
    character: np.ndarray,
    theta: np.ndarray,
    value: np.ndarray,
    path: str,
    labels: Sequence[str] | None = None,
    radius: float | None = None,
    title: str | None = None,
) -> str:
    """Point cloud of the numerical range, one colour per character.

    Boundary points (finite ``theta``) are joined in angle order; interior
    samples are drawn as small dots. A dashed circle marks ``radius``.
    """
    character = np.asarray(character)
    theta = np.asarray(theta, dtype=float)
    value = np.asarray(value, dtype=complex)
    fig = Figure(figsize=(5.5, 5.0), layout="constrained")
    ax = fig.add_subplot(1, 1, 1)
    for i in np.unique(character):
        sel = character == i
        name = labels[int(i)] if labels is not None else f"character {int(i)}"
        inner = sel & np.isnan(theta)
        edge = sel & ~np.isnan(theta)
        line = None
        if edge.any():
            order = np.argsort(theta[edge])
            z = value[edge][order]
            z = np.append(z, z[:1])
            (line,) = ax.plot(z.real, z.imag, lw=1.2, label=name)
        color = line.get_color() if line is not None else None
        if inner.any():
            ax.scatter(value[inner].real, value[inner].imag, s=2, alpha=0.35, color=color,
                       label=None if line is not None else name)
    if radius is not None and radius > 0:
        t = np.linspace(0, 2 * np.pi, 400)
        ax.plot(radius * np.cos(t), radius * np.sin(t), "k--", lw=0.8,
                label=f"|z| = {radius:.6g}")
    ax.axhline(0, color="0.8", lw=0.6, zorder=0)
    ax.axvline(0, color="0.8", lw=0.6, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize=8, frameon=False)
    return _save(fig, path)


def plot_fuzz_summary(ratios: Sequence[float], positions: Sequence[float], path: str,
                      title: str | None = None) -> str:
    """Histograms of norm/radius ratios (in [1, 2]) and Kittaneh positions (in [1/4, 1/2])."""
    fig = Figure(figsize=(9.0, 3.6), layout="constrained")
    ax1, ax2 = fig.subplots(1, 2)
    ax1.hist(np.asarray(ratios, dtype=float), bins=40, range=(1.0, 2.0), color="C0")
    for x in (1.0, 2.0):
        ax1.axvline(x, color="k", ls="--", lw=0.8)
    ax1.set_xlabel("norm / numerical radius")
    ax1.set_ylabel("instances")
    ax2.hist(np.asarray(positions, dtype=float), bins=40, range=(0.25, 0.5), color="C1")
    for x in (0.25, 0.5):
        ax2.axvline(x, color="k", ls="--", lw=0.8)
    ax2.set_xlabel("radius$^2$ / norm(T*T + TT*)")
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def plot_symbol(points: np.ndarray, symbol: np.ndarray, path: str, norm: float | None = None,
                title: str | None = None) -> str:
    """Sampled multiplication symbol: its values in the plane and ``|g|`` per point."""
    points = np.asarray(points, dtype=float)
    symbol = np.asarray(symbol, dtype=complex)
    fig = Figure(figsize=(9.0, 4.0), layout="constrained")
    ax1, ax2 = fig.subplots(1, 2)
    sc = ax1.scatter(symbol.real, symbol.imag, c=points, s=10, cmap="viridis")
    fig.colorbar(sc, ax=ax1, label="sample point")
    ax1.set_aspect("equal", adjustable="datalim")
    ax1.set_xlabel("Re g")
    ax1.set_ylabel("Im g")
    ax2.plot(points, np.abs(symbol), ".-", lw=0.8, ms=3)
    if norm is not None:
        ax2.axhline(norm, color="k", ls="--", lw=0.8, label=f"norm = {norm:.6g}")
        ax2.legend(loc="best", fontsize=8, frameon=False)
    ax2.set_xlabel("sample point")
    ax2.set_ylabel("|g|")
    if title:
        fig.suptitle(title)
    return _save(fig, path)
