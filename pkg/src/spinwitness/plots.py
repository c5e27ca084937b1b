"""Figure rendering for sweep and trace output.

Each function takes rows produced by the sweep drivers and writes a PNG next
to the CSV.  Figures are drawn on explicit Agg canvases so rendering works
headless and never touches global pyplot state.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure


def _new_axes(figsize=(6.0, 4.0)):
    fig = Figure(figsize=figsize)
    FigureCanvasAgg(fig)
    return fig, fig.add_subplot(1, 1, 1)


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    return path


def plot_ground_sweep(rows, path) -> Path:
    """Entanglement and witness extremum against field strength."""
    b = [r.b_over_j0 for r in rows]
    fig, ax = _new_axes()
    ax.semilogx(b, [r.global_D for r in rows], "--", color="tab:green",
                label="spin-rest disturbance D")
    ax.semilogx(b, [r.d_max for r in rows], "-", color="tab:blue",
                label="local witness d_max")
    ax.set_xlabel("B / J0")
    ax.set_ylabel("trace distance")
    ax.legend()
    return _save(fig, path)


def plot_thermal_sweep(rows, path) -> Path:
    """Sampled disturbance minimum and witness per temperature."""
    temps = sorted({r.kt_over_j0 for r in rows})
    fig, ax = _new_axes()
    colors = ["tab:red", "tab:blue", "black", "tab:orange", "tab:purple"]
    for k, kt in enumerate(temps):
        sel = [r for r in rows if r.kt_over_j0 == kt]
        b = [r.b_over_j0 for r in sel]
        color = colors[k % len(colors)]
        ax.semilogx(b, [r.sampled_Dmin for r in sel], "--", color=color,
                    label=f"D_min, kT/J0={kt:g}")
        ax.semilogx(b, [r.d_min for r in sel], "-", color=color,
                    label=f"d_min, kT/J0={kt:g}")
    ax.set_xlabel("B / J0")
    ax.set_ylabel("trace distance")
    ax.legend(fontsize=8)
    return _save(fig, path)


def plot_witness_trace(trace, path) -> Path:
    """Magnetization and running trace distance of the dephased evolution."""
    fig = Figure(figsize=(6.0, 5.0))
    FigureCanvasAgg(fig)
    ax_m = fig.add_subplot(2, 1, 1)
    ax_d = fig.add_subplot(2, 1, 2, sharex=ax_m)
    t = trace.grid.times
    ax_m.plot(t, trace.m_y, color="tab:blue")
    ax_m.axhline(trace.m_y[0], color="gray", linestyle=":", linewidth=1)
    ax_m.set_ylabel("m_y(t)")
    ax_d.plot(t, trace.d, color="tab:red")
    ax_d.set_xlabel("t J0")
    ax_d.set_ylabel("d(t)")
    return _save(fig, path)


def plot_spectrum(rows, path) -> Path:
    """Energy levels indexed and colored by parity sector."""
    fig, ax = _new_axes()
    for parity, marker, color in ((1.0, "o", "tab:blue"), (-1.0, "s", "tab:red")):
        sel = [r for r in rows if np.sign(r.parity) == parity]
        ax.plot([r.index for r in sel], [r.energy for r in sel], marker,
                color=color, linestyle="", markersize=4,
                label=f"parity {int(parity):+d}")
    ax.set_xlabel("level index")
    ax.set_ylabel("energy / J0")
    ax.legend()
    return _save(fig, path)
