"""Matplotlib figure builders for the report outputs.

Figures are constructed directly on an Agg canvas, so no interactive
backend is touched and rendering works headless.  Each builder returns
the Figure; ``save_figure`` writes it next to the data files.
"""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

__all__ = ["spectrum_figure", "dressing_figure", "diagram_figure", "save_figure"]

FIELD_COLORS = {"probe": "tab:red", "coupling": "tab:blue", "rf": "tab:orange"}


def _figure(width: float, height: float) -> Figure:
    fig = Figure(figsize=(width, height))
    FigureCanvasAgg(fig)
    return fig


def save_figure(fig: Figure, path) -> None:
    fig.savefig(path, dpi=150, bbox_inches="tight")


def spectrum_figure(series, unique_eigenvalues=None) -> Figure:
    """Transmission vs coupling detuning, with dressed-eigenvalue guides.

    Parameters
    ----------
    series : SpectrumSeries
        Output of ``scan_spectrum``.
    unique_eigenvalues : array-like, optional
        Dressed eigenvalues drawn as dashed vertical guides.

    Returns
    -------
    Figure
    """
    fig = _figure(7.0, 4.2)
    ax = fig.add_subplot(111)
    if unique_eigenvalues is not None:
        for lam in np.asarray(unique_eigenvalues, dtype=float):
            ax.axvline(lam, color="0.6", linestyle="--", linewidth=0.8, zorder=1)
    ax.plot(series.detunings_mhz, series.transmission, color="tab:red", zorder=2)
    for peak in series.peaks:
        ax.plot(peak.position_mhz, peak.height, "v", color="k", markersize=5, zorder=3)
    ax.set_xlabel("coupling detuning (MHz)")
    ax.set_ylabel("probe transmission")
    ax.set_xlim(series.detunings_mhz[0], series.detunings_mhz[-1])
    return fig


def dressing_figure(result) -> Figure:
    """Dressed eigenvalues by index with the unique values projected right.

    Parameters
    ----------
    result : DressedResult

    Returns
    -------
    Figure
    """
    fig = _figure(6.4, 4.2)
    ax = fig.add_subplot(111)
    vals = np.sort(result.eigenvalues)
    ax.plot(np.arange(vals.size), vals, ".", color="tab:blue", markersize=4)
    for lam in result.unique:
        ax.axhline(lam, color="0.8", linewidth=0.6, zorder=0)
        ax.annotate(f"{lam:+.2f}", xy=(vals.size - 1, lam), xytext=(4, 0),
                    textcoords="offset points", fontsize=7, va="center")
    ax.set_xlabel("eigenstate index")
    ax.set_ylabel("eigenvalue (MHz)")
    ax.set_title(f"{result.unique.size} unique eigenvalues "
                 f"(tolerance {result.cluster_tolerance:g} MHz)")
    return fig


def diagram_figure(graph: dict) -> Figure:
    """Render an exported level diagram: sublevel bars plus arrows.

    Nodes sit at (m_F, vertical_offset); optically unreachable ones are
    faded.  Edge alpha scales with normalized strength and color keys
    the field.

    Parameters
    ----------
    graph : dict
        Output of ``export_diagram``.

    Returns
    -------
    Figure
    """
    fig = _figure(9.0, 6.0)
    ax = fig.add_subplot(111)
    place = {}
    for node in graph["nodes"]:
        m = float(eval_half(node["m_f"]))
        y = node["vertical_offset"]
        place[node["id"]] = (m, y)
        color = "k" if node["optically_reachable"] else "0.8"
        ax.plot([m - 0.3, m + 0.3], [y, y], color=color, linewidth=1.6)
    for edge in graph["edges"]:
        x0, y0 = place[edge["from"]]
        x1, y1 = place[edge["to"]]
        color = FIELD_COLORS.get(edge["field"], "tab:green")
        alpha = 0.15 + 0.85 * edge["strength"]
        ax.annotate("", xy=(x1, y1), xytext=(x0, y0),
                    arrowprops=dict(arrowstyle="->", color=color, alpha=alpha,
                                    linewidth=0.7))
    ax.set_xlabel(r"$m_F$")
    ax.set_yticks([])
    for name, color in FIELD_COLORS.items():
        ax.plot([], [], color=color, label=name)
    ax.legend(loc="upper left", fontsize=8)
    return fig


def eval_half(text: str) -> float:
    """Parse '7/2' or '-3' style half-integer labels to float."""
    if "/" in text:
        num, den = text.split("/")
        return int(num) / int(den)
    return float(text)
