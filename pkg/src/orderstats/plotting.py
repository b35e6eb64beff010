"""Figures for statistic reports: ratio of the exact sum to its main term as
the range grows."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# Fixed metadata keeps SVG output byte-identical between runs.
_SAVE_META = {"svg": {"Date": None, "Creator": None}, "pdf": {"CreationDate": None, "Creator": None},
              "png": {"Software": None}}


def ratio_figure(xs, ratios, title: str, xlabel: str = "x", window=(0.9, 1.1)):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(xs, ratios, marker="o", ms=3, lw=1.2, color="C0", label="exact / main term")
    ax.axhline(1.0, color="0.3", lw=0.8)
    if window:
        ax.axhspan(*window, color="C2", alpha=0.12, label=f"window [{window[0]}, {window[1]}]")
    ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("ratio")
    ax.set_title(title, fontsize=10)
    ax.legend(loc="lower right", fontsize=8, frameon=False)
    fig.tight_layout()
    return fig


def save_figure(fig, path) -> None:
    path = str(path)
    ext = path.rsplit(".", 1)[-1].lower()
    kwargs = {"metadata": _SAVE_META[ext]} if ext in _SAVE_META else {}
    if ext == "svg":
        with matplotlib.rc_context({"svg.hashsalt": "orderstats"}):
            fig.savefig(path, **kwargs)
    else:
        fig.savefig(path, dpi=150, **kwargs)
    plt.close(fig)
