"""Figure rendering for evaluation reports; files land next to the CSV."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def plot_f1_histogram(report, path: str | Path) -> Path:
    """Bar chart of the 10-bin F1 distribution for one evaluated model."""
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    lows = [b.low for b in report.histogram]
    counts = [b.count for b in report.histogram]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar(lows, counts, width=0.1, align="edge", edgecolor="black", linewidth=0.5)
    ax.set_xlim(0.0, 1.0)
    ax.set_xticks([i / 10 for i in range(11)])
    ax.set_xlabel("F1 score")
    ax.set_ylabel("test code blocks")
    ax.set_title(f"F1 distribution: {report.model_label}")
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
