"""Report figures (PNG) rendered with matplotlib's non-interactive backend."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .catalog import Report  # noqa: E402

STATUS_COLORS = {
    "NoFibration": "#9e9e9e",
    "Unique": "#2e7d32",
    "Multiple": "#c62828",
    "Inconclusive": "#f9a825",
}

# fixed metadata keeps repeated renders byte-identical
_PNG_META = {"Software": None}


def status_by_rank(report: Report, path: str | Path) -> Path:
    """Stacked bar chart of verdict counts per Picard rank."""
    s = report.summary()["by_rank"]
    ranks = [int(r) for r in s]
    fig, ax = plt.subplots(figsize=(6, 3.5), dpi=100)
    bottom = [0] * len(ranks)
    for status, color in STATUS_COLORS.items():
        vals = [s[str(r)].get(status, 0) for r in ranks]
        if any(vals):
            ax.bar([str(r) for r in ranks], vals, bottom=bottom, color=color, label=status)
            bottom = [b + v for b, v in zip(bottom, vals)]
    ax.set_xlabel("Picard rank")
    ax.set_ylabel("entries")
    ax.set_title("Verdicts by rank")
    if ranks:
        ax.legend(frameon=False, fontsize=8)
    ax.yaxis.get_major_locator().set_params(integer=True)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="png", metadata=_PNG_META)
    plt.close(fig)
    return path


def criterion_usage(report: Report, path: str | Path) -> Path:
    """Horizontal bar chart: how many verdicts each criterion decided."""
    counts: dict[str, int] = {}
    for r in report.rows:
        counts[r.criterion] = counts.get(r.criterion, 0) + 1
    names = sorted(counts)
    fig, ax = plt.subplots(figsize=(6, 0.4 * max(len(names), 1) + 1.2), dpi=100)
    ax.barh(names, [counts[n] for n in names], color="#455a64")
    ax.set_xlabel("verdicts decided")
    ax.set_title("Deciding criterion")
    ax.xaxis.get_major_locator().set_params(integer=True)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, format="png", metadata=_PNG_META)
    plt.close(fig)
    return path
