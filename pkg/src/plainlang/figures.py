"""Matplotlib rendering of evaluation reports to image files."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import MetricReport

_METRICS = (
    ("bleu", "BLEU", lambda r: r.bleu),
    ("sari", "SARI", lambda r: r.sari),
    ("fk_ease", "FK Ease", lambda r: r.fk_ease),
    ("fk_grade", "FK Grade", lambda r: r.fk_grade),
)


def _short_group(report: MetricReport) -> str:
    return report.audience.display_name.split("/")[0]


def render_report_figures(reports: Sequence[MetricReport], outdir: str | Path) -> list[Path]:
    """One bar chart per metric, grouped by model when several are present.

    Returns the list of files written (four PNGs plus a combined overview).
    """
    if not reports:
        raise ValueError("nothing to plot")
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    models = list(dict.fromkeys(r.model_name for r in reports))
    groups = list(dict.fromkeys(_short_group(r) for r in reports))
    by_key = {(r.model_name, _short_group(r)): r for r in reports}

    written: list[Path] = []
    for name, title, value in _METRICS:
        fig, ax = plt.subplots(figsize=(7, 3.5))
        _draw_metric(ax, title, value, models, groups, by_key)
        fig.tight_layout()
        path = out / f"{name}.png"
        fig.savefig(path, dpi=150)
        plt.close(fig)
        written.append(path)

    fig, axes = plt.subplots(2, 2, figsize=(12, 7))
    for ax, (name, title, value) in zip(axes.flat, _METRICS):
        _draw_metric(ax, title, value, models, groups, by_key)
    fig.tight_layout()
    overview = out / "metrics_overview.png"
    fig.savefig(overview, dpi=150)
    plt.close(fig)
    written.append(overview)
    return written


def _draw_metric(ax, title, value, models, groups, by_key) -> None:
    width = 0.8 / max(1, len(models))
    for m_index, model in enumerate(models):
        xs = []
        ys = []
        for g_index, group in enumerate(groups):
            report = by_key.get((model, group))
            if report is None:
                continue
            xs.append(g_index + m_index * width)
            ys.append(value(report))
        ax.bar(xs, ys, width=width, label=model)
    ax.set_title(title)
    ax.set_xticks(
        [i + width * (len(models) - 1) / 2 for i in range(len(groups))]
    )
    ax.set_xticklabels(groups, rotation=20, ha="right", fontsize=8)
    ax.grid(axis="y", alpha=0.3)
    if len(models) > 1:
        ax.legend(fontsize=8)
