"""
Precision, recall and IoU of segmentation masks, and the per-image table.
"""

import csv
import io
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from rich import box
from rich.console import Console
from rich.table import Table

from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import MetricReport

MEAN_COLUMN = "∅"


def metrics(mask: np.ndarray, gt: np.ndarray, image_id: str = "0") -> MetricReport:
    """
    P = |mask & gt| / |mask|, R = |mask & gt| / |gt|, IoU = |mask & gt| / |mask | gt|.
    An empty mask reports P = 0 with the empty_prediction flag.

    Raises:
        InvalidArgumentError: On shape mismatch or an empty ground truth
    """
    mask = np.asarray(mask, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if mask.shape != gt.shape:
        raise InvalidArgumentError(f"mask shape {mask.shape} != ground truth shape {gt.shape}")
    gt_area = int(gt.sum())
    if gt_area == 0:
        raise InvalidArgumentError("ground-truth mask is empty")

    area = int(mask.sum())
    inter = int(np.sum(mask & gt))
    union = int(np.sum(mask | gt))
    return MetricReport(
        image_id=image_id,
        precision=inter / area if area else 0.0,
        recall=inter / gt_area,
        iou=inter / union,
        empty_prediction=area == 0,
    )


@dataclass
class MetricTable:
    """Reports sorted by IoU, their unweighted mean and renderings."""

    rows: list[MetricReport]
    mean: tuple[float, float, float]
    accepted_mean: Optional[tuple[float, float, float]]
    text: str
    csv: str


def _mean(reports: Sequence[MetricReport]) -> tuple[float, float, float]:
    values = np.array([r.as_percent() for r in reports], dtype=np.float64)
    p, r, iou = values.mean(axis=0)
    return float(p), float(r), float(iou)


def _render_text(rows: list[MetricReport], mean: tuple[float, float, float]) -> str:
    table = Table(box=box.SIMPLE, show_edge=False)
    table.add_column("Metric")
    for report in rows:
        table.add_column(report.image_id, justify="right")
    table.add_column(MEAN_COLUMN, justify="right")
    for k, name in enumerate(("P", "R", "IoU")):
        cells = [f"{r.as_percent()[k]:.2f}" for r in rows]
        table.add_row(name, *cells, f"{mean[k]:.2f}")

    console = Console(file=io.StringIO(), width=max(80, 12 * (len(rows) + 2)), record=True)
    console.print(table)
    return console.export_text()


def _render_csv(rows: list[MetricReport], mean: tuple[float, float, float]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["image_id", "precision", "recall", "iou", "empty_prediction", "accepted"])
    for r in rows:
        p, rec, iou = r.as_percent()
        writer.writerow(
            [r.image_id, f"{p:.2f}", f"{rec:.2f}", f"{iou:.2f}", r.empty_prediction, r.accepted]
        )
    writer.writerow(["mean", f"{mean[0]:.2f}", f"{mean[1]:.2f}", f"{mean[2]:.2f}", "", ""])
    return buffer.getvalue()


def report_table(reports: Sequence[MetricReport]) -> MetricTable:
    """
    Per-image metrics sorted by IoU (highest first) with the mean column.

    Raises:
        InvalidArgumentError: If there are no reports
    """
    if not reports:
        raise InvalidArgumentError("report table needs at least one report")
    rows = sorted(reports, key=lambda r: -r.iou)
    mean = _mean(rows)
    accepted = [r for r in rows if r.accepted]
    return MetricTable(
        rows=rows,
        mean=mean,
        accepted_mean=_mean(accepted) if accepted else None,
        text=_render_text(rows, mean),
        csv=_render_csv(rows, mean),
    )
