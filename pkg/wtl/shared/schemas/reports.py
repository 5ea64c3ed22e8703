"""
Machine-readable stage reports.
Reports hold deterministic content only; wall-clock timings are kept apart.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from .tracing import CullReason, TraceOrigin


class PassReport(BaseModel):
    """Statistics of one traversal pass of the completion."""

    model_config = ConfigDict(frozen=True)

    origin: TraceOrigin
    n0: int = Field(..., ge=0, description="Tracers seeded for this pass")
    iterations: int = Field(..., ge=0, description="Synchronized pool iterations")
    culls: dict[CullReason, int] = Field(default_factory=dict, description="Deletions by reason")
    path_pixels: int = Field(..., ge=0, description="Stored path pixels (with multiplicity)")


class CompletionReport(BaseModel):
    """Report of a full completion run (both passes)."""

    model_config = ConfigDict(frozen=True)

    height: int
    width: int
    passes: list[PassReport]
    max_count: int = Field(..., ge=0, description="Largest accumulation count")

    @property
    def n0(self) -> int:
        return sum(p.n0 for p in self.passes)


class LineReport(BaseModel):
    """Detected longest line."""

    model_config = ConfigDict(frozen=True)

    rho: float
    theta: float
    start: tuple[int, int]
    end: tuple[int, int]
    length: float


class ContourDiagnosis(str, Enum):
    """Outcome class of a binarization attempt."""

    CLOSED = "closed"
    OPEN_LINES = "open_lines"
    DOUBLED_LINES = "doubled_lines"
    NOT_CLOSED = "not_closed"


class BinarizeReport(BaseModel):
    """Report of the contour binarization."""

    model_config = ConfigDict(frozen=True)

    line: LineReport
    cut_col: int
    pixel1: tuple[int, int]
    pixel2: tuple[int, int]
    closing_threshold: float = Field(..., description="Highest threshold closing the cut")
    threshold: float = Field(..., description="Threshold the closed contour was built from")
    iterations: int = Field(..., ge=0, description="Threshold decrements of the closing search")
    retries: int = Field(default=0, ge=0, description="Lower thresholds tried after cleaning")
    contour_pixels: int = Field(..., ge=0)


class EpochLoss(BaseModel):
    """One row of the training loss curve."""

    model_config = ConfigDict(frozen=True)

    epoch: int = Field(..., ge=1)
    train_loss: float
    val_loss: float


class LossCurve(BaseModel):
    """Per-epoch training and validation loss."""

    epochs: list[EpochLoss] = Field(default_factory=list)

    @property
    def best_epoch(self) -> Optional[int]:
        if not self.epochs:
            return None
        return min(self.epochs, key=lambda e: (e.val_loss, e.epoch)).epoch

    def to_csv(self) -> str:
        """Render as CSV with header epoch,train_loss,val_loss."""
        lines = ["epoch,train_loss,val_loss"]
        lines.extend(f"{e.epoch},{e.train_loss:.8g},{e.val_loss:.8g}" for e in self.epochs)
        return "\n".join(lines) + "\n"


class LabelgenReport(BaseModel):
    """Outcome of a dataset generation run."""

    model_config = ConfigDict(frozen=True)

    scenes: int
    records: int
    train_records: int
    validation_records: int
    failures: dict[str, str] = Field(
        default_factory=dict, description="Scene id -> reason for rejected ground truths"
    )


class MetricReport(BaseModel):
    """Precision, recall and IoU of one predicted mask against its ground truth."""

    model_config = ConfigDict(frozen=True)

    image_id: str
    precision: float = Field(..., ge=0.0, le=1.0)
    recall: float = Field(..., ge=0.0, le=1.0)
    iou: float = Field(..., ge=0.0, le=1.0)
    empty_prediction: bool = Field(default=False, description="Mask was empty; P reported as 0")
    accepted: bool = Field(default=False, description="Member of the 'works as desired' subset")

    def as_percent(self) -> tuple[float, float, float]:
        return (self.precision * 100.0, self.recall * 100.0, self.iou * 100.0)
