"""
Run report schemas for traceability of CLI and pipeline runs.
"""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

from .reports import ContourDiagnosis


class StageName(str, Enum):
    """Stages of the contour pipeline."""

    SYNTH = "synth"
    GEN_LABELS = "gen-labels"
    TRAIN = "train"
    TRACE = "trace"
    COMPLETE = "complete"
    BINARIZE = "binarize"
    EVAL = "eval"


class StageEvent(BaseModel):
    """
    Outcome of a single stage.
    Immutable and append-only.
    """

    model_config = ConfigDict(frozen=True)

    stage: StageName = Field(..., description="Stage that produced the event")
    success: bool = Field(default=True, description="Whether the stage succeeded")
    details: dict[str, Any] = Field(default_factory=dict, description="Stage report content")
    error_message: Optional[str] = Field(None, description="Error message if failed")
    exit_code: int = Field(default=0, description="Exit code associated with the outcome")


class RunReport(BaseModel):
    """
    Ordered stage events of one command invocation.
    Contains no timestamps, so identical runs give identical reports.
    """

    command: str = Field(..., description="CLI command or workflow name")
    seed: int = Field(..., description="Global RNG seed")
    events: list[StageEvent] = Field(default_factory=list, description="Ordered stage events")
    artifacts: dict[str, str] = Field(
        default_factory=dict, description="Artifact file name -> sha256 digest"
    )

    total_events: int = Field(default=0)
    success_count: int = Field(default=0)
    error_count: int = Field(default=0)
    diagnoses: dict[ContourDiagnosis, int] = Field(
        default_factory=dict, description="Binarization outcomes by class"
    )

    def add_event(self, event: StageEvent) -> None:
        """Append an event and update the summary counters."""
        self.events.append(event)
        self.total_events += 1
        if event.success:
            self.success_count += 1
        else:
            self.error_count += 1

    def count_diagnosis(self, diagnosis: ContourDiagnosis) -> None:
        self.diagnoses[diagnosis] = self.diagnoses.get(diagnosis, 0) + 1

    def to_json(self) -> str:
        return self.model_dump_json(indent=2) + "\n"
