"""
Data schemas and contracts for the contour pipeline.
"""

from .configs import BinarizeConfig, CompletionConfig, LabelConfig, SceneParams, TrainConfig
from .reports import (
    BinarizeReport,
    CompletionReport,
    ContourDiagnosis,
    EpochLoss,
    LabelgenReport,
    LineReport,
    LossCurve,
    MetricReport,
    PassReport,
)
from .run import RunReport, StageEvent, StageName
from .tracing import CullReason, ExitReason, PredictorKind, TraceOrigin

__all__ = [
    # Configs
    "BinarizeConfig",
    "CompletionConfig",
    "LabelConfig",
    "SceneParams",
    "TrainConfig",
    # Reports
    "BinarizeReport",
    "CompletionReport",
    "ContourDiagnosis",
    "EpochLoss",
    "LabelgenReport",
    "LineReport",
    "LossCurve",
    "MetricReport",
    "PassReport",
    # Run
    "RunReport",
    "StageEvent",
    "StageName",
    # Vocabularies
    "CullReason",
    "ExitReason",
    "PredictorKind",
    "TraceOrigin",
]
