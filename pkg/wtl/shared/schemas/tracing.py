"""
Vocabularies shared by predictors, tracers and the completion.
"""

from enum import Enum


class PredictorKind(str, Enum):
    """Implementations of the direction predictor."""

    CNN = "cnn"
    ORACLE = "oracle"
    RIDGE = "ridge"


class TraceOrigin(str, Enum):
    """Traversal pass a path was produced in."""

    CLOCKWISE = "clockwise"
    ANTICLOCKWISE = "anticlockwise"


class ExitReason(str, Enum):
    """Why a single walk ended."""

    COMPLETED = "completed"
    LEFT_IMAGE = "left_image"


class CullReason(str, Enum):
    """Why a tracer was deleted from the pool."""

    LEFT_IMAGE = "left_image"
    LOW_PROBABILITY = "low_probability"
    LOOPING = "looping"
    MAX_STEPS = "max_steps"
