"""
Single contour tracer: state, stepping and walking.
"""

from .policy import FixedStep, RandomStep, SequenceStep, StepPolicy, sample_step, sample_steps
from .state import PathTrace, TracerState, path_to_csv
from .walk import step, walk

__all__ = [
    "FixedStep",
    "PathTrace",
    "RandomStep",
    "SequenceStep",
    "StepPolicy",
    "TracerState",
    "path_to_csv",
    "sample_step",
    "sample_steps",
    "step",
    "walk",
]
