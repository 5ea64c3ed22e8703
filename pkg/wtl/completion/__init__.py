"""
Contour completion with a swarm of tracers.
"""

from wtl.tracer.policy import sample_step, sample_steps

from .culling import is_bad_location, is_looping
from .pool import Tracer, TracerPool, advance_pool
from .runner import (
    AccumulationMap,
    CompletionResult,
    PassResult,
    accumulate,
    run_anticlockwise_pass,
    run_completion,
    run_pass,
)
from .seeding import checkerboard, fragment_skeleton, seed_tracers

__all__ = [
    "AccumulationMap",
    "CompletionResult",
    "PassResult",
    "Tracer",
    "TracerPool",
    "accumulate",
    "advance_pool",
    "checkerboard",
    "fragment_skeleton",
    "is_bad_location",
    "is_looping",
    "run_anticlockwise_pass",
    "run_completion",
    "run_pass",
    "sample_step",
    "sample_steps",
    "seed_tracers",
]
