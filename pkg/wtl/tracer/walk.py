"""
Single-tracer contour following.
"""

from typing import Optional

import numpy as np

from wtl.predictor.base import DirectionPredictor
from wtl.raster.geometry import (
    STEP_SIZES,
    angle_to_offset,
    offset_to_angle,
    rasterize_segment,
    wrap_angle,
)
from wtl.raster.stack import InputStack, extract_oriented_patch
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import ExitReason, TraceOrigin
from wtl.shared.utils import get_logger

from .policy import FixedStep, StepPolicy
from .state import PathTrace, TracerState

logger = get_logger(__name__)


def step(state: TracerState, alpha_cnn: float, step_size: int) -> TracerState:
    """
    Turn by `alpha_cnn` relative to the heading and move one pixelstep.

    The new heading is the direction of the ring offset actually taken.
    The returned cp may lie outside the image.
    """
    if step_size not in STEP_SIZES:
        raise InvalidArgumentError(f"pixelstep must be one of {STEP_SIZES}, got {step_size}")
    candidate = wrap_angle(state.heading + alpha_cnn)
    drow, dcol = angle_to_offset(candidate, step_size)
    return TracerState(state.cp.offset(drow, dcol), offset_to_angle(drow, dcol))


def walk(
    stack: InputStack,
    start: TracerState,
    steps: int,
    predictor: DirectionPredictor,
    policy: Optional[StepPolicy] = None,
    origin: TraceOrigin = TraceOrigin.CLOCKWISE,
) -> PathTrace:
    """
    Follow the contour for up to `steps` iterations.

    Intermediate pixels of 2- and 3-pixel steps are stored, so consecutive
    path pixels are 8-adjacent. A step leaving the image ends the walk and is
    not stored.

    Raises:
        InvalidArgumentError: If the start pixel is outside the image
    """
    if not start.cp.in_bounds(stack.height, stack.width):
        raise InvalidArgumentError(f"start pixel {tuple(start.cp)} outside the image")
    if steps < 0:
        raise InvalidArgumentError(f"step count must be >= 0, got {steps}")

    policy = policy or FixedStep(1)
    path = PathTrace([start.cp], origin=origin)
    state = start
    for _ in range(steps):
        patches = (
            extract_oriented_patch(stack, state.cp, state.heading)[None]
            if predictor.needs_patches
            else None
        )
        alpha = float(np.asarray(predictor.predict(patches, [state]))[0])
        new = step(state, alpha, policy.next_size())
        if not new.cp.in_bounds(stack.height, stack.width):
            path.exit_reason = ExitReason.LEFT_IMAGE
            break
        path.extend(rasterize_segment(state.cp, new.cp)[1:])
        state = new

    logger.debug(
        "walk_complete",
        pixels=len(path),
        exit_reason=path.exit_reason.value,
        kind=predictor.kind.value,
    )
    return path
