"""
Synchronized tracer pool.
"""

from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from wtl.predictor.base import DirectionPredictor
from wtl.raster.geometry import PixelCoord, rasterize_segment
from wtl.raster.stack import InputStack, extract_oriented_patch
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import CompletionConfig, CullReason, ExitReason, TraceOrigin
from wtl.tracer.policy import sample_steps
from wtl.tracer.state import PathTrace, TracerState
from wtl.tracer.walk import step

from .culling import is_bad_location, is_looping


@dataclass
class Tracer:
    """One pool member; deleted tracers keep their paths."""

    state: TracerState
    path: PathTrace
    visited: dict[PixelCoord, int] = field(default_factory=dict)
    steps: int = 0
    cull_reason: Optional[CullReason] = None

    @property
    def alive(self) -> bool:
        return self.cull_reason is None

    def store(self, pixel: PixelCoord) -> None:
        self.visited[pixel] = len(self.path.pixels)
        self.path.pixels.append(pixel)


@dataclass
class TracerPool:
    """All tracers of one pass, in seed order."""

    tracers: list[Tracer]
    iterations: int = 0

    @classmethod
    def from_seeds(
        cls, seeds: list[tuple[PixelCoord, float]], origin: TraceOrigin = TraceOrigin.CLOCKWISE
    ) -> "TracerPool":
        tracers = []
        for cp, heading in seeds:
            tracer = Tracer(TracerState(cp, heading), PathTrace([], origin=origin))
            tracer.store(PixelCoord(*cp))
            tracers.append(tracer)
        return cls(tracers)

    @property
    def n0(self) -> int:
        return len(self.tracers)

    @property
    def live(self) -> list[Tracer]:
        return [t for t in self.tracers if t.alive]

    def cull_counts(self) -> dict[CullReason, int]:
        counts = {reason: 0 for reason in CullReason}
        for tracer in self.tracers:
            if tracer.cull_reason is not None:
                counts[tracer.cull_reason] += 1
        return counts

    def paths(self) -> list[PathTrace]:
        return [t.path for t in self.tracers]


def _extract_patches(
    stack: InputStack, states: list[TracerState], executor: Optional[Executor]
) -> np.ndarray:
    def extract(state: TracerState) -> np.ndarray:
        return extract_oriented_patch(stack, state.cp, state.heading)

    mapped = executor.map(extract, states) if executor is not None else map(extract, states)
    return np.stack(list(mapped))


def advance_pool(
    pool: TracerPool,
    stack: InputStack,
    predictor: DirectionPredictor,
    cfg: CompletionConfig,
    rng: np.random.Generator,
    step_cap: Optional[int] = None,
    executor: Optional[Executor] = None,
) -> TracerPool:
    """
    One synchronized iteration over all live tracers.

    Patches are predicted in one batch, each tracer draws its own pixelstep,
    then cp_new is stored (when inside the image) and the deletion rules are
    applied in tracer order.
    """
    live = pool.live
    if not live:
        raise InvalidArgumentError("advance_pool needs at least one live tracer")

    states = [t.state for t in live]
    patches = _extract_patches(stack, states, executor) if predictor.needs_patches else None

    alphas = np.asarray(predictor.predict(patches, states), dtype=np.float64)
    if alphas.shape != (len(live),):
        raise InvalidArgumentError(
            f"predictor returned {alphas.shape} angles for {len(live)} tracers"
        )
    sizes = sample_steps(rng, len(live), cfg.step_probabilities)
    cap = step_cap if step_cap is not None else cfg.step_cap(stack.height, stack.width)
    softmap = stack.softmap

    for tracer, alpha, size in zip(live, alphas, sizes):
        new = step(tracer.state, float(alpha), int(size))
        tracer.steps += 1
        if not new.cp.in_bounds(stack.height, stack.width):
            tracer.cull_reason = CullReason.LEFT_IMAGE
            tracer.path.exit_reason = ExitReason.LEFT_IMAGE
            continue

        segment = rasterize_segment(tracer.state.cp, new.cp)[1:]
        looping = any(is_looping(tracer.path.pixels, tracer.visited, p, cfg) for p in segment)
        for pixel in segment:
            tracer.store(pixel)
        tracer.state = new

        if is_bad_location(softmap, new.cp, cfg):
            tracer.cull_reason = CullReason.LOW_PROBABILITY
        elif looping:
            tracer.cull_reason = CullReason.LOOPING
        elif tracer.steps >= cap:
            tracer.cull_reason = CullReason.MAX_STEPS

    pool.iterations += 1
    return pool
