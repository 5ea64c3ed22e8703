"""
Contour completion: clockwise and mirrored anticlockwise passes summed into
the accumulation map.
"""

import time
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from wtl.predictor.base import DirectionPredictor
from wtl.raster.stack import InputStack
from wtl.shared.errors import EmptyResultError
from wtl.shared.schemas import CompletionConfig, CompletionReport, PassReport, TraceOrigin
from wtl.shared.utils import get_logger
from wtl.tracer.state import PathTrace

from .pool import TracerPool, advance_pool
from .seeding import seed_tracers

logger = get_logger(__name__)


@dataclass(frozen=True)
class AccumulationMap:
    """Per-pixel count of path visits from all passes."""

    counts: np.ndarray

    @property
    def max_count(self) -> int:
        return int(self.counts.max()) if self.counts.size else 0

    def normalized(self) -> np.ndarray:
        """Counts divided by the maximum; all zeros for an empty map."""
        peak = self.max_count
        if peak == 0:
            return np.zeros(self.counts.shape, dtype=np.float32)
        return (self.counts / peak).astype(np.float32)

    @property
    def support(self) -> np.ndarray:
        return self.counts > 0


def accumulate(paths: list[PathTrace], height: int, width: int) -> AccumulationMap:
    """Sum paths pixel by pixel, counting repeated visits."""
    counts = np.zeros((height, width), dtype=np.int64)
    for path in paths:
        if not path.pixels:
            continue
        pixels = np.asarray(path.pixels, dtype=np.int64)
        np.add.at(counts, (pixels[:, 0], pixels[:, 1]), 1)
    return AccumulationMap(counts)


@dataclass
class PassResult:
    paths: list[PathTrace]
    report: PassReport
    # Wall-clock seconds; kept out of the report.
    elapsed: float = 0.0


@dataclass
class CompletionResult:
    """Accumulation map, per-pass paths and the run report."""

    accumulation: AccumulationMap
    passes: list[PassResult]
    report: CompletionReport

    @property
    def paths(self) -> list[PathTrace]:
        return [p for result in self.passes for p in result.paths]


def run_pass(
    stack: InputStack,
    predictor: DirectionPredictor,
    cfg: CompletionConfig,
    rng: np.random.Generator,
    origin: TraceOrigin = TraceOrigin.CLOCKWISE,
    executor: Optional[Executor] = None,
) -> PassResult:
    """Seed the pool from the stack's soft map and advance it until no tracer is left."""
    seeds = seed_tracers(stack.softmap, cfg)
    pool = TracerPool.from_seeds(seeds, origin)
    cap = cfg.step_cap(stack.height, stack.width)
    log = logger.bind(component="completion", origin=origin.value)
    log.debug("pass_started", n0=pool.n0, step_cap=cap)
    started = time.perf_counter()

    while pool.live:
        advance_pool(pool, stack, predictor, cfg, rng, step_cap=cap, executor=executor)

    paths = pool.paths()
    report = PassReport(
        origin=origin,
        n0=pool.n0,
        iterations=pool.iterations,
        culls=pool.cull_counts(),
        path_pixels=sum(len(p) for p in paths),
    )
    log.info(
        "pass_complete",
        n0=report.n0,
        iterations=report.iterations,
        culls={k.value: v for k, v in report.culls.items()},
    )
    return PassResult(paths, report, elapsed=time.perf_counter() - started)


def run_anticlockwise_pass(
    stack: InputStack,
    predictor: DirectionPredictor,
    cfg: CompletionConfig,
    rng: np.random.Generator,
    executor: Optional[Executor] = None,
) -> PassResult:
    """Clockwise pass on the mirrored stack, with paths mirrored back."""
    width = stack.width
    mirrored = run_pass(
        stack.mirrored(),
        predictor.mirrored(width),
        cfg,
        rng,
        origin=TraceOrigin.ANTICLOCKWISE,
        executor=executor,
    )
    return PassResult(
        [p.mirrored(width) for p in mirrored.paths], mirrored.report, elapsed=mirrored.elapsed
    )


def run_completion(
    stack: InputStack,
    predictor: DirectionPredictor,
    cfg: Optional[CompletionConfig] = None,
) -> CompletionResult:
    """
    Both traversal passes and their accumulation map.

    Raises:
        EmptyResultError: If the soft map yields no seeds
    """
    cfg = cfg or CompletionConfig()
    if not seed_tracers(stack.softmap, cfg):
        raise EmptyResultError(
            f"no tracer seeds at threshold {cfg.seed_threshold}; soft map too weak"
        )

    clockwise_seq, anticlockwise_seq = np.random.SeedSequence(cfg.rng_seed).spawn(2)
    executor = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
    try:
        passes = [
            run_pass(
                stack, predictor, cfg, np.random.default_rng(clockwise_seq), executor=executor
            ),
            run_anticlockwise_pass(
                stack, predictor, cfg, np.random.default_rng(anticlockwise_seq), executor=executor
            ),
        ]
    finally:
        if executor is not None:
            executor.shutdown()

    accumulation = accumulate(
        [p for result in passes for p in result.paths], stack.height, stack.width
    )
    report = CompletionReport(
        height=stack.height,
        width=stack.width,
        passes=[p.report for p in passes],
        max_count=accumulation.max_count,
    )
    logger.info(
        "completion_finished",
        n0=report.n0,
        max_count=report.max_count,
        support=int(accumulation.support.sum()),
    )
    return CompletionResult(accumulation, passes, report)
