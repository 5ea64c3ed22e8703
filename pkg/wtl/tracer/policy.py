"""
Step-size policies: how many pixels a tracer moves per iteration.
"""

from typing import Protocol, Sequence

import numpy as np

from wtl.raster.geometry import STEP_SIZES
from wtl.shared.errors import InvalidArgumentError

DEFAULT_STEP_PROBABILITIES = (0.87, 0.12, 0.01)


def sample_step(
    rng: np.random.Generator, probabilities: Sequence[float] = DEFAULT_STEP_PROBABILITIES
) -> int:
    """Draw one pixelstep (1, 2 or 3)."""
    return int(rng.choice(STEP_SIZES, p=probabilities))


def sample_steps(
    rng: np.random.Generator,
    count: int,
    probabilities: Sequence[float] = DEFAULT_STEP_PROBABILITIES,
) -> np.ndarray:
    """Draw `count` independent pixelsteps in one call."""
    return rng.choice(np.array(STEP_SIZES), size=count, p=probabilities)


class StepPolicy(Protocol):
    def next_size(self) -> int: ...


class FixedStep:
    """Always the same pixelstep."""

    def __init__(self, size: int = 1) -> None:
        if size not in STEP_SIZES:
            raise InvalidArgumentError(f"pixelstep must be one of {STEP_SIZES}, got {size}")
        self.size = size

    def next_size(self) -> int:
        return self.size


class RandomStep:
    """Pixelsteps drawn from a categorical distribution."""

    def __init__(
        self,
        rng: np.random.Generator,
        probabilities: Sequence[float] = DEFAULT_STEP_PROBABILITIES,
    ) -> None:
        self.rng = rng
        self.probabilities = tuple(probabilities)

    def next_size(self) -> int:
        return sample_step(self.rng, self.probabilities)


class SequenceStep:
    """Replays a fixed sequence of pixelsteps, then repeats the last one."""

    def __init__(self, sizes: Sequence[int]) -> None:
        if not sizes or any(s not in STEP_SIZES for s in sizes):
            raise InvalidArgumentError(f"invalid pixelstep sequence {list(sizes)}")
        self.sizes = list(sizes)
        self._index = 0

    def next_size(self) -> int:
        size = self.sizes[min(self._index, len(self.sizes) - 1)]
        self._index += 1
        return size
