"""
Shared fixtures: small closed contours, stacks and stand-in predictors.
"""

from typing import Optional, Sequence

import numpy as np
import pytest

from wtl.evaluation import contour_of_mask
from wtl.raster import InputStack, stack_inputs
from wtl.shared.schemas import PredictorKind, SceneParams


class ConstantPredictor:
    """Always answers the same direction change; never looks at patches."""

    kind = PredictorKind.RIDGE
    needs_patches = False

    def __init__(self, alpha: float = 0.0) -> None:
        self.alpha = alpha
        self.calls = 0

    def predict(self, patches: Optional[np.ndarray], states: Sequence) -> np.ndarray:
        self.calls += 1
        return np.full(len(states), self.alpha)

    def mirrored(self, width: int) -> "ConstantPredictor":
        return ConstantPredictor(-self.alpha)


@pytest.fixture
def square_mask():
    """16 x 16 filled square at rows/cols 8..23 of a 32 x 32 grid."""
    mask = np.zeros((32, 32), dtype=bool)
    mask[8:24, 8:24] = True
    return mask


@pytest.fixture
def square_contour(square_mask):
    """Closed 1-pixel contour of the square (corners pruned, 56 pixels)."""
    return contour_of_mask(square_mask)


@pytest.fixture
def square_stack(square_contour):
    """Gray image with the square contour as a crisp soft map."""
    image = np.full(square_contour.shape + (3,), 0.5, dtype=np.float32)
    return stack_inputs(image, square_contour.astype(np.float32))


@pytest.fixture
def flat_stack():
    """Uniform 24 x 24 stack with a flat soft map."""
    image = np.full((24, 24, 3), 0.5, dtype=np.float32)
    return InputStack(np.concatenate([image, np.full((24, 24, 1), 0.5, np.float32)], axis=2))


@pytest.fixture
def small_scene_params():
    """Small, clean scenes for fast tests."""
    return SceneParams(
        height=96, width=96, complexity=1, antennas=0, noise_level=0.0, gap_count=0
    )


@pytest.fixture
def constant_predictor():
    return ConstantPredictor(0.0)


@pytest.fixture
def turning_predictor():
    """Factory for predictors with a fixed turn."""
    return ConstantPredictor
