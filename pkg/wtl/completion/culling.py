"""
Tracer deletion rules.
"""

from typing import Mapping, Sequence

import numpy as np

from wtl.raster.geometry import PixelCoord
from wtl.shared.schemas import CompletionConfig


def is_bad_location(softmap: np.ndarray, cp: PixelCoord, cfg: CompletionConfig) -> bool:
    """True if cp left the image or its 3x3 soft-map maximum is below the threshold."""
    height, width = softmap.shape
    if not cp.in_bounds(height, width):
        return True
    r0, c0 = max(cp.row - 1, 0), max(cp.col - 1, 0)
    neighborhood = softmap[r0 : cp.row + 2, c0 : cp.col + 2]
    return bool(neighborhood.max() < cfg.bad_prob_threshold)


def is_looping(
    path: Sequence[PixelCoord],
    visited: Mapping[PixelCoord, int],
    cp_new: PixelCoord,
    cfg: CompletionConfig,
) -> bool:
    """
    True if cp_new is already on the tracer's own path, ignoring the last
    `loop_grace` path pixels.

    `visited` maps each path pixel to the last index it was stored at.
    """
    index = visited.get(cp_new)
    return index is not None and index < len(path) - cfg.loop_grace
