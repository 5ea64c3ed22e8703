"""
Highest threshold that reconnects the two pixels flanking the cut.
"""

import numpy as np

from wtl.raster.geometry import PixelCoord
from wtl.raster.topology import label_components
from wtl.shared.errors import InvalidArgumentError, NoClosureError
from wtl.shared.schemas import BinarizeConfig
from wtl.shared.utils import get_logger

logger = get_logger(__name__)


def is_connected(binary: np.ndarray, pixel1: PixelCoord, pixel2: PixelCoord) -> bool:
    """Both pixels are foreground and in the same 8-connected component."""
    if not (binary[pixel1] and binary[pixel2]):
        return False
    labels, _ = label_components(binary)
    return bool(labels[pixel1] == labels[pixel2])


def threshold_grid(peak: float, delta: float, k: int) -> float:
    """k-th threshold of the search grid, peak - k * delta."""
    return float(peak) - k * delta


def find_closing_threshold(
    open_wtl: np.ndarray, pixel1: PixelCoord, pixel2: PixelCoord, cfg: BinarizeConfig
) -> tuple[float, int]:
    """
    Lower the threshold from the map maximum in steps of delta_th until the
    two pixels are 8-connected in the thresholded map.

    Returns:
        (threshold, number of decrements)

    Raises:
        InvalidArgumentError: If the pixels coincide
        NoClosureError: If the threshold reaches zero first
    """
    if tuple(pixel1) == tuple(pixel2):
        raise InvalidArgumentError("closing pixels must differ")
    open_wtl = np.asarray(open_wtl)
    peak = float(open_wtl.max())

    k = 0
    th = threshold_grid(peak, cfg.delta_th, k)
    while th > 0.0:
        if is_connected(open_wtl >= th, pixel1, pixel2):
            logger.info("closing_threshold_found", threshold=th, iterations=k)
            return th, k
        k += 1
        th = threshold_grid(peak, cfg.delta_th, k)
    raise NoClosureError(
        f"pixels {tuple(pixel1)} and {tuple(pixel2)} never connect above threshold 0"
    )
