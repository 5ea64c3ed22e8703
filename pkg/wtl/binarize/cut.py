"""
Opening the contour map with a vertical cut through the longest line.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from wtl.raster.geometry import PixelCoord
from wtl.shared.errors import CutFailureError
from wtl.shared.schemas import BinarizeConfig
from wtl.shared.utils import get_logger

from .hough import LineSegment

logger = get_logger(__name__)


@dataclass(frozen=True)
class CutInfo:
    """
    Where the map was opened. `cutout` is the full original column; only
    rows [row_lo, row_hi) were zeroed.
    """

    cut_col: int
    cutout: np.ndarray
    pixel1: PixelCoord
    pixel2: PixelCoord
    row_lo: int
    row_hi: int


def zero_column(values: np.ndarray, col: int, rows: Optional[tuple[int, int]] = None) -> np.ndarray:
    """Copy of `values` with column `col` zeroed (only rows [lo, hi) when given)."""
    out = np.array(values, copy=True)
    lo, hi = rows if rows is not None else (0, out.shape[0])
    out[lo:hi, col] = 0
    return out


def restore(open_wtl: np.ndarray, cut: CutInfo) -> np.ndarray:
    """Write the cutout back into the opened map."""
    closed = np.array(open_wtl, copy=True)
    closed[:, cut.cut_col] = cut.cutout
    return closed


def _flank_pixel(
    binary: np.ndarray, col: int, line_row: float, search_rows: int
) -> Optional[PixelCoord]:
    center = int(np.floor(line_row + 0.5))
    candidates = [
        r
        for r in range(center - search_rows, center + search_rows + 1)
        if 0 <= r < binary.shape[0] and binary[r, col]
    ]
    if not candidates:
        return None
    row = min(candidates, key=lambda r: (abs(r - line_row), r))
    return PixelCoord(row, col)


def make_cut(
    wtl: np.ndarray, segment: LineSegment, cfg: BinarizeConfig
) -> tuple[np.ndarray, CutInfo]:
    """
    Open the map at the middle of the segment.

    Raises:
        CutFailureError: If the cut column touches the border or no foreground
            pixel flanks the cut near the line
    """
    wtl = np.asarray(wtl)
    height, width = wtl.shape
    cut_col = int(np.floor(segment.midpoint_col + 0.5))
    if not 1 <= cut_col <= width - 2:
        raise CutFailureError(f"cut column {cut_col} is not strictly inside the image")

    binary = wtl >= cfg.th_low
    pixel1 = _flank_pixel(binary, cut_col - 1, segment.row_at(cut_col - 1), cfg.flank_search_rows)
    pixel2 = _flank_pixel(binary, cut_col + 1, segment.row_at(cut_col + 1), cfg.flank_search_rows)
    if pixel1 is None or pixel2 is None:
        raise CutFailureError(
            f"no foreground pixel within {cfg.flank_search_rows} rows of the line "
            f"beside column {cut_col}"
        )

    if cfg.cut_half_height is None:
        row_lo, row_hi = 0, height
    else:
        line_row = int(np.floor(segment.row_at(cut_col) + 0.5))
        row_lo = max(line_row - cfg.cut_half_height, 0)
        row_hi = min(line_row + cfg.cut_half_height + 1, height)

    cut = CutInfo(
        cut_col=cut_col,
        cutout=wtl[:, cut_col].copy(),
        pixel1=pixel1,
        pixel2=pixel2,
        row_lo=row_lo,
        row_hi=row_hi,
    )
    logger.debug("contour_cut", cut_col=cut_col, pixel1=tuple(pixel1), pixel2=tuple(pixel2))
    return zero_column(wtl, cut_col, (row_lo, row_hi)), cut
