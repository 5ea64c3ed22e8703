"""
Longest straight line of the contour map via the Hough transform.
"""

from dataclasses import dataclass

import numpy as np
from skimage.transform import hough_line

from wtl.raster.geometry import PixelCoord
from wtl.shared.errors import NoLineError
from wtl.shared.schemas import BinarizeConfig, LineReport
from wtl.shared.utils import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class LineSegment:
    """
    A segment on the Hough line rho = col * cos(theta) + row * sin(theta).
    theta is the normal angle in degrees, in [-90, 90).
    """

    start: PixelCoord
    end: PixelCoord
    rho: float
    theta: float

    @property
    def length(self) -> float:
        return float(np.hypot(self.end.row - self.start.row, self.end.col - self.start.col))

    @property
    def midpoint_col(self) -> float:
        return (self.start.col + self.end.col) / 2.0

    def row_at(self, col: float) -> float:
        """Row of the segment's supporting line at a column (interpolated from the endpoints)."""
        if self.end.col == self.start.col:
            return (self.start.row + self.end.row) / 2.0
        t = (col - self.start.col) / (self.end.col - self.start.col)
        return self.start.row + t * (self.end.row - self.start.row)

    def to_report(self) -> LineReport:
        return LineReport(
            rho=self.rho,
            theta=self.theta,
            start=(self.start.row, self.start.col),
            end=(self.end.row, self.end.col),
            length=self.length,
        )


def _vote(binary: np.ndarray, cfg: BinarizeConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    thetas = np.deg2rad(np.arange(-90.0, 90.0, cfg.theta_resolution))
    accumulator, angles, dists = hough_line(binary, theta=thetas)
    factor = max(int(round(cfg.rho_resolution)), 1)
    if factor > 1:
        starts = np.arange(0, len(dists), factor)
        accumulator = np.add.reduceat(accumulator, starts, axis=0)
        dists = dists[starts] + (factor - 1) / 2.0
    return accumulator, angles, dists


def longest_run(
    pixels: np.ndarray, theta: float, gap_tolerance: int
) -> tuple[PixelCoord, PixelCoord]:
    """
    Longest run of pixels along a line direction, bridging gaps up to
    `gap_tolerance` pixels. `pixels` is (n, 2) as (row, col); theta in radians.
    """
    along = -pixels[:, 1] * np.sin(theta) + pixels[:, 0] * np.cos(theta)
    order = np.argsort(along, kind="stable")
    along, pixels = along[order], pixels[order]

    breaks = np.flatnonzero(np.diff(along) > gap_tolerance + 1) + 1
    bounds = np.concatenate([[0], breaks, [len(along)]])
    best, best_length = (0, 0), -1.0
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        a, b = pixels[lo], pixels[hi - 1]
        length = float(np.hypot(*(b - a)))
        if length > best_length:
            best, best_length = (lo, hi - 1), length
    a, b = pixels[best[0]], pixels[best[1]]
    return PixelCoord(int(a[0]), int(a[1])), PixelCoord(int(b[0]), int(b[1]))


def hough_longest_line(wtl: np.ndarray, cfg: BinarizeConfig) -> LineSegment:
    """
    Detect the dominant straight line of the map and return its longest run.

    Binarizes at th_low, takes the global accumulator peak, gathers foreground
    pixels within line_tolerance of the peak line and keeps the longest run.

    Raises:
        NoLineError: If nothing is foreground at th_low
    """
    binary = np.asarray(wtl) >= cfg.th_low
    if not binary.any():
        raise NoLineError(f"no foreground at threshold {cfg.th_low}")

    accumulator, angles, dists = _vote(binary, cfg)
    rho_idx, theta_idx = np.unravel_index(int(np.argmax(accumulator)), accumulator.shape)
    rho, theta = float(dists[rho_idx]), float(angles[theta_idx])

    rows, cols = np.nonzero(binary)
    distance = np.abs(cols * np.cos(theta) + rows * np.sin(theta) - rho)
    on_line = np.stack([rows, cols], axis=1)[distance <= cfg.line_tolerance]
    if len(on_line) == 0:
        raise NoLineError("Hough peak has no supporting pixels")

    start, end = longest_run(on_line, theta, cfg.gap_tolerance)
    segment = LineSegment(start=start, end=end, rho=rho, theta=float(np.rad2deg(theta)))
    logger.info(
        "longest_line_found",
        rho=segment.rho,
        theta=segment.theta,
        start=tuple(start),
        end=tuple(end),
        votes=int(accumulator[rho_idx, theta_idx]),
    )
    return segment
