"""
Angle and pixel-step conventions shared by every component.

Angles are degrees in (-180, 180], 0 points east (+col) and positive angles turn
clockwise on screen (toward +row). Offsets are (drow, dcol).
"""

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from skimage.draw import line as bresenham_line

from wtl.shared.errors import InvalidArgumentError

STEP_SIZES = (1, 2, 3)

# Tolerance under which two angular distances count as a tie.
_TIE_EPS = 1e-9


class PixelCoord(NamedTuple):
    """Pixel position; row grows downward, col grows rightward."""

    row: int
    col: int

    def in_bounds(self, height: int, width: int) -> bool:
        return 0 <= self.row < height and 0 <= self.col < width

    def offset(self, drow: int, dcol: int) -> "PixelCoord":
        return PixelCoord(self.row + drow, self.col + dcol)


def wrap_angle(a: float) -> float:
    """
    Wrap an angle in degrees to (-180, 180].

    Raises:
        InvalidArgumentError: If the angle is not finite
    """
    if not math.isfinite(a):
        raise InvalidArgumentError(f"angle must be finite, got {a}")
    r = float(a) % 360.0
    if r > 180.0:
        r -= 360.0
    return r


def wrap_angles(a: np.ndarray) -> np.ndarray:
    """Vectorized wrap_angle."""
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("angles must be finite")
    r = np.mod(a, 360.0)
    return np.where(r > 180.0, r - 360.0, r)


def offset_to_angle(drow: int, dcol: int) -> float:
    """
    Direction of a pixel offset in the clockwise-positive convention.

    Raises:
        InvalidArgumentError: For the zero offset
    """
    if drow == 0 and dcol == 0:
        raise InvalidArgumentError("zero offset has no direction")
    return wrap_angle(math.degrees(math.atan2(drow, dcol)))


def _check_step(step: int) -> None:
    if step not in STEP_SIZES:
        raise InvalidArgumentError(f"pixelstep must be one of {STEP_SIZES}, got {step}")


@lru_cache(maxsize=None)
def ring_offsets(step: int) -> tuple[tuple[int, int], ...]:
    """
    Chebyshev ring of radius `step`, sorted by direction angle.
    8, 16 and 24 offsets for steps 1, 2 and 3.
    """
    _check_step(step)
    ring = [
        (dr, dc)
        for dr in range(-step, step + 1)
        for dc in range(-step, step + 1)
        if max(abs(dr), abs(dc)) == step
    ]
    return tuple(sorted(ring, key=lambda o: offset_to_angle(*o)))


@lru_cache(maxsize=None)
def _ring_angles(step: int) -> np.ndarray:
    angles = np.array([offset_to_angle(*o) for o in ring_offsets(step)])
    angles.setflags(write=False)
    return angles


def angle_to_offset(heading: float, step: int) -> tuple[int, int]:
    """
    Ring offset whose direction is closest to `heading`.

    Ties go to the counterclockwise candidate (negative signed difference).
    """
    _check_step(step)
    signed = wrap_angles(_ring_angles(step) - heading)
    distance = np.abs(signed)
    best = distance.min()
    candidates = np.flatnonzero(distance <= best + _TIE_EPS)
    if len(candidates) > 1:
        candidates = candidates[np.argsort(signed[candidates], kind="stable")]
    return ring_offsets(step)[int(candidates[0])]


def all_ring_directions() -> list[float]:
    """Distinct directions reachable with pixelsteps 1, 2 and 3 combined (32 values)."""
    angles = {round(a, 9) for step in STEP_SIZES for a in _ring_angles(step)}
    return sorted(angles)


def rasterize_segment(start: PixelCoord, end: PixelCoord) -> list[PixelCoord]:
    """8-connected pixels from start to end, both included."""
    rows, cols = bresenham_line(int(start.row), int(start.col), int(end.row), int(end.col))
    return [PixelCoord(int(r), int(c)) for r, c in zip(rows, cols)]
