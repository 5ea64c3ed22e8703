"""
Input stacks and oriented patch extraction.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from wtl.shared.errors import InvalidArgumentError

from .geometry import PixelCoord

PATCH_SIZE = 13
# Smallest odd window covering every rotation of the patch (13 * sqrt(2) ~ 18.4).
WINDOW_SIZE = 21
CHANNELS = 4

_HALF_PATCH = PATCH_SIZE // 2
_HALF_WINDOW = WINDOW_SIZE // 2
_PATCH_OFFSETS = np.arange(-_HALF_PATCH, _HALF_PATCH + 1, dtype=np.float64)


def as_unit_raster(values: np.ndarray, name: str = "raster") -> np.ndarray:
    """
    Validate a real raster with values in [0, 1] and return it as float32.

    Raises:
        InvalidArgumentError: On non-finite or out-of-range values
    """
    arr = np.asarray(values, dtype=np.float32)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} contains non-finite values")
    if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
        raise InvalidArgumentError(f"{name} values must lie in [0, 1]")
    return arr


@dataclass(frozen=True)
class InputStack:
    """
    The h x w x 4 stack of RGB image and soft contour map.
    The array is read-only; use `mirrored()` for the flipped traversal.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 3 or self.data.shape[2] != CHANNELS:
            raise InvalidArgumentError(
                f"input stack must have shape (h, w, {CHANNELS}), got {self.data.shape}"
            )
        self.data.setflags(write=False)

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def rgb(self) -> np.ndarray:
        return self.data[:, :, :3]

    @property
    def softmap(self) -> np.ndarray:
        return self.data[:, :, 3]

    def mirrored(self) -> "InputStack":
        """Horizontally mirrored copy (all four channels)."""
        return InputStack(np.ascontiguousarray(self.data[:, ::-1, :]))


def stack_inputs(image: np.ndarray, softmap: np.ndarray) -> InputStack:
    """
    Concatenate an RGB image and its soft contour map.

    Raises:
        InvalidArgumentError: On shape mismatch or out-of-range values
    """
    image = as_unit_raster(image, "image")
    softmap = as_unit_raster(softmap, "softmap")
    if image.ndim != 3 or image.shape[2] != 3:
        raise InvalidArgumentError(f"image must have shape (h, w, 3), got {image.shape}")
    if softmap.shape != image.shape[:2]:
        raise InvalidArgumentError(
            f"softmap shape {softmap.shape} does not match image shape {image.shape[:2]}"
        )
    return InputStack(np.concatenate([image, softmap[:, :, None]], axis=2))


def crop_window(stack: InputStack, cp: PixelCoord, size: int = WINDOW_SIZE) -> np.ndarray:
    """Square window centred at cp; zero-padded where it leaves the image."""
    half = size // 2
    window = np.zeros((size, size, CHANNELS), dtype=np.float32)
    r0, c0 = cp.row - half, cp.col - half
    src_r0, src_c0 = max(r0, 0), max(c0, 0)
    src_r1, src_c1 = min(r0 + size, stack.height), min(c0 + size, stack.width)
    window[src_r0 - r0 : src_r1 - r0, src_c0 - c0 : src_c1 - c0] = stack.data[
        src_r0:src_r1, src_c0:src_c1
    ]
    return window


def extract_oriented_patch(stack: InputStack, cp: PixelCoord, heading: float) -> np.ndarray:
    """
    13 x 13 x 4 patch centred at cp, rotated so `heading` points east.

    Patch offset (dr, dc) samples the image at
    cp + dc * (sin h, cos h) + dr * (cos h, -sin h), bilinearly per channel.

    Raises:
        InvalidArgumentError: If cp lies outside the image
    """
    if not cp.in_bounds(stack.height, stack.width):
        raise InvalidArgumentError(
            f"center pixel {tuple(cp)} outside image {stack.height}x{stack.width}"
        )

    window = crop_window(stack, cp)
    if heading == 0.0:
        lo, hi = _HALF_WINDOW - _HALF_PATCH, _HALF_WINDOW + _HALF_PATCH + 1
        return window[lo:hi, lo:hi].copy()

    rad = math.radians(heading)
    cos_h, sin_h = math.cos(rad), math.sin(rad)
    dr, dc = np.meshgrid(_PATCH_OFFSETS, _PATCH_OFFSETS, indexing="ij")
    rows = _HALF_WINDOW + dc * sin_h + dr * cos_h
    cols = _HALF_WINDOW + dc * cos_h - dr * sin_h

    coords = np.empty((3, PATCH_SIZE, PATCH_SIZE, CHANNELS), dtype=np.float64)
    coords[0] = rows[:, :, None]
    coords[1] = cols[:, :, None]
    coords[2] = np.arange(CHANNELS, dtype=np.float64)[None, None, :]
    patch = map_coordinates(window, coords, order=1, mode="constant", cval=0.0)
    return patch.astype(np.float32)
