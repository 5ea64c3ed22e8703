"""
Clockwise chain tracing of 1-pixel ground-truth contours.
"""

from dataclasses import dataclass

import numpy as np

from wtl.raster.geometry import PixelCoord
from wtl.raster.topology import closure_violation
from wtl.shared.errors import InvalidGroundTruthError


def signed_area(pixels: np.ndarray) -> float:
    """Shoelace area with x = col, y = row (y down); positive for clockwise on screen."""
    x = pixels[:, 1].astype(np.float64)
    y = pixels[:, 0].astype(np.float64)
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@dataclass(frozen=True)
class ContourChain:
    """Cyclic, clockwise-ordered pixels of a closed contour, shape (L, 2) as (row, col)."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        self.pixels.setflags(write=False)

    def __len__(self) -> int:
        return int(self.pixels.shape[0])

    def at(self, index: int) -> PixelCoord:
        """Pixel at a cyclic index."""
        r, c = self.pixels[index % len(self)]
        return PixelCoord(int(r), int(c))

    @property
    def area(self) -> float:
        return signed_area(self.pixels)

    def to_mask(self, height: int, width: int) -> np.ndarray:
        mask = np.zeros((height, width), dtype=bool)
        mask[self.pixels[:, 0], self.pixels[:, 1]] = True
        return mask

    def mirrored(self, width: int) -> "ContourChain":
        """Chain of the horizontally mirrored contour, re-oriented clockwise."""
        flipped = self.pixels.copy()
        flipped[:, 1] = width - 1 - flipped[:, 1]
        return ContourChain(np.ascontiguousarray(flipped[::-1]))


def check_closed_curve(mask: np.ndarray, what: str = "contour") -> None:
    """
    Raise unless `mask` is a single 8-connected cycle where every foreground
    pixel has exactly two foreground 8-neighbours.

    Raises:
        InvalidGroundTruthError: Naming the first violation
    """
    problem = closure_violation(mask)
    if problem is not None:
        raise InvalidGroundTruthError(f"{what} is not a closed curve: {problem}")


def trace_gt_chain(gt_contour: np.ndarray) -> ContourChain:
    """
    Order a closed 1-pixel contour into a clockwise chain.

    The walk starts at the first foreground pixel in raster order and follows
    neighbours; the result is reversed when its signed area is negative.

    Raises:
        InvalidGroundTruthError: On endpoints, branches or several components
    """
    mask = np.asarray(gt_contour, dtype=bool)
    check_closed_curve(mask, "ground-truth contour")
    height, width = mask.shape

    rows, cols = np.nonzero(mask)
    start = (int(rows[0]), int(cols[0]))
    chain = [start]
    previous, current = None, start
    total = len(rows)
    while True:
        r, c = current
        step = None
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                nr, nc = r + dr, c + dc
                if (dr or dc) and 0 <= nr < height and 0 <= nc < width and mask[nr, nc]:
                    if (nr, nc) != previous:
                        step = (nr, nc)
                        break
            if step is not None:
                break
        if step is None or step == start:
            break
        previous, current = current, step
        chain.append(current)
        if len(chain) > total:
            raise InvalidGroundTruthError("ground-truth contour is not a simple cycle")

    if len(chain) != total:
        raise InvalidGroundTruthError(
            f"chain covers {len(chain)} of {total} contour pixels"
        )

    pixels = np.array(chain, dtype=np.int64)
    if signed_area(pixels) < 0:
        pixels = np.ascontiguousarray(pixels[::-1])
    return ContourChain(pixels)
