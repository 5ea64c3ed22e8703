"""
Structure-tensor ridge predictor.

A non-learned baseline: the orientation of the soft-map ridge in the canonical
patch, relative to east. Returns values in (-90, 90], the representative nearest
the current heading.
"""

from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from scipy import ndimage

from wtl.raster.stack import PATCH_SIZE
from wtl.shared.schemas import PredictorKind

if TYPE_CHECKING:
    from wtl.tracer.state import TracerState

PRESMOOTH_SIGMA = 1.0
WINDOW_SIGMA = 3.0
# Structure tensor energy under which a patch counts as flat.
FLAT_ENERGY = 1e-10


def _window(sigma: float) -> np.ndarray:
    offsets = np.arange(PATCH_SIZE) - PATCH_SIZE // 2
    g = np.exp(-(offsets**2) / (2.0 * sigma**2))
    w = np.outer(g, g)
    return w / w.sum()


_WINDOW = _window(WINDOW_SIGMA)
# Sobel d/drow kernel; transposed for d/dcol.
_SOBEL_ROW = np.array([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]])


def ridge_angles(patches: np.ndarray) -> np.ndarray:
    """Ridge orientation of a batch of (N, 13, 13, 4) patches, in degrees."""
    soft = np.asarray(patches, dtype=np.float64)[..., 3]
    smooth = ndimage.gaussian_filter(soft, sigma=(0, PRESMOOTH_SIGMA, PRESMOOTH_SIGMA))
    g_row = ndimage.correlate(smooth, _SOBEL_ROW[None], mode="nearest")
    g_col = ndimage.correlate(smooth, _SOBEL_ROW.T[None], mode="nearest")

    j_cc = np.einsum("nij,ij->n", g_col * g_col, _WINDOW)
    j_rr = np.einsum("nij,ij->n", g_row * g_row, _WINDOW)
    j_rc = np.einsum("nij,ij->n", g_row * g_col, _WINDOW)

    gradient = 0.5 * np.degrees(np.arctan2(2.0 * j_rc, j_cc - j_rr))
    ridge = np.mod(gradient + 90.0 + 90.0, 180.0) - 90.0
    ridge = np.where(ridge == -90.0, 90.0, ridge)
    return np.where(j_cc + j_rr < FLAT_ENERGY, 0.0, ridge)


def ridge_predict(patch: np.ndarray) -> float:
    """Ridge orientation of one patch; 0 for a flat patch."""
    return float(ridge_angles(np.asarray(patch)[None])[0])


class RidgePredictor:
    kind = PredictorKind.RIDGE
    needs_patches = True

    def predict(
        self, patches: Optional[np.ndarray], states: Sequence["TracerState"]
    ) -> np.ndarray:
        if patches is None or len(patches) == 0:
            return np.zeros(len(states))
        return ridge_angles(patches)

    def mirrored(self, width: int) -> "RidgePredictor":
        return self
