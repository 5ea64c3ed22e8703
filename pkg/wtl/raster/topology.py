"""
Pixel neighbourhoods and closed-curve checks on binary masks.
"""

from typing import Optional

import numpy as np
from scipy import ndimage

EIGHT_CONNECTIVITY = np.ones((3, 3), dtype=bool)
FOUR_CONNECTIVITY = ndimage.generate_binary_structure(2, 1)

_NEIGHBOR_KERNEL = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=np.int32)


def neighbor_counts(mask: np.ndarray) -> np.ndarray:
    """Number of foreground 8-neighbours of every pixel."""
    return ndimage.convolve(
        np.asarray(mask, dtype=np.int32), _NEIGHBOR_KERNEL, mode="constant", cval=0
    )


def label_components(mask: np.ndarray, eight: bool = True) -> tuple[np.ndarray, int]:
    structure = EIGHT_CONNECTIVITY if eight else FOUR_CONNECTIVITY
    labels, count = ndimage.label(mask, structure=structure)
    return labels, int(count)


def largest_component(mask: np.ndarray) -> np.ndarray:
    """The largest 8-connected component; lowest label wins ties."""
    labels, count = label_components(mask)
    if count <= 1:
        return np.asarray(mask, dtype=bool).copy()
    sizes = np.bincount(labels.ravel())[1:]
    return labels == int(np.argmax(sizes)) + 1


def closure_violation(mask: np.ndarray) -> Optional[str]:
    """
    Why `mask` is not a single closed 1-pixel 8-connected curve, or None.

    Closed means every foreground pixel has exactly two foreground 8-neighbours
    and there is exactly one component.
    """
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        return f"mask must be 2-D, got shape {mask.shape}"
    if not mask.any():
        return "mask is empty"
    counts = neighbor_counts(mask)[mask]
    endpoints = int(np.sum(counts < 2))
    if endpoints:
        return f"{endpoints} endpoint pixels"
    branches = int(np.sum(counts > 2))
    if branches:
        return f"{branches} branch pixels"
    _, components = label_components(mask)
    if components != 1:
        return f"{components} components, expected 1"
    return None


def is_closed_contour(mask: np.ndarray) -> bool:
    return closure_violation(mask) is None
