"""
Segmentation masks from closed contours, and contours from masks.
"""

import numpy as np
from scipy import ndimage

from wtl.binarize.thinning import prune_redundant
from wtl.raster.topology import FOUR_CONNECTIVITY, closure_violation, label_components
from wtl.shared.errors import FillFailureError, InvalidArgumentError


def fill_closed_contour(contour: np.ndarray) -> np.ndarray:
    """
    Mask of the region enclosed by a closed contour, contour pixels included.

    The background is flooded 4-connected from every border pixel that is not
    on the contour; everything it cannot reach belongs to the object.

    Raises:
        InvalidArgumentError: If the contour is not a single closed 1-pixel curve
        FillFailureError: If no border pixel is free to seed the background
    """
    contour = np.asarray(contour, dtype=bool)
    problem = closure_violation(contour)
    if problem is not None:
        raise InvalidArgumentError(f"cannot fill an unclosed contour: {problem}")

    free = ~contour
    border = np.zeros_like(free)
    border[0, :] = border[-1, :] = border[:, 0] = border[:, -1] = True
    if not (free & border).any():
        raise FillFailureError("contour covers the whole image border")

    labels, _ = label_components(free, eight=False)
    outside_labels = np.unique(labels[free & border])
    outside = np.isin(labels, outside_labels) & free
    return ~outside


def contour_of_mask(mask: np.ndarray) -> np.ndarray:
    """Inner 4-boundary of a mask, with staircase corners pruned."""
    mask = np.asarray(mask, dtype=bool)
    interior = ndimage.binary_erosion(mask, structure=FOUR_CONNECTIVITY, border_value=0)
    return prune_redundant(mask & ~interior)
