"""
Raster grids, angle conventions, direction rings and oriented patch extraction.
"""

from .geometry import (
    STEP_SIZES,
    PixelCoord,
    all_ring_directions,
    angle_to_offset,
    offset_to_angle,
    rasterize_segment,
    ring_offsets,
    wrap_angle,
    wrap_angles,
)
from .stack import (
    PATCH_SIZE,
    WINDOW_SIZE,
    InputStack,
    as_unit_raster,
    crop_window,
    extract_oriented_patch,
    stack_inputs,
)
from .topology import (
    EIGHT_CONNECTIVITY,
    FOUR_CONNECTIVITY,
    closure_violation,
    is_closed_contour,
    label_components,
    largest_component,
    neighbor_counts,
)

__all__ = [
    "STEP_SIZES",
    "PixelCoord",
    "all_ring_directions",
    "angle_to_offset",
    "offset_to_angle",
    "rasterize_segment",
    "ring_offsets",
    "wrap_angle",
    "wrap_angles",
    "PATCH_SIZE",
    "WINDOW_SIZE",
    "InputStack",
    "as_unit_raster",
    "crop_window",
    "extract_oriented_patch",
    "stack_inputs",
    "EIGHT_CONNECTIVITY",
    "FOUR_CONNECTIVITY",
    "closure_violation",
    "is_closed_contour",
    "label_components",
    "largest_component",
    "neighbor_counts",
]
