"""
Binarization of the accumulated tracer paths into a closed 1-pixel contour.
"""

from wtl.raster.topology import is_closed_contour

from .cut import CutInfo, make_cut, restore, zero_column
from .hough import LineSegment, hough_longest_line, longest_run
from .pipeline import (
    BinarizeResult,
    binarize_pipeline,
    count_cycles,
    diagnose_contour,
    diagnose_failure,
    diagnose_result,
)
from .threshold import find_closing_threshold, is_connected, threshold_grid
from .thinning import clean, peel_endpoints, prune_redundant, thin

__all__ = [
    "BinarizeResult",
    "CutInfo",
    "LineSegment",
    "binarize_pipeline",
    "clean",
    "count_cycles",
    "diagnose_contour",
    "diagnose_failure",
    "diagnose_result",
    "find_closing_threshold",
    "hough_longest_line",
    "is_closed_contour",
    "is_connected",
    "longest_run",
    "make_cut",
    "peel_endpoints",
    "prune_redundant",
    "restore",
    "thin",
    "threshold_grid",
    "zero_column",
]
