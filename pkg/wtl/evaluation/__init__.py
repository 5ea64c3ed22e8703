"""
Evaluation: mask extraction, metrics, result tables, tracer tracking and synthetic scenes.
"""

from .masks import contour_of_mask, fill_closed_contour
from .metrics import MetricTable, metrics, report_table
from .synth import SyntheticScene, gen_scene, load_scene, save_scene, simulate_softmap
from .tracking import ChainTracking, chain_tracking

__all__ = [
    "ChainTracking",
    "MetricTable",
    "SyntheticScene",
    "chain_tracking",
    "contour_of_mask",
    "fill_closed_contour",
    "gen_scene",
    "load_scene",
    "metrics",
    "report_table",
    "save_scene",
    "simulate_softmap",
]
