"""
Training-label generation from ground-truth contours.
"""

from .chain import ContourChain, check_closed_curve, signed_area, trace_gt_chain
from .dataset_io import load_dataset, save_dataset
from .labels import (
    DatasetSplit,
    LabelRecord,
    chain_direction,
    generate_dataset,
    label_at,
    make_label,
)

__all__ = [
    "ContourChain",
    "DatasetSplit",
    "LabelRecord",
    "chain_direction",
    "check_closed_curve",
    "generate_dataset",
    "label_at",
    "load_dataset",
    "make_label",
    "save_dataset",
    "signed_area",
    "trace_gt_chain",
]
