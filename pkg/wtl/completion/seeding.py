"""
Tracer seeding from the soft contour map.
"""

import numpy as np
from skimage.morphology import skeletonize

from wtl.raster.geometry import PixelCoord, offset_to_angle
from wtl.raster.stack import as_unit_raster
from wtl.raster.topology import label_components, neighbor_counts
from wtl.shared.schemas import CompletionConfig
from wtl.shared.utils import get_logger

logger = get_logger(__name__)

# 4-neighbours first so staircase fragments are walked through their corners.
_WALK_ORDER = sorted(
    [(dr, dc) for dr in (-1, 0, 1) for dc in (-1, 0, 1) if dr or dc],
    key=lambda o: (abs(o[0]) + abs(o[1]), o),
)


def checkerboard(height: int, width: int, cell: int) -> np.ndarray:
    """True in cells where (row // cell + col // cell) is odd."""
    rows, cols = np.indices((height, width))
    return ((rows // cell + cols // cell) % 2) == 1


def fragment_skeleton(softmap: np.ndarray, cfg: CompletionConfig) -> np.ndarray:
    """Threshold, skeletonize and break the skeleton with the checkerboard."""
    binary = softmap >= cfg.seed_threshold
    if not binary.any():
        return binary
    skeleton = skeletonize(binary)
    skeleton[checkerboard(*skeleton.shape, cfg.checker_cell)] = False
    return skeleton


def _walk_inward(
    labels: np.ndarray, label: int, start: tuple[int, int], steps: int
) -> tuple[int, int]:
    height, width = labels.shape
    visited = {start}
    current = start
    for _ in range(steps):
        r, c = current
        nxt = None
        for dr, dc in _WALK_ORDER:
            cand = (r + dr, c + dc)
            if (
                0 <= cand[0] < height
                and 0 <= cand[1] < width
                and labels[cand] == label
                and cand not in visited
            ):
                nxt = cand
                break
        if nxt is None:
            break
        visited.add(nxt)
        current = nxt
    return current


def seed_tracers(softmap: np.ndarray, cfg: CompletionConfig) -> list[tuple[PixelCoord, float]]:
    """
    Starting pixels and headings of the tracers.

    Every endpoint of a fragment with at least `min_fragment_length` pixels
    seeds one tracer, heading outward past the fragment end (from the pixel
    `seed_lookback` steps inward toward the endpoint). Sorted by (row, col).
    """
    softmap = as_unit_raster(softmap, "softmap")
    skeleton = fragment_skeleton(softmap, cfg)
    if not skeleton.any():
        logger.info("no_seed_pixels", threshold=cfg.seed_threshold)
        return []

    labels, count = label_components(skeleton)
    sizes = np.bincount(labels.ravel(), minlength=count + 1)
    endpoints = skeleton & (neighbor_counts(skeleton) == 1)

    seeds: list[tuple[PixelCoord, float]] = []
    for r, c in zip(*np.nonzero(endpoints)):
        label = labels[r, c]
        if sizes[label] < cfg.min_fragment_length:
            continue
        qr, qc = _walk_inward(labels, label, (int(r), int(c)), cfg.seed_lookback)
        if (qr, qc) == (r, c):
            continue
        seeds.append((PixelCoord(int(r), int(c)), offset_to_angle(int(r) - qr, int(c) - qc)))

    seeds.sort(key=lambda s: (s[0].row, s[0].col))
    logger.info("seeds_extracted", fragments=int(count), seeds=len(seeds))
    return seeds
