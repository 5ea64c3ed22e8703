"""
Thinning and cleaning of the binarized contour into a closed 1-pixel curve.
"""

import numpy as np
from skimage.morphology import skeletonize

from wtl.raster.topology import closure_violation, largest_component, neighbor_counts
from wtl.shared.errors import NotClosedError
from wtl.shared.schemas import BinarizeConfig
from wtl.shared.utils import get_logger

logger = get_logger(__name__)

# Ring of the 3x3 neighbourhood in cyclic order, starting north-west.
_RING = ((-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1))


def _ring_groups(pattern: int) -> int:
    """Number of 8-connected groups among the occupied ring cells of a pattern."""
    cells = [i for i in range(8) if pattern >> i & 1]
    parent = {i: i for i in cells}

    def find(i: int) -> int:
        while parent[i] != i:
            i = parent[i]
        return i

    for a in cells:
        for b in cells:
            if a < b and max(
                abs(_RING[a][0] - _RING[b][0]), abs(_RING[a][1] - _RING[b][1])
            ) == 1:
                parent[find(a)] = find(b)
    return len({find(i) for i in cells})


# Patterns whose pixel can go without splitting its neighbours: at least two
# neighbours, all in one group.
_REDUNDANT = np.array(
    [bin(p).count("1") >= 2 and _ring_groups(p) == 1 for p in range(256)], dtype=bool
)


def _pattern(mask: np.ndarray, r: int, c: int) -> int:
    height, width = mask.shape
    code = 0
    for bit, (dr, dc) in enumerate(_RING):
        rr, cc = r + dr, c + dc
        if 0 <= rr < height and 0 <= cc < width and mask[rr, cc]:
            code |= 1 << bit
    return code


def _break_blocks(mask: np.ndarray) -> np.ndarray:
    """Remove one pixel from each 2x2 foreground block, preferring redundant pixels."""
    out = mask.copy()
    while True:
        blocks = out[:-1, :-1] & out[:-1, 1:] & out[1:, :-1] & out[1:, 1:]
        if not blocks.any():
            return out
        r, c = (int(v) for v in np.argwhere(blocks)[0])
        cells = [(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)]
        redundant = [p for p in cells if _REDUNDANT[_pattern(out, *p)]]
        out[(redundant or cells[-1:])[0]] = False


def thin(mask: np.ndarray) -> np.ndarray:
    """
    Zhang-Suen skeleton of a binary mask. Blocks of 2x2 pixels the skeleton
    keeps at junctions are broken, so no pixel has a full 2x2 neighbourhood.
    """
    return _break_blocks(skeletonize(np.asarray(mask, dtype=bool), method="zhang"))


def prune_redundant(mask: np.ndarray) -> np.ndarray:
    """
    Remove pixels whose neighbours stay connected without them (staircase
    corners), in raster order until nothing changes. A simple cycle of four
    or more pixels is left with two non-adjacent neighbours per pixel.
    """
    out = np.asarray(mask, dtype=bool).copy()
    changed = True
    while changed:
        changed = False
        counts = neighbor_counts(out)
        for r, c in zip(*np.nonzero(out & (counts >= 2))):
            if _REDUNDANT[_pattern(out, int(r), int(c))]:
                out[r, c] = False
                changed = True
    return out


def peel_endpoints(mask: np.ndarray, cap: int) -> tuple[np.ndarray, int]:
    """
    Delete pixels with fewer than two neighbours, layer by layer, up to `cap`
    rounds. Redundant pixels are pruned before each round.

    Returns:
        (peeled mask, rounds used)
    """
    out = prune_redundant(mask)
    rounds = 0
    while rounds < cap:
        ends = out & (neighbor_counts(out) < 2)
        if not ends.any():
            break
        out[ends] = False
        out = prune_redundant(out)
        rounds += 1
    return out, rounds


def clean(mask: np.ndarray, cfg: BinarizeConfig) -> np.ndarray:
    """
    Peel spurs, keep the largest component and check that a single closed
    1-pixel curve remains.

    Raises:
        NotClosedError: Describing the violated closure property
    """
    peeled, rounds = peel_endpoints(mask, cfg.spur_prune_cap)
    contour = prune_redundant(largest_component(peeled))
    problem = closure_violation(contour)
    if problem is not None:
        raise NotClosedError(f"cleaned contour is not closed: {problem}")
    logger.debug("contour_cleaned", rounds=rounds, pixels=int(contour.sum()))
    return contour
