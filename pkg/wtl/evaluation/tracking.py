"""
How closely a single tracer's path follows a ground-truth chain.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from wtl.labelgen.chain import ContourChain
from wtl.shared.errors import InvalidArgumentError
from wtl.tracer.state import PathTrace


@dataclass(frozen=True)
class ChainTracking:
    """Chebyshev distances from path to chain and chain coverage by the path."""

    max_distance: float
    mean_distance: float
    coverage: float
    tolerance: float

    @property
    def on_chain(self) -> bool:
        return self.max_distance <= self.tolerance

    @property
    def full_loop(self) -> bool:
        """Every chain pixel was passed within tolerance while staying on the chain."""
        return self.on_chain and self.coverage >= 1.0


def chain_tracking(path: PathTrace, chain: ContourChain, tolerance: float = 2.0) -> ChainTracking:
    """
    Compare a path against a chain in Chebyshev distance.

    Args:
        path: Stored path pixels of one tracer
        chain: Ground-truth chain
        tolerance: Distance counted as on the chain

    Raises:
        InvalidArgumentError: If the path or the chain is empty
    """
    if len(path) == 0 or len(chain) == 0:
        raise InvalidArgumentError("tracking needs a nonempty path and chain")

    path_pixels = np.asarray(path.pixels, dtype=np.float64)
    chain_pixels = chain.pixels.astype(np.float64)

    to_chain, _ = cKDTree(chain_pixels).query(path_pixels, p=np.inf)
    to_path, _ = cKDTree(path_pixels).query(chain_pixels, p=np.inf)
    return ChainTracking(
        max_distance=float(to_chain.max()),
        mean_distance=float(to_chain.mean()),
        coverage=float(np.mean(to_path <= tolerance)),
        tolerance=tolerance,
    )
