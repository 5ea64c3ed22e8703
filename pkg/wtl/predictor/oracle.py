"""
Ground-truth oracle predictor.

Answers with the label the training data would carry at the tracer's position,
so it doubles as a test double for the trained CNN.
"""

from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from wtl.raster.geometry import offset_to_angle, wrap_angle
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import PredictorKind

if TYPE_CHECKING:
    from wtl.labelgen.chain import ContourChain
    from wtl.tracer.state import TracerState

# Neighbours inspected for equidistant chain pixels.
_TIE_CANDIDATES = 16


class OraclePredictor:
    """
    Direction from the nearest chain pixel `lookahead` pixels ahead (clockwise).

    With `recenter` the direction is measured from the tracer's own cp to the
    look-ahead pixel, which equals the label rule on the chain and pulls a
    displaced tracer back onto it.
    """

    kind = PredictorKind.ORACLE
    needs_patches = False

    def __init__(self, chain: "ContourChain", recenter: bool = True, lookahead: int = 3) -> None:
        if len(chain) == 0:
            raise InvalidArgumentError("oracle needs a nonempty chain")
        self.chain = chain
        self.recenter = recenter
        self.lookahead = lookahead
        self._tree = cKDTree(chain.pixels.astype(np.float64))

    def nearest_index(self, row: int, col: int) -> int:
        """Index of the nearest chain pixel; ties go to the lowest index."""
        k = min(_TIE_CANDIDATES, len(self.chain))
        dist, idx = self._tree.query((row, col), k=k)
        dist, idx = np.atleast_1d(dist), np.atleast_1d(idx)
        tied = idx[dist <= dist[0] + 1e-9]
        return int(tied.min())

    def predict_one(self, state: "TracerState") -> float:
        p = self.nearest_index(state.cp.row, state.cp.col)
        target = self.chain.at(p + self.lookahead)
        origin = state.cp if self.recenter else self.chain.at(p)
        if tuple(origin) == tuple(target):
            origin = self.chain.at(p)
            if tuple(origin) == tuple(target):
                return 0.0
        direction = offset_to_angle(target.row - origin.row, target.col - origin.col)
        return wrap_angle(direction - state.heading)

    def predict(
        self, patches: Optional[np.ndarray], states: Sequence["TracerState"]
    ) -> np.ndarray:
        return np.array([self.predict_one(s) for s in states], dtype=np.float64)

    def mirrored(self, width: int) -> "OraclePredictor":
        return OraclePredictor(self.chain.mirrored(width), self.recenter, self.lookahead)


def oracle_predict(chain: "ContourChain", state: "TracerState", recenter: bool = False) -> float:
    """Label at the chain pixel nearest to `state.cp`, relative to the state's heading."""
    return OraclePredictor(chain, recenter=recenter).predict_one(state)
