"""
Direction predictor interface and the CNN-backed implementation.
"""

from typing import TYPE_CHECKING, Optional, Protocol, Sequence, runtime_checkable

import numpy as np

from wtl.raster.geometry import wrap_angles
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import PredictorKind

from .cnn import Mode, cnn_forward
from .oracle import OraclePredictor
from .ridge import RidgePredictor
from .weights import WeightsBundle

if TYPE_CHECKING:
    from wtl.labelgen.chain import ContourChain
    from wtl.tracer.state import TracerState


@runtime_checkable
class DirectionPredictor(Protocol):
    """
    Maps a batch of canonical patches (and the tracer states they were cut
    for) to relative direction changes in degrees, wrapped to (-180, 180].
    """

    kind: PredictorKind
    needs_patches: bool

    def predict(
        self, patches: Optional[np.ndarray], states: Sequence["TracerState"]
    ) -> np.ndarray: ...

    def mirrored(self, width: int) -> "DirectionPredictor": ...


class CnnPredictor:
    """Trained CNN in inference mode."""

    kind = PredictorKind.CNN
    needs_patches = True

    def __init__(
        self,
        weights: WeightsBundle,
        label_scale: float = 180.0,
        max_batch: int = 512,
        bn_epsilon: float = 1e-5,
    ) -> None:
        weights.validate()
        self.weights = weights
        self.label_scale = label_scale
        self.max_batch = max_batch
        self.bn_epsilon = bn_epsilon

    def predict(
        self, patches: Optional[np.ndarray], states: Sequence["TracerState"]
    ) -> np.ndarray:
        if patches is None:
            raise InvalidArgumentError("CNN predictor needs patches")
        if len(patches) == 0:
            return np.zeros(0)
        outputs = [
            cnn_forward(
                patches[start : start + self.max_batch],
                self.weights,
                Mode.INFER,
                bn_epsilon=self.bn_epsilon,
            )
            for start in range(0, len(patches), self.max_batch)
        ]
        return wrap_angles(np.concatenate(outputs).astype(np.float64) * self.label_scale)

    def mirrored(self, width: int) -> "CnnPredictor":
        # Same weights on the mirrored stack.
        return self



def make_predictor(
    kind: PredictorKind,
    weights: Optional[WeightsBundle] = None,
    chain: Optional["ContourChain"] = None,
    label_scale: float = 180.0,
) -> DirectionPredictor:
    """
    Build a predictor of the requested kind.

    Raises:
        InvalidArgumentError: If cnn lacks weights or oracle lacks a chain
    """
    kind = PredictorKind(kind)
    if kind is PredictorKind.CNN:
        if weights is None:
            raise InvalidArgumentError("predictor 'cnn' requires weights")
        return CnnPredictor(weights, label_scale=label_scale)
    if kind is PredictorKind.ORACLE:
        if chain is None:
            raise InvalidArgumentError("predictor 'oracle' requires a ground-truth contour")
        return OraclePredictor(chain)
    return RidgePredictor()
