"""
Direction predictors: the from-scratch regression CNN, its training,
the ground-truth oracle and the structure-tensor ridge baseline.
"""

from .architecture import CnnArchitecture
from .base import CnnPredictor, DirectionPredictor, make_predictor
from .cnn import Mode, cnn_backward, cnn_forward
from .oracle import OraclePredictor, oracle_predict
from .ridge import RidgePredictor, ridge_predict
from .training import TrainResult, finite_difference_check, sgd_step, train
from .weights import WeightsBundle, init_weights, load_weights, save_weights

__all__ = [
    "CnnArchitecture",
    "CnnPredictor",
    "DirectionPredictor",
    "Mode",
    "OraclePredictor",
    "RidgePredictor",
    "TrainResult",
    "WeightsBundle",
    "cnn_backward",
    "cnn_forward",
    "finite_difference_check",
    "init_weights",
    "load_weights",
    "make_predictor",
    "oracle_predict",
    "ridge_predict",
    "save_weights",
    "sgd_step",
    "train",
]
