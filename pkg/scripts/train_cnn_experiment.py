"""
CNN training experiment on synthetic scenes.

Trains on `train_scenes` scenes x `labels_per_image` labels (90/10 split), then
compares single-tracer tracking of the trained CNN with the oracle on held-out
scenes.

Gates:
    loss: best validation MSE < 0.3 x the first epoch's
    tracking: CNN mean on-chain distance <= 2 x the oracle's

Usage:
    WTL_EPOCHS=30 python scripts/train_cnn_experiment.py [out_dir]
"""

import sys
from pathlib import Path
from typing import Callable

import numpy as np
from rich.console import Console
from rich.table import Table

from wtl.evaluation import chain_tracking, gen_scene
from wtl.labelgen import ContourChain, trace_gt_chain
from wtl.orchestrator import ContourWorkflow
from wtl.predictor import CnnPredictor, DirectionPredictor, OraclePredictor
from wtl.raster import offset_to_angle, stack_inputs
from wtl.shared.utils import get_logger, get_settings, setup_logging
from wtl.tracer import FixedStep, TracerState, walk

setup_logging(log_level="INFO", json_logs=False)
logger = get_logger(__name__)

TRAIN_SCENES = 10
HELD_OUT_SCENES = 5
LOSS_RATIO_MAX = 0.3
DISTANCE_RATIO_MAX = 2.0


def mean_tracking_distance(
    predictor_for: Callable[[ContourChain], DirectionPredictor], seeds: range
) -> float:
    """Mean Chebyshev distance of a one-loop single-tracer walk, averaged over scenes."""
    settings = get_settings()
    distances = []
    for seed in seeds:
        scene = gen_scene(settings.scene_params(), seed)
        chain = trace_gt_chain(scene.gt_contour)
        start, ahead = chain.at(0), chain.at(3)
        path = walk(
            stack_inputs(scene.image, scene.softmap),
            TracerState(start, offset_to_angle(ahead.row - start.row, ahead.col - start.col)),
            steps=len(chain),
            predictor=predictor_for(chain),
            policy=FixedStep(1),
        )
        distances.append(chain_tracking(path, chain).mean_distance)
    return float(np.mean(distances))


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("training_results")
    settings = get_settings()
    console = Console()

    workflow = ContourWorkflow(settings, out_dir, command="train-experiment")
    try:
        workflow.synth(TRAIN_SCENES)
        scene_dirs = [out_dir / f"scene_{settings.seed + k:04d}" for k in range(TRAIN_SCENES)]
        split = workflow.gen_labels(scene_dirs)
        result = workflow.train(split)
    finally:
        workflow.finalize()

    curve = result.curve.epochs
    loss_ratio = min(e.val_loss for e in curve) / curve[0].val_loss

    held_out = range(settings.seed + TRAIN_SCENES, settings.seed + TRAIN_SCENES + HELD_OUT_SCENES)
    cnn = CnnPredictor(result.weights, label_scale=settings.label_scale)
    cnn_distance = mean_tracking_distance(lambda chain: cnn, held_out)
    oracle_distance = mean_tracking_distance(OraclePredictor, held_out)
    # Floored at one pixel; the oracle distance is often zero.
    distance_ratio = cnn_distance / max(oracle_distance, 1.0)

    table = Table(title="CNN training experiment")
    table.add_column("gate")
    table.add_column("actual", justify="right")
    table.add_column("threshold", justify="right")
    gates = {
        "val loss ratio": (loss_ratio, LOSS_RATIO_MAX),
        "tracking distance ratio": (distance_ratio, DISTANCE_RATIO_MAX),
    }
    for name, (actual, threshold) in gates.items():
        table.add_row(name, f"{actual:.3f}", f"<= {threshold:.2f}")
    console.print(table)

    logger.info(
        "experiment_finished",
        loss_ratio=loss_ratio,
        cnn_distance=cnn_distance,
        oracle_distance=oracle_distance,
    )
    return 0 if loss_ratio < LOSS_RATIO_MAX and distance_ratio <= DISTANCE_RATIO_MAX else 1


if __name__ == "__main__":
    sys.exit(main())
