"""
Mini-batch SGD with momentum for the direction CNN.
"""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional

import numpy as np

from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import EpochLoss, LossCurve, TrainConfig
from wtl.shared.utils import get_logger

from .architecture import CnnArchitecture
from .cnn import Mode, cnn_backward, cnn_forward
from .weights import WeightsBundle, init_weights

if TYPE_CHECKING:
    from wtl.labelgen.labels import DatasetSplit

logger = get_logger(__name__)

VALIDATION_CHUNK = 512


@dataclass
class TrainResult:
    """Weights of the best validation epoch and the full loss curve."""

    weights: WeightsBundle
    curve: LossCurve


def sgd_step(
    weights: WeightsBundle,
    gradients: WeightsBundle,
    velocity: WeightsBundle,
    cfg: TrainConfig,
) -> tuple[WeightsBundle, WeightsBundle]:
    """
    One momentum update, in place:
        v <- momentum * v - lr * g
        w <- w + v
    BatchNorm running statistics are left untouched.
    """
    for name in weights.parameter_names():
        v = velocity.tensors[name]
        v *= cfg.momentum
        v -= cfg.learning_rate * gradients.tensors[name]
        weights.tensors[name] += v
    return weights, velocity


def batch_slices(count: int, batch_size: int) -> list[slice]:
    """Consecutive batches; a trailing batch of one sample joins its predecessor."""
    bounds = list(range(0, count, batch_size)) + [count]
    slices = [slice(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
    if len(slices) > 1 and slices[-1].stop - slices[-1].start == 1:
        slices[-2:] = [slice(slices[-2].start, count)]
    return slices


def evaluate_loss(
    patches: np.ndarray, targets: np.ndarray, weights: WeightsBundle, cfg: TrainConfig
) -> float:
    """Infer-mode MSE in scaled units."""
    total = 0.0
    for start in range(0, len(patches), VALIDATION_CHUNK):
        chunk = slice(start, start + VALIDATION_CHUNK)
        out = cnn_forward(patches[chunk], weights, Mode.INFER, cfg.bn_momentum, cfg.bn_epsilon)
        total += float(np.sum((out - targets[chunk]) ** 2))
    return total / len(patches)


def train(
    dataset: "DatasetSplit",
    cfg: Optional[TrainConfig] = None,
    initial: Optional[WeightsBundle] = None,
    on_epoch: Optional[Callable[[EpochLoss], None]] = None,
) -> TrainResult:
    """
    Train the CNN on a pre-split dataset.

    Args:
        dataset: Train/validation records (labels in degrees)
        cfg: Hyperparameters; labels are divided by cfg.label_scale
        initial: Starting weights (default: He init from cfg.rng_seed)
        on_epoch: Callback receiving each epoch's losses

    Returns:
        TrainResult with the lowest-validation-loss weights

    Raises:
        InvalidArgumentError: If the training split is empty
        NumericFailureError: If the loss or an activation becomes non-finite
    """
    cfg = cfg or TrainConfig()
    train_patches, train_labels = dataset.train_arrays()
    val_patches, val_labels = dataset.validation_arrays()
    if len(train_patches) == 0:
        raise InvalidArgumentError("cannot train on an empty dataset")
    if len(train_patches) < 2:
        raise InvalidArgumentError("training needs at least 2 records for batch statistics")

    train_targets = (train_labels / cfg.label_scale).astype(np.float32)
    if len(val_patches) == 0:
        logger.warning("empty_validation_split", fallback="train")
        val_patches, val_targets = train_patches, train_targets
    else:
        val_targets = (val_labels / cfg.label_scale).astype(np.float32)

    weights = (
        initial.copy()
        if initial is not None
        else init_weights(CnnArchitecture(width_divisor=cfg.width_divisor), cfg.rng_seed)
    )
    velocity = weights.zeros_like()
    shuffle_rng = np.random.default_rng([cfg.rng_seed, 1])

    curve = LossCurve()
    best: Optional[tuple[float, WeightsBundle]] = None
    log = logger.bind(component="training", records=len(train_patches))
    log.info("training_started", epochs=cfg.epochs, batch_size=cfg.batch_size)

    for epoch in range(1, cfg.epochs + 1):
        order = shuffle_rng.permutation(len(train_patches))
        weighted = 0.0
        for batch in batch_slices(len(order), cfg.batch_size):
            idx = order[batch]
            loss, gradients = cnn_backward(
                train_patches[idx], train_targets[idx], weights, cfg.bn_momentum, cfg.bn_epsilon
            )
            sgd_step(weights, gradients, velocity, cfg)
            weighted += loss * len(idx)

        row = EpochLoss(
            epoch=epoch,
            train_loss=weighted / len(order),
            val_loss=evaluate_loss(val_patches, val_targets, weights, cfg),
        )
        curve.epochs.append(row)
        if best is None or row.val_loss < best[0]:
            best = (row.val_loss, weights.copy())
        log.info("epoch_complete", epoch=epoch, train_loss=row.train_loss, val_loss=row.val_loss)
        if on_epoch is not None:
            on_epoch(row)

    assert best is not None
    log.info("training_complete", best_epoch=curve.best_epoch, best_val_loss=best[0])
    return TrainResult(weights=best[1], curve=curve)


def finite_difference_check(
    patches: np.ndarray,
    targets: np.ndarray,
    weights: WeightsBundle,
    samples_per_tensor: int = 20,
    eps: float = 1e-6,
    seed: int = 0,
    rtol: float = 1e-4,
    atol: float = 1e-8,
) -> dict[str, float]:
    """
    Compare analytic gradients with central differences on random parameters.

    Running statistics are frozen during the check so each loss evaluation
    sees the same network. Use float64 weights.

    Returns:
        Worst violation ratio |a - n| / (rtol * max(|a|, |n|) + atol) per tensor;
        values <= 1 pass.
    """
    trial = weights.copy()
    _, analytic = cnn_backward(patches, targets, trial, update_running=False)
    rng = np.random.default_rng(seed)

    def loss_at() -> float:
        loss, _ = cnn_backward(patches, targets, trial, update_running=False)
        return loss

    worst: dict[str, float] = {}
    for name in trial.parameter_names():
        tensor = trial.tensors[name]
        flat = tensor.reshape(-1)
        picks = rng.choice(flat.size, size=min(samples_per_tensor, flat.size), replace=False)
        ratio = 0.0
        for k in picks:
            saved = flat[k]
            flat[k] = saved + eps
            plus = loss_at()
            flat[k] = saved - eps
            minus = loss_at()
            flat[k] = saved
            numeric = (plus - minus) / (2.0 * eps)
            a = float(analytic.tensors[name].reshape(-1)[k])
            ratio = max(ratio, abs(a - numeric) / (rtol * max(abs(a), abs(numeric)) + atol))
        worst[name] = ratio
    return worst
