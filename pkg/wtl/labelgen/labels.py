"""
Training labels from ground-truth chains: three-pixel look-ahead angles and
oriented patches captured where the tracer would stand.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from wtl.raster.geometry import PixelCoord, angle_to_offset, offset_to_angle, wrap_angle
from wtl.raster.stack import PATCH_SIZE, InputStack, extract_oriented_patch
from wtl.shared.errors import InvalidArgumentError, InvalidGroundTruthError
from wtl.shared.schemas import LabelConfig, LabelgenReport
from wtl.shared.utils import get_logger

from .chain import ContourChain, trace_gt_chain

logger = get_logger(__name__)

MIN_CHAIN_LENGTH = 7


@dataclass(frozen=True)
class LabelRecord:
    """One canonical patch and the direction change the tracer should make there."""

    patch: np.ndarray
    label: float
    image_id: int
    chain_index: int
    jittered: bool = False


def chain_direction(chain: ContourChain, i: int, lookahead: int = 3) -> float:
    """Direction from chain[i] to chain[i + lookahead]."""
    a, b = chain.at(i), chain.at(i + lookahead)
    return offset_to_angle(b.row - a.row, b.col - a.col)


def label_at(chain: ContourChain, i: int, lookahead: int = 3) -> tuple[PixelCoord, float, float]:
    """
    Position, entry heading and label for chain index i.

    Returns:
        (cp = chain[i + lookahead], alpha0, alpha_label)
    """
    alpha0 = chain_direction(chain, i, lookahead)
    alpha_next = chain_direction(chain, i + lookahead, lookahead)
    return chain.at(i + lookahead), alpha0, wrap_angle(alpha_next - alpha0)


def make_label(
    chain: ContourChain,
    stack: InputStack,
    i: int,
    image_id: int = 0,
    lookahead: int = 3,
    jitter: int = 0,
) -> LabelRecord:
    """
    Capture the record for chain index i.

    With jitter = +1 or -1 the patch is taken one pixel beside the contour,
    perpendicular to alpha0 (clockwise side for +1), clamped into the image;
    the label is unchanged.
    """
    if len(chain) < MIN_CHAIN_LENGTH:
        raise InvalidArgumentError(
            f"chain of {len(chain)} pixels is shorter than {MIN_CHAIN_LENGTH}"
        )
    cp, alpha0, alpha_label = label_at(chain, i, lookahead)
    if jitter:
        dr, dc = angle_to_offset(wrap_angle(alpha0 + 90.0 * jitter), 1)
        cp = PixelCoord(
            min(max(cp.row + dr, 0), stack.height - 1),
            min(max(cp.col + dc, 0), stack.width - 1),
        )
    return LabelRecord(
        patch=extract_oriented_patch(stack, cp, alpha0),
        label=alpha_label,
        image_id=image_id,
        chain_index=i % len(chain),
        jittered=bool(jitter),
    )


@dataclass
class DatasetSplit:
    """Disjoint train and validation records."""

    train: list[LabelRecord] = field(default_factory=list)
    validation: list[LabelRecord] = field(default_factory=list)
    seed: int = 0

    def __len__(self) -> int:
        return len(self.train) + len(self.validation)

    @staticmethod
    def _arrays(records: list[LabelRecord]) -> tuple[np.ndarray, np.ndarray]:
        if not records:
            return (
                np.zeros((0, PATCH_SIZE, PATCH_SIZE, 4), dtype=np.float32),
                np.zeros(0, dtype=np.float64),
            )
        patches = np.stack([r.patch for r in records]).astype(np.float32, copy=False)
        return patches, np.array([r.label for r in records], dtype=np.float64)

    def train_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Training patches (n, 13, 13, 4) and labels in degrees."""
        return self._arrays(self.train)

    def validation_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return self._arrays(self.validation)


def _scene_records(
    image_id: int, stack: InputStack, gt_contour: np.ndarray, cfg: LabelConfig
) -> list[LabelRecord]:
    chain = trace_gt_chain(gt_contour)
    if len(chain) < MIN_CHAIN_LENGTH:
        raise InvalidGroundTruthError(f"contour of {len(chain)} pixels is too short")

    rng = np.random.default_rng(np.random.SeedSequence([cfg.rng_seed, image_id]))
    n = cfg.labels_per_image
    indices = rng.choice(len(chain), size=n, replace=len(chain) < n)
    jittered = rng.random(n) < cfg.jitter_probability
    sides = rng.choice(np.array([-1, 1]), size=n)
    return [
        make_label(
            chain,
            stack,
            int(i),
            image_id=image_id,
            lookahead=cfg.lookahead,
            jitter=int(side) if jit else 0,
        )
        for i, jit, side in zip(indices, jittered, sides)
    ]


def generate_dataset(
    scenes: Sequence[tuple[InputStack, np.ndarray]], cfg: Optional[LabelConfig] = None
) -> tuple[DatasetSplit, LabelgenReport]:
    """
    Draw `labels_per_image` records per scene and split each scene train/validation.

    Scenes with an invalid ground truth are skipped and listed in the report.
    """
    cfg = cfg or LabelConfig()

    def build(item: tuple[int, tuple[InputStack, np.ndarray]]) -> Union[list[LabelRecord], str]:
        image_id, (stack, gt) = item
        try:
            return _scene_records(image_id, stack, gt, cfg)
        except InvalidGroundTruthError as e:
            return str(e)

    items = list(enumerate(scenes))
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            outcomes = list(pool.map(build, items))
    else:
        outcomes = [build(item) for item in items]

    # Split per scene.
    split = DatasetSplit(seed=cfg.rng_seed)
    failures: dict[str, str] = {}
    split_seeds = np.random.SeedSequence(cfg.rng_seed).spawn(len(outcomes))
    for image_id, outcome in enumerate(outcomes):
        if isinstance(outcome, str):
            failures[str(image_id)] = outcome
            logger.warning("ground_truth_rejected", image_id=image_id, reason=outcome)
            continue
        order = np.random.default_rng(split_seeds[image_id]).permutation(len(outcome))
        n_val = int(round(len(outcome) * cfg.validation_fraction))
        split.validation.extend(outcome[k] for k in order[:n_val])
        split.train.extend(outcome[k] for k in order[n_val:])

    report = LabelgenReport(
        scenes=len(scenes),
        records=len(split),
        train_records=len(split.train),
        validation_records=len(split.validation),
        failures=failures,
    )
    logger.info(
        "dataset_generated",
        scenes=report.scenes,
        records=report.records,
        failures=len(failures),
    )
    return split, report
