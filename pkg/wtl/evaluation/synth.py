"""
Synthetic ship-like scenes with ground truth and a simulated soft contour map.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np
from scipy import ndimage
from skimage.draw import polygon as fill_polygon

from wtl.labelgen.chain import trace_gt_chain
from wtl.raster import io as raster_io
from wtl.raster.topology import closure_violation
from wtl.shared.errors import EmptyResultError, FormatError, InputOutputError, WtlError
from wtl.shared.schemas import SceneParams
from wtl.shared.utils import get_logger

from .masks import contour_of_mask, fill_closed_contour

logger = get_logger(__name__)

MAX_ATTEMPTS = 32
SOFTMAP_PEAK = 0.9
GAP_PEAK = 0.3
GAP_LENGTH = (3, 8)
ANTENNA_WIDTH = 3
_BLUR = np.array([0.25, 0.5, 0.25])

SCENE_FILES = ("image.png", "contour.png", "mask.png", "softmap.png", "params.json")


@dataclass(frozen=True)
class SyntheticScene:
    """One generated scene. `waterline` is (row, first col, last col) of the flat bottom edge."""

    image: np.ndarray
    gt_contour: np.ndarray
    gt_mask: np.ndarray
    softmap: np.ndarray
    params: SceneParams
    seed: int
    attempt: int
    waterline: tuple[int, int, int]

    @property
    def shape(self) -> tuple[int, int]:
        return self.gt_mask.shape


def _ship_mask(params: SceneParams, rng: np.random.Generator) -> np.ndarray:
    height, width = params.height, params.width
    margin = max(6, width // 16)

    bottom = int(rng.integers(int(0.62 * height), int(0.75 * height)))
    x_l = int(rng.integers(margin, max(margin + 1, width // 5)))
    x_r = width - 1 - int(rng.integers(margin, max(margin + 1, width // 5)))
    hull_h = max(14, int(rng.integers(int(0.14 * height), int(0.2 * height) + 1)))
    deck = bottom - hull_h

    span = x_r - x_l
    bow = int(rng.integers(hull_h // 2, max(hull_h // 2 + 1, min(2 * hull_h, span // 4))))
    stern = int(rng.integers(hull_h // 4, max(hull_h // 4 + 1, min(hull_h, span // 6))))
    bow_mid = (bottom - hull_h // 2, x_l + int(bow * rng.uniform(0.25, 0.45)))

    rows = [bottom, bow_mid[0], deck, deck, bottom]
    cols = [x_l, bow_mid[1], x_l + bow, x_r - stern, x_r]
    mask = np.zeros((height, width), dtype=bool)
    rr, cc = fill_polygon(np.array(rows), np.array(cols), shape=mask.shape)
    mask[rr, cc] = True

    deck_lo, deck_hi = x_l + bow + 4, x_r - stern - 4
    tops: list[tuple[int, int, int]] = []
    if params.complexity and deck_hi - deck_lo > 8 * params.complexity:
        slot = (deck_hi - deck_lo) // params.complexity
        for k in range(params.complexity):
            lo = deck_lo + k * slot + 2
            bw = int(rng.integers(max(6, slot // 3), max(7, slot - 4)))
            bw = min(bw, slot - 4)
            c0 = int(rng.integers(lo, max(lo + 1, lo + slot - 4 - bw)))
            bh = int(rng.integers(max(4, hull_h // 2), max(5, int(1.2 * hull_h))))
            top = max(deck - bh, margin + 2)
            mask[top : deck + 1, c0 : c0 + bw] = True
            tops.append((top, c0, c0 + bw - 1))

    anchors = tops or [(deck, x_l + bow, x_r - stern)]
    for _ in range(params.antennas):
        top, c0, c1 = anchors[int(rng.integers(len(anchors)))]
        if c1 - c0 < ANTENNA_WIDTH + 4:
            continue
        a0 = int(rng.integers(c0 + 2, c1 - ANTENNA_WIDTH - 1))
        ah = int(rng.integers(max(3, hull_h // 3), max(4, hull_h)))
        a_top = max(top - ah, margin)
        mask[a_top : top + 1, a0 : a0 + ANTENNA_WIDTH] = True

    return mask


def _render_image(mask: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    height, width = mask.shape
    texture = ndimage.gaussian_filter(rng.normal(size=(height, width)), sigma=2.0)
    texture /= max(float(np.abs(texture).max()), 1e-12)
    sea = np.array([0.22, 0.33, 0.48])
    image = sea[None, None, :] + 0.08 * texture[:, :, None]

    rows = np.arange(height, dtype=np.float64)[:, None]
    top = np.nonzero(mask.any(axis=1))[0]
    span = max(float(top[-1] - top[0]), 1.0) if len(top) else 1.0
    shade = 0.75 - 0.4 * (rows - (top[0] if len(top) else 0)) / span
    hull = np.repeat(shade, width, axis=1)[:, :, None] * np.array([1.0, 0.97, 0.92])
    image = np.where(mask[:, :, None], hull + 0.03 * texture[:, :, None], image)
    return np.clip(image, 0.0, 1.0).astype(np.float32)


def _blur(values: np.ndarray) -> np.ndarray:
    out = ndimage.correlate1d(values, _BLUR, axis=0, mode="constant")
    return ndimage.correlate1d(out, _BLUR, axis=1, mode="constant")


def simulate_softmap(
    contour: np.ndarray, params: SceneParams, rng: np.random.Generator
) -> np.ndarray:
    """
    Dilated, blurred contour scaled to SOFTMAP_PEAK, `gap_count` weak segments
    attenuated to GAP_PEAK, plus uniform noise up to `noise_level`.
    """
    band = ndimage.binary_dilation(contour, structure=np.ones((3, 3), dtype=bool))
    soft = _blur(band.astype(np.float64)) * band
    soft *= SOFTMAP_PEAK / soft.max()

    if params.gap_count:
        chain = trace_gt_chain(contour)
        weak = np.zeros_like(contour)
        for _ in range(params.gap_count):
            start = int(rng.integers(len(chain)))
            length = int(rng.integers(GAP_LENGTH[0], GAP_LENGTH[1] + 1))
            for k in range(length):
                weak[chain.at(start + k)] = True
        weak = ndimage.binary_dilation(weak, structure=np.ones((3, 3), dtype=bool))
        soft = np.where(weak, soft * (GAP_PEAK / SOFTMAP_PEAK), soft)

    if params.noise_level > 0:
        soft = soft + rng.uniform(0.0, params.noise_level, size=soft.shape)
    return np.clip(soft, 0.0, 1.0).astype(np.float32)


def gen_scene(params: Optional[SceneParams] = None, seed: int = 0) -> SyntheticScene:
    """
    Deterministic scene for a seed.

    The ground-truth contour is the pruned inner boundary of the ship mask and
    the ground-truth mask is its fill. Candidates whose contour is not a simple
    closed curve are redrawn from the next sub-seed.
    """
    params = params or SceneParams()
    for attempt in range(MAX_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        ship = _ship_mask(params, rng)
        contour = contour_of_mask(ship)
        if closure_violation(contour) is not None:
            continue
        try:
            gt_mask = fill_closed_contour(contour)
        except WtlError:
            continue
        if not np.array_equal(contour_of_mask(gt_mask), contour):
            continue
        bottom = int(np.nonzero(gt_mask.any(axis=1))[0][-1])
        bottom_cols = np.nonzero(gt_mask[bottom])[0]
        waterline = (bottom, int(bottom_cols[0]), int(bottom_cols[-1]))

        scene = SyntheticScene(
            image=_render_image(gt_mask, rng),
            gt_contour=contour,
            gt_mask=gt_mask,
            softmap=simulate_softmap(contour, params, rng),
            params=params,
            seed=seed,
            attempt=attempt,
            waterline=waterline,
        )
        logger.debug("scene_generated", seed=seed, attempt=attempt, pixels=int(contour.sum()))
        return scene
    raise EmptyResultError(f"no valid scene for seed {seed} after {MAX_ATTEMPTS} attempts")


def save_scene(scene: SyntheticScene, directory: Union[str, Path]) -> Path:
    """Write image, contour, mask, softmap and params.json into a directory."""
    directory = Path(directory)
    raster_io.save_rgb(scene.image, directory / "image.png")
    raster_io.save_mask(scene.gt_contour, directory / "contour.png")
    raster_io.save_mask(scene.gt_mask, directory / "mask.png")
    raster_io.save_gray(scene.softmap, directory / "softmap.png")
    meta = {
        "seed": scene.seed,
        "attempt": scene.attempt,
        "waterline": list(scene.waterline),
        "params": scene.params.model_dump(),
    }
    try:
        (directory / "params.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as e:
        raise InputOutputError(f"cannot write scene params: {e}", path=str(directory)) from e
    return directory


def load_scene(directory: Union[str, Path]) -> SyntheticScene:
    """
    Read a scene directory back (soft map and image at 8-bit precision).

    Raises:
        InputOutputError: If a file is missing
        FormatError: If params.json is malformed
    """
    directory = Path(directory)
    meta_path = directory / "params.json"
    if not meta_path.is_file():
        raise InputOutputError(f"scene params not found: {meta_path}", path=str(meta_path))
    try:
        meta = json.loads(meta_path.read_text())
        params = SceneParams(**meta["params"])
    except (ValueError, KeyError, TypeError) as e:
        raise FormatError(f"malformed scene params {meta_path}: {e}") from e

    return SyntheticScene(
        image=raster_io.load_rgb(directory / "image.png"),
        gt_contour=raster_io.load_mask(directory / "contour.png"),
        gt_mask=raster_io.load_mask(directory / "mask.png"),
        softmap=raster_io.load_gray(directory / "softmap.png"),
        params=params,
        seed=int(meta.get("seed", 0)),
        attempt=int(meta.get("attempt", 0)),
        waterline=tuple(meta.get("waterline", (0, 0, 0))),  # type: ignore[arg-type]
    )
