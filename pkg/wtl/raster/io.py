"""
Raster file I/O (PNG, with PGM/PPM as fallbacks) and overlay rendering.
8-bit values map to [0, 1] by division by 255.
"""

from pathlib import Path
from typing import Iterable, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from wtl.shared.errors import FormatError, InputOutputError
from wtl.shared.utils import get_logger

from .geometry import PixelCoord

logger = get_logger(__name__)

PathLike = Union[str, Path]


def _open(path: PathLike) -> Image.Image:
    path = Path(path)
    if not path.is_file():
        raise InputOutputError(f"raster file not found: {path}", path=str(path))
    try:
        image = Image.open(path)
        image.load()
    except (UnidentifiedImageError, OSError) as e:
        raise FormatError(f"cannot decode raster {path}: {e}") from e
    return image


def load_rgb(path: PathLike) -> np.ndarray:
    """Load an 8-bit RGB image as float32 (h, w, 3) in [0, 1]."""
    image = _open(path).convert("RGB")
    return np.asarray(image, dtype=np.float32) / 255.0


def load_gray(path: PathLike) -> np.ndarray:
    """Load an 8-bit grayscale image as float32 (h, w) in [0, 1]."""
    image = _open(path).convert("L")
    return np.asarray(image, dtype=np.float32) / 255.0


def load_mask(path: PathLike) -> np.ndarray:
    """Load a binary mask; any nonzero pixel is foreground."""
    image = _open(path).convert("L")
    return np.asarray(image) > 0


def _save(image: Image.Image, path: PathLike) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        image.save(path)
    except OSError as e:
        raise InputOutputError(f"cannot write raster {path}: {e}", path=str(path)) from e
    logger.debug("raster_written", path=str(path), size=image.size)
    return path


def to_uint8(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(np.asarray(values, dtype=np.float64) * 255.0), 0, 255).astype(np.uint8)


def save_gray(values: np.ndarray, path: PathLike) -> Path:
    """Save a [0, 1] raster as 8-bit grayscale."""
    return _save(Image.fromarray(to_uint8(values)), path)


def save_rgb(values: np.ndarray, path: PathLike) -> Path:
    """Save a [0, 1] (h, w, 3) raster as 24-bit RGB."""
    return _save(Image.fromarray(to_uint8(values)), path)


def save_mask(mask: np.ndarray, path: PathLike) -> Path:
    """Save a boolean mask as 0/255 grayscale."""
    return _save(Image.fromarray(np.asarray(mask, dtype=np.uint8) * 255), path)


def render_overlay(
    image: np.ndarray,
    pixels: Union[np.ndarray, Iterable[PixelCoord]],
    color: tuple[int, int, int] = (255, 0, 0),
) -> np.ndarray:
    """
    Draw pixels in red over a contrast-reduced grayscale copy of the image.

    Args:
        image: (h, w, 3) RGB in [0, 1]
        pixels: Boolean mask or iterable of coordinates to highlight

    Returns:
        uint8 (h, w, 3) rendering
    """
    gray = np.asarray(image, dtype=np.float32).mean(axis=2)
    base = to_uint8(0.25 + 0.5 * gray)
    canvas = np.repeat(base[:, :, None], 3, axis=2)

    if isinstance(pixels, np.ndarray) and pixels.dtype == bool:
        canvas[pixels] = color
    else:
        h, w = gray.shape
        for p in pixels:
            if 0 <= p[0] < h and 0 <= p[1] < w:
                canvas[p[0], p[1]] = color
    return canvas


def save_overlay(
    image: np.ndarray,
    pixels: Union[np.ndarray, Iterable[PixelCoord]],
    path: PathLike,
) -> Path:
    return _save(Image.fromarray(render_overlay(image, pixels)), path)
