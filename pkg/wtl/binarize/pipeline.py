"""
End-to-end binarization of an accumulation map into a closed contour.
"""

from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

import numpy as np

from wtl.raster.stack import as_unit_raster
from wtl.raster.topology import label_components, neighbor_counts
from wtl.shared.errors import NotClosedError, StageError, WtlError
from wtl.shared.schemas import BinarizeConfig, BinarizeReport, ContourDiagnosis
from wtl.shared.utils import get_logger

from .cut import CutInfo, make_cut, restore
from .hough import LineSegment, hough_longest_line
from .threshold import find_closing_threshold
from .thinning import clean, peel_endpoints, thin

logger = get_logger(__name__)

T = TypeVar("T")


@dataclass
class BinarizeResult:
    """The closed contour, the threshold it was built from and the run details."""

    contour: np.ndarray
    threshold: float
    line: LineSegment
    cut: CutInfo
    report: BinarizeReport


def _stage(name: str, fn: Callable[[], T]) -> T:
    try:
        return fn()
    except StageError:
        raise
    except WtlError as e:
        raise StageError(name, e) from e


def binarize_pipeline(wtl: np.ndarray, cfg: Optional[BinarizeConfig] = None) -> BinarizeResult:
    """
    Longest line, cut, closing threshold, restore, threshold, thin, clean.

    When cleaning does not close, up to `closure_retries` lower thresholds
    (th - k * delta_th) are tried.

    Raises:
        StageError: Wrapping the failing stage's error (same exit code)
    """
    cfg = cfg or BinarizeConfig()
    wtl = _stage("input", lambda: as_unit_raster(wtl, "WtL contour"))
    log = logger.bind(component="binarize")

    line = _stage("hough", lambda: hough_longest_line(wtl, cfg))
    open_wtl, cut = _stage("cut", lambda: make_cut(wtl, line, cfg))
    closing, iterations = _stage(
        "threshold", lambda: find_closing_threshold(open_wtl, cut.pixel1, cut.pixel2, cfg)
    )
    closed_wtl = restore(open_wtl, cut)

    last_error: Optional[NotClosedError] = None
    for retry in range(cfg.closure_retries + 1):
        threshold = closing - retry * cfg.delta_th
        if threshold <= 0.0:
            break
        try:
            contour = clean(thin(closed_wtl >= threshold), cfg)
        except NotClosedError as e:
            last_error = e
            log.debug("closure_retry", retry=retry, threshold=threshold, reason=str(e))
            continue

        report = BinarizeReport(
            line=line.to_report(),
            cut_col=cut.cut_col,
            pixel1=(cut.pixel1.row, cut.pixel1.col),
            pixel2=(cut.pixel2.row, cut.pixel2.col),
            closing_threshold=closing,
            threshold=threshold,
            iterations=iterations,
            retries=retry,
            contour_pixels=int(contour.sum()),
        )
        log.info(
            "binarize_complete",
            threshold=threshold,
            retries=retry,
            contour_pixels=report.contour_pixels,
        )
        return BinarizeResult(contour, threshold, line, cut, report)

    error = last_error or NotClosedError(f"no positive threshold below {closing} closes")
    raise StageError("clean", error) from error


def count_cycles(mask: np.ndarray) -> int:
    """Independent cycles of the 8-neighbour graph (edges - pixels + components)."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        return 0
    padded = np.pad(mask, 1)
    core = padded[1:-1, 1:-1]
    edges = 0
    # Each undirected edge counted once: east, south-east, south, south-west.
    for dr, dc in ((0, 1), (1, 1), (1, 0), (1, -1)):
        shifted = padded[1 + dr : padded.shape[0] - 1 + dr, 1 + dc : padded.shape[1] - 1 + dc]
        edges += int(np.sum(core & shifted))
    _, components = label_components(mask)
    return edges - int(mask.sum()) + components


def diagnose_result(result: BinarizeResult, cfg: BinarizeConfig) -> ContourDiagnosis:
    """open_lines when closure needed a threshold below `open_line_threshold`, else closed."""
    if result.report.closing_threshold < cfg.open_line_threshold:
        return ContourDiagnosis.OPEN_LINES
    return ContourDiagnosis.CLOSED


def diagnose_failure(wtl: np.ndarray, error: StageError, cfg: BinarizeConfig) -> ContourDiagnosis:
    """
    doubled_lines when cleaning failed with more than one loop (or a branch)
    left after spur peeling at the closing threshold; not_closed otherwise.
    """
    if error.stage != "clean":
        return ContourDiagnosis.NOT_CLOSED
    line = hough_longest_line(wtl, cfg)
    open_wtl, cut = make_cut(wtl, line, cfg)
    closing, _ = find_closing_threshold(open_wtl, cut.pixel1, cut.pixel2, cfg)
    peeled, _ = peel_endpoints(thin(restore(open_wtl, cut) >= closing), cfg.spur_prune_cap)
    if count_cycles(peeled) > 1 or np.any(neighbor_counts(peeled)[peeled] > 2):
        return ContourDiagnosis.DOUBLED_LINES
    return ContourDiagnosis.NOT_CLOSED


def diagnose_contour(
    wtl: np.ndarray, cfg: Optional[BinarizeConfig] = None
) -> tuple[ContourDiagnosis, Optional[BinarizeResult]]:
    """
    Classify a binarization outcome.

    closed: a closed contour at a reasonable threshold.
    open_lines: closure only below `open_line_threshold`.
    doubled_lines: more than one independent loop survives spur peeling.
    not_closed: anything else.
    """
    cfg = cfg or BinarizeConfig()
    try:
        result = binarize_pipeline(wtl, cfg)
    except StageError as e:
        return diagnose_failure(wtl, e, cfg), None
    return diagnose_result(result, cfg), result
