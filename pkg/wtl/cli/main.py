"""
Command-line entry point: one subcommand per pipeline stage plus `pipeline`.

Exit codes:
    0  success
    1  unexpected failure
    2  invalid arguments or configuration
    3  file could not be read or written
    4  file format error
    5  closing threshold not found
    6  no straight line in the contour map
    7  invalid ground-truth contour
    8  stage failure (cut, closure, fill, empty result, numeric)
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError
from rich.console import Console
from rich.markup import escape

from wtl import __version__
from wtl.labelgen import trace_gt_chain
from wtl.orchestrator import ContourWorkflow
from wtl.predictor import DirectionPredictor, load_weights, make_predictor
from wtl.raster import InputStack, PixelCoord, stack_inputs
from wtl.raster import io as raster_io
from wtl.shared.errors import InvalidArgumentError, WtlError
from wtl.shared.schemas import PredictorKind
from wtl.shared.utils import Settings, get_logger, load_settings, setup_logging

logger = get_logger(__name__)

stdout = Console()
stderr = Console(stderr=True)


# Input helpers


def _load_stack(args: argparse.Namespace) -> InputStack:
    return stack_inputs(raster_io.load_rgb(args.image), raster_io.load_gray(args.softmap))


def _build_predictor(args: argparse.Namespace, settings: Settings) -> DirectionPredictor:
    weights = load_weights(args.weights) if args.weights else None
    chain = trace_gt_chain(raster_io.load_mask(args.gt_contour)) if args.gt_contour else None
    return make_predictor(
        settings.predictor, weights=weights, chain=chain, label_scale=settings.label_scale
    )


def _check_predictor_args(args: argparse.Namespace, settings: Settings) -> None:
    if settings.predictor is PredictorKind.CNN and not args.weights:
        raise InvalidArgumentError("--predictor cnn requires --weights")
    if settings.predictor is PredictorKind.ORACLE and not args.gt_contour:
        raise InvalidArgumentError("--predictor oracle requires --gt-contour")


# Commands


def cmd_synth(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    scenes = workflow.synth(args.count)
    stdout.print(f"generated {len(scenes)} scene(s) in {workflow.out_dir}")


def cmd_gen_labels(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    split = workflow.gen_labels(args.scenes)
    stdout.print(
        f"wrote {len(split)} labels ({len(split.train)} train, "
        f"{len(split.validation)} validation) to {workflow.out_dir / 'dataset.wtld'}"
    )


def cmd_train(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    initial = load_weights(args.weights) if args.weights else None
    result = workflow.train(args.dataset, initial=initial)
    stdout.print(
        f"trained {len(result.curve.epochs)} epoch(s), best epoch {result.curve.best_epoch}"
    )


def cmd_trace(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    stack = _load_stack(args)
    predictor = _build_predictor(args, workflow.settings)
    path = workflow.trace(stack, predictor, PixelCoord(*args.start), args.angle, args.steps)
    stdout.print(f"path of {len(path)} pixels ({path.exit_reason.value})")


def cmd_complete(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    stack = _load_stack(args)
    predictor = _build_predictor(args, workflow.settings)
    result = workflow.complete(stack, predictor)
    stdout.print(f"{result.report.n0} tracers, max count {result.report.max_count}")


def cmd_binarize(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    wtl = raster_io.load_gray(args.wtl)
    image = raster_io.load_rgb(args.image) if args.image else None
    result = workflow.binarize(wtl, image=image)
    stdout.print(
        f"closed contour of {result.report.contour_pixels} pixels at th={result.threshold:.4f}"
    )


def cmd_eval(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    mask = raster_io.load_mask(args.mask)
    gt = raster_io.load_mask(args.gt_mask)
    table = workflow.evaluate([(args.image_id, mask, gt)])
    stdout.print(table.text, end="", markup=False, highlight=False)


def cmd_pipeline(args: argparse.Namespace, workflow: ContourWorkflow) -> None:
    stack = _load_stack(args)
    predictor = _build_predictor(args, workflow.settings)
    gt = raster_io.load_mask(args.gt_mask) if args.gt_mask else None
    result = workflow.pipeline(stack, predictor, gt_mask=gt, image_id=args.image_id)
    if result.metrics is not None:
        p, r, iou = result.metrics.as_percent()
        stdout.print(f"P={p:.2f} R={r:.2f} IoU={iou:.2f}")
    else:
        stdout.print(f"mask of {int(result.mask.sum())} pixels written to {workflow.out_dir}")


# Parser


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="KEY=value configuration file")
    common.add_argument("--seed", type=int, help="Global RNG seed")
    common.add_argument("--out", type=Path, default=Path("."), help="Output directory")
    common.add_argument("--threads", type=int, help="Worker cap for parallel sections")
    return common


def _predictor_parser() -> argparse.ArgumentParser:
    pred = argparse.ArgumentParser(add_help=False)
    pred.add_argument(
        "--predictor", choices=[k.value for k in PredictorKind], help="Direction predictor"
    )
    pred.add_argument("--weights", type=Path, help="CNN weights file")
    pred.add_argument("--gt-contour", type=Path, help="Ground-truth contour for the oracle")
    return pred


def _inputs_parser() -> argparse.ArgumentParser:
    inputs = argparse.ArgumentParser(add_help=False)
    inputs.add_argument("--image", type=Path, required=True, help="RGB image")
    inputs.add_argument("--softmap", type=Path, required=True, help="Soft contour map")
    return inputs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wtl", description="Contour completion with a swarm of learned tracers."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common, pred, inputs = _common_parser(), _predictor_parser(), _inputs_parser()

    p = sub.add_parser("synth", parents=[common], help="Generate synthetic scenes")
    p.add_argument("--count", type=int, default=1, help="Number of scenes")
    p.add_argument("--noise-level", type=float, help="Soft-map noise bound")
    p.add_argument("--gap-count", type=int, help="Weak soft-map segments")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("gen-labels", parents=[common], help="Draw training labels from scenes")
    p.add_argument("--scenes", type=Path, nargs="+", required=True, help="Scene directories")
    p.add_argument("--labels-per-image", type=int, help="Labels per scene")
    p.set_defaults(handler=cmd_gen_labels)

    p = sub.add_parser("train", parents=[common], help="Train the direction CNN")
    p.add_argument("--dataset", type=Path, required=True, help="Dataset file")
    p.add_argument("--weights", type=Path, help="Initial weights")
    p.add_argument("--epochs", type=int, help="Training epochs")
    p.add_argument("--width-divisor", type=int, help="Architecture channel divisor")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("trace", parents=[common, pred, inputs], help="Walk a single tracer")
    p.add_argument("--start", type=int, nargs=2, metavar=("ROW", "COL"), required=True)
    p.add_argument("--angle", type=float, default=0.0, help="Start heading in degrees")
    p.add_argument("--steps", type=int, default=100, help="Iterations")
    p.set_defaults(handler=cmd_trace)

    p = sub.add_parser("complete", parents=[common, pred, inputs], help="Run contour completion")
    p.set_defaults(handler=cmd_complete)

    p = sub.add_parser("binarize", parents=[common], help="Binarize a WtL contour map")
    p.add_argument("--wtl", type=Path, required=True, help="WtL contour PNG")
    p.add_argument("--image", type=Path, help="RGB image for the overlay")
    p.set_defaults(handler=cmd_binarize)

    p = sub.add_parser("eval", parents=[common], help="Score a mask against ground truth")
    p.add_argument("--mask", type=Path, required=True, help="Predicted mask")
    p.add_argument("--gt-mask", type=Path, required=True, help="Ground-truth mask")
    p.add_argument("--image-id", default="0", help="Image identifier in the table")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser(
        "pipeline", parents=[common, pred, inputs], help="complete -> binarize -> eval"
    )
    p.add_argument("--gt-mask", type=Path, help="Ground-truth mask to evaluate against")
    p.add_argument("--image-id", default="0", help="Image identifier in the table")
    p.set_defaults(handler=cmd_pipeline)

    return parser


def resolve_settings(args: argparse.Namespace) -> Settings:
    """
    Merge defaults, config file, environment and flags, and validate every stage config.

    Raises:
        InvalidArgumentError: On invalid values or missing predictor inputs
        InputOutputError: If the config file is missing
    """
    flags: dict[str, Any] = {
        "seed": args.seed,
        "threads": args.threads,
        "predictor": getattr(args, "predictor", None),
        "noise_level": getattr(args, "noise_level", None),
        "gap_count": getattr(args, "gap_count", None),
        "labels_per_image": getattr(args, "labels_per_image", None),
        "epochs": getattr(args, "epochs", None),
        "width_divisor": getattr(args, "width_divisor", None),
    }
    try:
        settings = load_settings(args.config, **flags)
        settings.completion_config()
        settings.binarize_config()
        settings.train_config()
        settings.label_config()
        settings.scene_params()
    except ValidationError as e:
        raise InvalidArgumentError(f"invalid configuration: {e}") from e

    if hasattr(args, "gt_contour"):
        _check_predictor_args(args, settings)
    return settings


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else InvalidArgumentError.exit_code

    try:
        settings = resolve_settings(args)
    except WtlError as e:
        stderr.print(f"[red]error:[/red] {escape(str(e))}", soft_wrap=True)
        return e.exit_code

    setup_logging(log_level=settings.log, json_logs=settings.log_json)
    workflow: Optional[ContourWorkflow] = None
    try:
        workflow = ContourWorkflow(settings, args.out, args.command)
        args.handler(args, workflow)
        return 0
    except WtlError as e:
        logger.error("command_failed", command=args.command, error=str(e), exit_code=e.exit_code)
        stderr.print(f"[red]error:[/red] {escape(str(e))}", soft_wrap=True)
        return e.exit_code
    except Exception as e:
        logger.exception("command_crashed", command=args.command, error=str(e))
        stderr.print(f"[red]unexpected error:[/red] {escape(str(e))}", soft_wrap=True)
        return 1
    finally:
        if workflow is not None:
            try:
                workflow.finalize()
            except WtlError as e:
                logger.error("report_write_failed", error=str(e))


if __name__ == "__main__":
    sys.exit(main())
