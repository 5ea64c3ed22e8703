"""
Stage runner shared by the CLI and the experiment scripts.

Each stage runs one library operation, writes its artifacts into the output
directory and appends a StageEvent to the run report. Failures are recorded
and re-raised as StageError carrying the stage name.
"""

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TypeVar, Union

import numpy as np

from wtl.binarize import BinarizeResult, binarize_pipeline, diagnose_failure, diagnose_result
from wtl.completion import CompletionResult, run_completion
from wtl.evaluation import (
    MetricTable,
    SyntheticScene,
    fill_closed_contour,
    gen_scene,
    load_scene,
    metrics,
    report_table,
    save_scene,
)
from wtl.labelgen import DatasetSplit, generate_dataset, load_dataset, save_dataset
from wtl.predictor import DirectionPredictor, TrainResult, WeightsBundle, save_weights, train
from wtl.raster import InputStack, PixelCoord, stack_inputs
from wtl.raster import io as raster_io
from wtl.shared.errors import InputOutputError, StageError, WtlError
from wtl.shared.schemas import MetricReport, RunReport, StageEvent, StageName
from wtl.shared.utils import Settings, digest_artifacts, get_logger
from wtl.tracer import PathTrace, RandomStep, TracerState, path_to_csv, walk

logger = get_logger(__name__)

T = TypeVar("T")

RUN_CONFIG_FILE = "run_config.env"
REPORT_FILE = "report.json"
TIMINGS_FILE = "timings.json"


@dataclass
class PipelineResult:
    """Outputs of the end-to-end complete -> binarize -> eval chain."""

    completion: CompletionResult
    binarization: BinarizeResult
    mask: np.ndarray
    metrics: Optional[MetricReport] = None


class ContourWorkflow:
    """
    Runs pipeline stages in sequence against one output directory.

    Stages are sequential; parallelism inside a stage is capped by
    `settings.threads`.
    """

    def __init__(self, settings: Settings, out_dir: Union[str, Path], command: str):
        """
        Initialize the workflow.

        Args:
            settings: Fully resolved run configuration
            out_dir: Directory receiving all artifacts
            command: Command name recorded in the run report
        """
        self.settings = settings
        self.out_dir = Path(out_dir)
        self.report = RunReport(command=command, seed=settings.seed)
        self.timings: dict[str, float] = {}
        self._artifacts: list[Path] = []
        self.logger = logger.bind(component="workflow", command=command)

        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise InputOutputError(
                f"cannot create output directory {self.out_dir}: {e}", path=str(self.out_dir)
            ) from e

    # Bookkeeping

    def _run_stage(self, stage: StageName, fn: Callable[[], tuple[T, dict[str, Any]]]) -> T:
        self.logger.info("workflow_step", stage=stage.value)
        started = time.perf_counter()
        try:
            value, details = fn()
        except WtlError as e:
            self.timings[stage.value] = time.perf_counter() - started
            self.report.add_event(
                StageEvent(
                    stage=stage, success=False, error_message=str(e), exit_code=e.exit_code
                )
            )
            self.logger.error(
                f"{stage.value.replace('-', '_')}_error", error=str(e), exit_code=e.exit_code
            )
            raise StageError(stage.value, e) from e

        self.timings[stage.value] = time.perf_counter() - started
        self.report.add_event(StageEvent(stage=stage, details=details))
        return value

    def _track(self, *paths: Path) -> None:
        self._artifacts.extend(paths)

    def _write_text(self, name: str, text: str) -> Path:
        path = self.out_dir / name
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as e:
            raise InputOutputError(f"cannot write {path}: {e}", path=str(path)) from e
        self._track(path)
        return path

    def finalize(self) -> RunReport:
        """
        Write run_config.env, report.json (with artifact digests) and timings.json.

        Safe to call after a failed stage; the report then lists the failure.
        """
        self._write_text(RUN_CONFIG_FILE, self.settings.to_env_text())
        existing = [p for p in dict.fromkeys(self._artifacts) if p.is_file()]
        self.report.artifacts = digest_artifacts(existing, root=self.out_dir)
        report_path = self.out_dir / REPORT_FILE
        timings_path = self.out_dir / TIMINGS_FILE
        try:
            report_path.write_text(self.report.to_json(), encoding="utf-8")
            timings_path.write_text(
                json.dumps({k: round(v, 6) for k, v in self.timings.items()}, indent=2) + "\n",
                encoding="utf-8",
            )
        except OSError as e:
            raise InputOutputError(f"cannot write run report: {e}", path=str(report_path)) from e

        self.logger.info(
            "workflow_finished",
            events=self.report.total_events,
            errors=self.report.error_count,
            artifacts=len(self.report.artifacts),
        )
        return self.report

    # Stages

    def synth(self, count: int = 1) -> list[SyntheticScene]:
        """Generate `count` scenes with seeds seed, seed+1, ... into scene_<seed> directories."""

        def run() -> tuple[list[SyntheticScene], dict[str, Any]]:
            params = self.settings.scene_params()
            scenes = []
            for offset in range(count):
                seed = self.settings.seed + offset
                scene = gen_scene(params, seed)
                directory = save_scene(scene, self.out_dir / f"scene_{seed:04d}")
                self._track(*(p for p in sorted(directory.iterdir()) if p.is_file()))
                scenes.append(scene)
            return scenes, {
                "scenes": len(scenes),
                "seeds": [s.seed for s in scenes],
                "attempts": [s.attempt for s in scenes],
                "params": params.model_dump(),
            }

        return self._run_stage(StageName.SYNTH, run)

    def gen_labels(self, scene_dirs: Sequence[Union[str, Path]]) -> DatasetSplit:
        """Draw labels from scene directories into dataset.wtld."""

        def run() -> tuple[DatasetSplit, dict[str, Any]]:
            loaded = [load_scene(d) for d in scene_dirs]
            pairs = [(stack_inputs(s.image, s.softmap), s.gt_contour) for s in loaded]
            split, report = generate_dataset(pairs, self.settings.label_config())
            self._track(save_dataset(split, self.out_dir / "dataset.wtld"))
            return split, report.model_dump(mode="json")

        return self._run_stage(StageName.GEN_LABELS, run)

    def train(
        self,
        dataset: Union[str, Path, DatasetSplit],
        initial: Optional[WeightsBundle] = None,
    ) -> TrainResult:
        """Train the CNN; writes weights.wtlw and loss_curve.csv."""

        def run() -> tuple[TrainResult, dict[str, Any]]:
            split = (
                dataset
                if isinstance(dataset, DatasetSplit)
                else load_dataset(dataset, seed=self.settings.seed)
            )
            result = train(split, self.settings.train_config(), initial=initial)
            self._track(save_weights(result.weights, self.out_dir / "weights.wtlw"))
            self._write_text("loss_curve.csv", result.curve.to_csv())
            last = result.curve.epochs[-1] if result.curve.epochs else None
            return result, {
                "train_records": len(split.train),
                "validation_records": len(split.validation),
                "epochs": len(result.curve.epochs),
                "best_epoch": result.curve.best_epoch,
                "final_train_loss": last.train_loss if last else None,
                "final_val_loss": last.val_loss if last else None,
            }

        return self._run_stage(StageName.TRAIN, run)

    def trace(
        self,
        stack: InputStack,
        predictor: DirectionPredictor,
        start: PixelCoord,
        heading: float,
        steps: int,
    ) -> PathTrace:
        """Walk a single tracer; writes path.csv and trace_overlay.png."""

        def run() -> tuple[PathTrace, dict[str, Any]]:
            policy = RandomStep(
                np.random.default_rng(self.settings.seed), self.settings.step_probabilities
            )
            path = walk(stack, TracerState(start, heading), steps, predictor, policy)
            self._write_text("path.csv", path_to_csv(path))
            self._track(
                raster_io.save_overlay(stack.rgb, path.pixels, self.out_dir / "trace_overlay.png")
            )
            return path, {
                "start": list(start),
                "heading": heading,
                "steps": steps,
                "pixels": len(path),
                "exit_reason": path.exit_reason.value,
                "predictor": predictor.kind.value,
            }

        return self._run_stage(StageName.TRACE, run)

    def complete(self, stack: InputStack, predictor: DirectionPredictor) -> CompletionResult:
        """Both tracer passes; writes wtl_contour.png and wtl_overlay.png."""

        def run() -> tuple[CompletionResult, dict[str, Any]]:
            result = run_completion(stack, predictor, self.settings.completion_config())
            self._track(
                raster_io.save_gray(
                    result.accumulation.normalized(), self.out_dir / "wtl_contour.png"
                ),
                raster_io.save_overlay(
                    stack.rgb, result.accumulation.support, self.out_dir / "wtl_overlay.png"
                ),
            )
            for p in result.passes:
                self.timings[f"complete.{p.report.origin.value}"] = p.elapsed
            details = result.report.model_dump(mode="json")
            details["n0"] = result.report.n0
            details["predictor"] = predictor.kind.value
            return result, details

        return self._run_stage(StageName.COMPLETE, run)

    def binarize(self, wtl: np.ndarray, image: Optional[np.ndarray] = None) -> BinarizeResult:
        """
        Closed contour from a WtL map; writes binary_contour.png, mask.png and,
        given the image, contour_overlay.png. The outcome class is counted in
        the run report, failures included.
        """

        def run() -> tuple[BinarizeResult, dict[str, Any]]:
            cfg = self.settings.binarize_config()
            try:
                result = binarize_pipeline(wtl, cfg)
            except StageError as e:
                self.report.count_diagnosis(diagnose_failure(wtl, e, cfg))
                raise
            diagnosis = diagnose_result(result, cfg)
            self.report.count_diagnosis(diagnosis)
            mask = fill_closed_contour(result.contour)
            self._track(
                raster_io.save_mask(result.contour, self.out_dir / "binary_contour.png"),
                raster_io.save_mask(mask, self.out_dir / "mask.png"),
            )
            if image is not None:
                self._track(
                    raster_io.save_overlay(
                        image, result.contour, self.out_dir / "contour_overlay.png"
                    )
                )
            details = result.report.model_dump(mode="json")
            details["mask_pixels"] = int(mask.sum())
            details["diagnosis"] = diagnosis.value
            return result, details

        return self._run_stage(StageName.BINARIZE, run)

    def evaluate(self, pairs: Sequence[tuple[str, np.ndarray, np.ndarray]]) -> MetricTable:
        """
        Score (image id, mask, ground truth) triples; writes metrics.csv and metrics.txt.
        """

        def run() -> tuple[MetricTable, dict[str, Any]]:
            table = report_table([metrics(mask, gt, image_id) for image_id, mask, gt in pairs])
            self._write_text("metrics.csv", table.csv)
            self._write_text("metrics.txt", table.text)
            return table, {
                "rows": [r.model_dump(mode="json") for r in table.rows],
                "mean_percent": dict(zip(("precision", "recall", "iou"), table.mean)),
            }

        return self._run_stage(StageName.EVAL, run)

    def pipeline(
        self,
        stack: InputStack,
        predictor: DirectionPredictor,
        gt_mask: Optional[np.ndarray] = None,
        image_id: str = "0",
    ) -> PipelineResult:
        """complete -> binarize -> optional eval against a ground-truth mask."""
        completion = self.complete(stack, predictor)
        # Binarize the map as saved, so `binarize` on wtl_contour.png reproduces this run.
        wtl = raster_io.to_uint8(completion.accumulation.normalized()) / 255.0
        binarization = self.binarize(wtl, image=stack.rgb)
        mask = fill_closed_contour(binarization.contour)

        result = PipelineResult(completion, binarization, mask)
        if gt_mask is not None:
            table = self.evaluate([(image_id, mask, gt_mask)])
            result.metrics = table.rows[0]
        return result
