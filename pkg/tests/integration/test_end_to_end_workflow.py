"""
Integration tests for the end-to-end contour workflow.
Tests complete flow: Complete -> Binarize -> Eval, run reports and the synthetic benchmark.
"""

import json

import numpy as np
import pytest

from wtl.evaluation import contour_of_mask, gen_scene
from wtl.labelgen import trace_gt_chain
from wtl.orchestrator import ContourWorkflow
from wtl.predictor import OraclePredictor, RidgePredictor
from wtl.raster import stack_inputs
from wtl.shared.errors import NoLineError, StageError
from wtl.shared.schemas import ContourDiagnosis, StageName
from wtl.shared.utils import load_settings


@pytest.fixture
def settings():
    return load_settings(seed=3)


@pytest.fixture
def rectangle():
    """Rectangle mask, its contour and an input stack whose soft map is that contour."""
    mask = np.zeros((64, 96), dtype=bool)
    mask[16:48, 16:80] = True
    contour = contour_of_mask(mask)
    stack = stack_inputs(np.full((64, 96, 3), 0.5, np.float32), contour.astype(np.float32))
    return mask, contour, stack


class TestEndToEndWorkflow:
    """Integration tests for complete workflow."""

    @pytest.mark.integration
    def test_oracle_pipeline_recovers_rectangle(self, settings, rectangle, tmp_path):
        """Test the oracle pipeline closes the rectangle and scores it."""
        mask, contour, stack = rectangle
        workflow = ContourWorkflow(settings, tmp_path, command="pipeline")

        result = workflow.pipeline(
            stack, OraclePredictor(trace_gt_chain(contour)), gt_mask=mask, image_id="rect"
        )
        report = workflow.finalize()

        assert result.metrics is not None
        assert result.metrics.iou > 0.9
        assert result.mask.shape == mask.shape
        assert [e.stage for e in report.events] == [
            StageName.COMPLETE,
            StageName.BINARIZE,
            StageName.EVAL,
        ]
        assert report.error_count == 0
        for name in ("wtl_contour.png", "mask.png", "metrics.csv", "run_config.env"):
            assert name in report.artifacts
        assert (tmp_path / "report.json").is_file()
        assert "complete" in json.loads((tmp_path / "timings.json").read_text())

    @pytest.mark.integration
    def test_ridge_pipeline_runs(self, settings, rectangle, tmp_path):
        """Test the untrained ridge predictor drives the same chain without failing."""
        _, _, stack = rectangle
        workflow = ContourWorkflow(settings, tmp_path, command="complete")

        result = workflow.complete(stack, RidgePredictor())

        assert result.report.n0 > 0
        assert result.accumulation.support.any()

    @pytest.mark.integration
    def test_failed_stage_is_reported(self, settings, tmp_path):
        """Test a failing stage raises StageError and is recorded by finalize."""
        workflow = ContourWorkflow(settings, tmp_path, command="binarize")

        with pytest.raises(StageError) as exc_info:
            workflow.binarize(np.zeros((32, 32)))
        report = workflow.finalize()

        assert exc_info.value.stage == "binarize"
        assert exc_info.value.exit_code == NoLineError.exit_code
        assert report.error_count == 1
        assert report.success_count == 0
        saved = json.loads((tmp_path / "report.json").read_text())
        assert saved["events"][0]["success"] is False
        assert saved["diagnoses"] == {"not_closed": 1}

    @pytest.mark.integration
    def test_binarize_counts_diagnosis(self, settings, rectangle, tmp_path):
        """Test a closed contour is counted as closed in the run report."""
        _, contour, _ = rectangle
        workflow = ContourWorkflow(settings, tmp_path, command="binarize")

        workflow.binarize(contour.astype(np.float32))
        report = workflow.finalize()

        assert report.diagnoses == {ContourDiagnosis.CLOSED: 1}
        assert report.events[0].details["diagnosis"] == "closed"
        saved = json.loads((tmp_path / "report.json").read_text())
        assert saved["diagnoses"] == {"closed": 1}

    @pytest.mark.integration
    def test_same_seed_same_report(self, small_scene_params, tmp_path):
        """Test two runs of one scene and seed write identical artifacts."""
        scene = gen_scene(small_scene_params, seed=1)
        stack = stack_inputs(scene.image, scene.softmap)
        artifacts = []
        for name in ("a", "b"):
            workflow = ContourWorkflow(load_settings(seed=1), tmp_path / name, command="complete")
            workflow.complete(stack, OraclePredictor(trace_gt_chain(scene.gt_contour)))
            artifacts.append(workflow.finalize().artifacts)
        assert artifacts[0] == artifacts[1]

    @pytest.mark.integration
    @pytest.mark.slow
    def test_synthetic_benchmark(self, tmp_path):
        """Test the benchmark writes its results and evaluates every gate."""
        from scripts.run_synthetic_benchmark import SyntheticBenchmark

        results = SyntheticBenchmark(scenes=3, results_dir=tmp_path).run()

        assert set(results["gates"]) == {"circumnavigation", "iou", "closure"}
        assert len(results["circumnavigation"]) == 3
        assert 0.0 <= results["pipeline"]["mean_iou"] <= 1.0
        assert (tmp_path / "benchmark.json").is_file()
        assert (tmp_path / "metrics.csv").is_file()
