"""
Integration tests for the wtl command line: exit codes, artifacts and determinism.
"""

import json
import os

import numpy as np
import pytest

from wtl.cli.main import main
from wtl.evaluation import contour_of_mask
from wtl.raster import io as raster_io


@pytest.fixture
def rectangle_scene(tmp_path):
    """A hand-made scene: gray image, crisp soft map of a rectangle, its contour and mask."""
    mask = np.zeros((64, 96), dtype=bool)
    mask[16:48, 16:80] = True
    contour = contour_of_mask(mask)
    scene = tmp_path / "scene"
    return {
        "image": raster_io.save_rgb(np.full((64, 96, 3), 0.5, np.float32), scene / "image.png"),
        "softmap": raster_io.save_gray(contour.astype(np.float32), scene / "softmap.png"),
        "contour": raster_io.save_mask(contour, scene / "contour.png"),
        "mask": raster_io.save_mask(mask, scene / "mask.png"),
    }


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("WTL_"):
            monkeypatch.delenv(key)


def oracle_args(scene: dict) -> list[str]:
    return [
        "--predictor",
        "oracle",
        "--gt-contour",
        str(scene["contour"]),
        "--image",
        str(scene["image"]),
        "--softmap",
        str(scene["softmap"]),
    ]


@pytest.mark.integration
class TestExitCodes:
    """Tests for error reporting through exit codes."""

    def test_missing_softmap(self, rectangle_scene, tmp_path, capsys):
        """Test an unreadable input exits 3 and names the file."""
        missing = tmp_path / "nowhere" / "softmap.png"
        code = main(
            [
                "complete",
                "--image",
                str(rectangle_scene["image"]),
                "--softmap",
                str(missing),
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert code == 3
        err = capsys.readouterr().err.replace("\n", "")
        assert "softmap.png" in err

    def test_no_line(self, tmp_path):
        """Test binarizing an empty map exits 6."""
        wtl = raster_io.save_gray(np.zeros((32, 32), np.float32), tmp_path / "wtl.png")
        assert main(["binarize", "--wtl", str(wtl), "--out", str(tmp_path / "out")]) == 6

    def test_cnn_without_weights(self, rectangle_scene, tmp_path):
        """Test the CNN predictor without weights is an argument error."""
        code = main(
            [
                "pipeline",
                "--predictor",
                "cnn",
                "--image",
                str(rectangle_scene["image"]),
                "--softmap",
                str(rectangle_scene["softmap"]),
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert code == 2

    def test_no_subcommand(self):
        """Test a missing subcommand is a usage error."""
        assert main([]) == 2

    def test_version(self, capsys):
        """Test --version exits cleanly."""
        assert main(["--version"]) == 0
        assert "wtl" in capsys.readouterr().out

    def test_invalid_config_value(self, rectangle_scene, tmp_path):
        """Test configuration values failing validation exit 2."""
        config = tmp_path / "bad.env"
        config.write_text("WTL_STEP_PROBABILITIES=[0.5, 0.5, 0.5]\n")
        code = main(
            ["complete", "--config", str(config), "--out", str(tmp_path / "out")]
            + oracle_args(rectangle_scene)
        )
        assert code == 2

    def test_unexpected_failure(self, rectangle_scene, tmp_path, mocker):
        """Test an exception outside the error hierarchy exits 1 and still finalizes."""
        mocker.patch("wtl.cli.main.ContourWorkflow.complete", side_effect=RuntimeError("boom"))
        out = tmp_path / "out"
        assert main(["complete", "--out", str(out)] + oracle_args(rectangle_scene)) == 1
        assert (out / "report.json").is_file()

    def test_failed_stage_still_reported(self, tmp_path):
        """Test the run report records a failed stage."""
        wtl = raster_io.save_gray(np.zeros((32, 32), np.float32), tmp_path / "wtl.png")
        out = tmp_path / "out"
        main(["binarize", "--wtl", str(wtl), "--out", str(out)])
        report = json.loads((out / "report.json").read_text())
        assert report["error_count"] == 1
        assert report["events"][0]["exit_code"] == 6
        assert report["diagnoses"] == {"not_closed": 1}


@pytest.mark.integration
class TestStageChain:
    """Tests for running the stages one after another."""

    def test_complete_binarize_eval(self, rectangle_scene, tmp_path):
        """Test the oracle chain produces a mask close to the rectangle."""
        completed, binarized, scored = tmp_path / "c", tmp_path / "b", tmp_path / "e"
        assert main(["complete", "--out", str(completed)] + oracle_args(rectangle_scene)) == 0
        assert (completed / "wtl_contour.png").is_file()
        assert (completed / "wtl_overlay.png").is_file()

        code = main(
            [
                "binarize",
                "--wtl",
                str(completed / "wtl_contour.png"),
                "--image",
                str(rectangle_scene["image"]),
                "--out",
                str(binarized),
            ]
        )
        assert code == 0
        assert (binarized / "contour_overlay.png").is_file()

        code = main(
            [
                "eval",
                "--mask",
                str(binarized / "mask.png"),
                "--gt-mask",
                str(rectangle_scene["mask"]),
                "--image-id",
                "rect",
                "--out",
                str(scored),
            ]
        )
        assert code == 0
        rows = (scored / "metrics.csv").read_text().strip().split("\n")
        assert rows[1].startswith("rect,")
        assert float(rows[1].split(",")[3]) > 90.0

    def test_same_seed_same_artifacts(self, rectangle_scene, tmp_path):
        """Test two runs with one seed write byte-identical artifacts."""
        digests = []
        for name in ("first", "second"):
            out = tmp_path / name
            args = ["complete", "--seed", "4", "--out", str(out)] + oracle_args(rectangle_scene)
            assert main(args) == 0
            digests.append(json.loads((out / "report.json").read_text())["artifacts"])
        assert digests[0] == digests[1]
        assert "wtl_contour.png" in digests[0]
        assert "run_config.env" in digests[0]

    def test_trace_writes_path(self, rectangle_scene, tmp_path):
        """Test a single oracle tracer writes its path as CSV."""
        out = tmp_path / "t"
        code = main(
            ["trace", "--start", "16", "20", "--angle", "0", "--steps", "20", "--out", str(out)]
            + oracle_args(rectangle_scene)
        )
        assert code == 0
        lines = (out / "path.csv").read_text().strip().split("\n")
        assert lines[0] == "index,row,col"
        assert lines[1] == "0,16,20"
        assert len(lines) > 10

    def test_config_file_run_config_written(self, rectangle_scene, tmp_path):
        """Test the resolved configuration is written next to the artifacts."""
        config = tmp_path / "run.env"
        config.write_text("WTL_SEED=21\nWTL_LOOP_GRACE=4\n")
        out = tmp_path / "c"
        code = main(
            ["complete", "--config", str(config), "--out", str(out)] + oracle_args(rectangle_scene)
        )
        assert code == 0
        text = (out / "run_config.env").read_text()
        assert "WTL_SEED=21" in text
        assert "WTL_LOOP_GRACE=4" in text


@pytest.mark.integration
@pytest.mark.slow
class TestTrainingChain:
    """Tests for synth -> gen-labels -> train -> trace with the CNN."""

    def test_synth_labels_train_trace(self, tmp_path):
        """Test the learning stages hand their artifacts to each other."""
        config = tmp_path / "small.env"
        config.write_text(
            "WTL_SCENE_HEIGHT=96\nWTL_SCENE_WIDTH=96\nWTL_COMPLEXITY=1\nWTL_ANTENNAS=0\n"
        )
        common = ["--config", str(config)]
        scenes, labels, model = tmp_path / "scenes", tmp_path / "labels", tmp_path / "model"

        assert main(["synth", "--count", "2", "--out", str(scenes)] + common) == 0
        scene_dirs = sorted(p for p in scenes.iterdir() if p.is_dir())
        assert [p.name for p in scene_dirs] == ["scene_0000", "scene_0001"]

        code = main(
            ["gen-labels", "--scenes", *map(str, scene_dirs), "--labels-per-image", "8"]
            + ["--out", str(labels)]
            + common
        )
        assert code == 0

        code = main(
            ["train", "--dataset", str(labels / "dataset.wtld"), "--epochs", "1"]
            + ["--width-divisor", "16", "--out", str(model)]
            + common
        )
        assert code == 0
        assert (model / "loss_curve.csv").read_text().startswith("epoch,train_loss,val_loss")

        code = main(
            [
                "trace",
                "--predictor",
                "cnn",
                "--weights",
                str(model / "weights.wtlw"),
                "--image",
                str(scene_dirs[0] / "image.png"),
                "--softmap",
                str(scene_dirs[0] / "softmap.png"),
                "--start",
                "40",
                "40",
                "--steps",
                "5",
                "--out",
                str(tmp_path / "trace"),
            ]
        )
        assert code == 0
