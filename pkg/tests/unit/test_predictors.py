"""
Unit tests for the predictor factory, the oracle and the ridge baseline.
"""

import numpy as np
import pytest

from wtl.labelgen import ContourChain, trace_gt_chain
from wtl.predictor import (
    CnnArchitecture,
    CnnPredictor,
    OraclePredictor,
    RidgePredictor,
    init_weights,
    make_predictor,
    oracle_predict,
    ridge_predict,
)
from wtl.predictor.ridge import ridge_angles
from wtl.raster import PixelCoord
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import PredictorKind
from wtl.tracer import TracerState


@pytest.fixture
def square_chain(square_contour):
    return trace_gt_chain(square_contour)


def line_patch(rows=None, cols=None, diagonal=False) -> np.ndarray:
    patch = np.zeros((13, 13, 4), dtype=np.float32)
    if rows is not None:
        patch[rows, :, 3] = 1.0
    if cols is not None:
        patch[:, cols, 3] = 1.0
    if diagonal:
        idx = np.arange(13)
        patch[idx, idx, 3] = 1.0
    return patch


@pytest.mark.unit
class TestMakePredictor:
    """Tests for the predictor factory."""

    def test_cnn_requires_weights(self):
        """Test the CNN kind refuses to build without weights."""
        with pytest.raises(InvalidArgumentError, match="weights"):
            make_predictor(PredictorKind.CNN)

    def test_oracle_requires_chain(self):
        """Test the oracle kind needs a ground-truth chain."""
        with pytest.raises(InvalidArgumentError):
            make_predictor("oracle")

    def test_kinds(self, square_chain):
        """Test each kind maps to its implementation."""
        weights = init_weights(CnnArchitecture(width_divisor=16), seed=0)
        assert isinstance(make_predictor("cnn", weights=weights), CnnPredictor)
        assert isinstance(make_predictor("oracle", chain=square_chain), OraclePredictor)
        assert isinstance(make_predictor("ridge"), RidgePredictor)


@pytest.mark.unit
class TestCnnPredictor:
    """Tests for the CNN-backed predictor wrapper."""

    @pytest.fixture
    def predictor(self):
        return CnnPredictor(init_weights(CnnArchitecture(width_divisor=16), seed=0))

    def test_needs_patches(self, predictor):
        """Test calling without patches is an argument error."""
        with pytest.raises(InvalidArgumentError):
            predictor.predict(None, [])

    def test_empty_batch(self, predictor):
        """Test no patches means no angles."""
        out = predictor.predict(np.zeros((0, 13, 13, 4), dtype=np.float32), [])
        assert out.shape == (0,)

    def test_output_wrapped_degrees(self, predictor):
        """Test outputs are scaled into the half-open angle range."""
        patches = np.random.default_rng(0).random((5, 13, 13, 4)).astype(np.float32)
        out = predictor.predict(patches, [None] * 5)
        assert out.shape == (5,)
        assert np.all((out > -180.0) & (out <= 180.0))

    def test_mirrored_keeps_weights(self, predictor):
        """Test the mirrored-pass predictor answers identically for the same patches."""
        patches = np.random.default_rng(1).random((3, 13, 13, 4)).astype(np.float32)
        mirrored = predictor.mirrored(32)
        np.testing.assert_array_equal(
            mirrored.predict(patches, [None] * 3), predictor.predict(patches, [None] * 3)
        )


@pytest.mark.unit
class TestOraclePredictor:
    """Tests for the ground-truth oracle."""

    def test_straight_edge(self, square_chain):
        """Test on a straight run the oracle keeps the heading."""
        oracle = OraclePredictor(square_chain)
        state = TracerState(square_chain.at(0), 0.0)
        assert oracle.predict_one(state) == pytest.approx(0.0)

    def test_turns_at_corner(self, square_chain):
        """Test approaching the top-right corner the oracle turns right."""
        oracle = OraclePredictor(square_chain)
        assert square_chain.at(12) == PixelCoord(8, 21)
        state = TracerState(square_chain.at(12), 0.0)
        assert oracle.predict_one(state) == pytest.approx(45.0)

    def test_batch_matches_single(self, square_chain):
        """Test predict is predict_one applied per state."""
        oracle = OraclePredictor(square_chain)
        states = [TracerState(square_chain.at(i), 90.0) for i in (0, 20, 40)]
        expected = [oracle.predict_one(s) for s in states]
        np.testing.assert_allclose(oracle.predict(None, states), expected)

    def test_nearest_ties_lowest_index(self, square_chain):
        """Test equidistant chain pixels resolve to the lowest index."""
        oracle = OraclePredictor(square_chain)
        # (9, 22) is one pixel from chain[13] = (8, 22) and chain[14] = (9, 23).
        assert oracle.nearest_index(9, 22) == 13

    def test_function_form_is_relative_to_heading(self, square_chain):
        """Test the function form returns the label minus the heading offset."""
        assert oracle_predict(square_chain, TracerState(square_chain.at(0), 10.0)) == pytest.approx(
            -10.0
        )

    def test_literal_rule_ignores_displacement(self, square_chain):
        """Test without recentering a displaced tracer gets the on-chain label."""
        displaced = TracerState(PixelCoord(9, 12), 0.0)
        assert oracle_predict(square_chain, displaced) == pytest.approx(0.0)
        assert oracle_predict(square_chain, displaced, recenter=True) < 0.0

    def test_mirrored_chain_stays_clockwise(self, square_chain):
        """Test the mirrored oracle follows a clockwise chain."""
        mirrored = OraclePredictor(square_chain).mirrored(32)
        assert mirrored.chain.area > 0
        assert len(mirrored.chain) == len(square_chain)

    def test_empty_chain(self):
        """Test an empty chain is rejected."""
        with pytest.raises(InvalidArgumentError):
            OraclePredictor(ContourChain(np.zeros((0, 2), dtype=np.int64)))


@pytest.mark.unit
class TestRidge:
    """Tests for the structure-tensor baseline."""

    def test_horizontal_line(self):
        """Test a row ridge points east."""
        assert ridge_predict(line_patch(rows=6)) == pytest.approx(0.0, abs=1e-6)

    def test_vertical_line(self):
        """Test a column ridge is reported as +90."""
        assert ridge_predict(line_patch(cols=6)) == pytest.approx(90.0, abs=1e-6)

    def test_diagonal_line(self):
        """Test the main diagonal ridge is at 45 degrees."""
        assert ridge_predict(line_patch(diagonal=True)) == pytest.approx(45.0, abs=2.0)

    def test_flat_patch(self):
        """Test a patch without structure answers 0."""
        assert ridge_predict(np.full((13, 13, 4), 0.4, dtype=np.float32)) == 0.0

    def test_batch(self):
        """Test the batch path returns one angle per patch in range."""
        angles = ridge_angles(np.stack([line_patch(rows=6), line_patch(cols=6)]))
        assert angles.shape == (2,)
        assert np.all((angles > -90.0) & (angles <= 90.0))

    def test_predictor_interface(self):
        """Test the predictor answers zeros when nothing was extracted."""
        predictor = RidgePredictor()
        assert predictor.needs_patches
        assert predictor.mirrored(10) is predictor
        np.testing.assert_array_equal(predictor.predict(None, [None, None]), [0.0, 0.0])
