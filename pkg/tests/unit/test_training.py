"""
Unit tests for SGD with momentum and the training loop.
"""

import numpy as np
import pytest

from wtl.labelgen import DatasetSplit, LabelRecord
from wtl.predictor import CnnArchitecture, init_weights, sgd_step, train
from wtl.predictor.training import batch_slices, evaluate_loss
from wtl.shared.errors import InvalidArgumentError
from wtl.shared.schemas import TrainConfig


def make_split(n_train: int, n_val: int, label: float = 45.0, seed: int = 0) -> DatasetSplit:
    rng = np.random.default_rng(seed)

    def records(n: int) -> list[LabelRecord]:
        return [
            LabelRecord(
                patch=rng.random((13, 13, 4)).astype(np.float32),
                label=label,
                image_id=0,
                chain_index=k,
            )
            for k in range(n)
        ]

    return DatasetSplit(train=records(n_train), validation=records(n_val), seed=seed)


@pytest.fixture
def tiny_config():
    return TrainConfig(batch_size=8, epochs=3, width_divisor=16, rng_seed=4)


@pytest.mark.unit
class TestSgdStep:
    """Tests for the momentum update rule."""

    @pytest.fixture
    def bundle(self):
        return init_weights(CnnArchitecture(width_divisor=16), seed=0, dtype=np.float64)

    def test_plain_gradient_descent(self, bundle):
        """Test momentum 0 gives w - lr * g."""
        cfg = TrainConfig(learning_rate=0.1, momentum=0.0)
        grads = bundle.zeros_like()
        grads.tensors["fc.bias"][:] = 2.0
        before = bundle["fc.bias"].copy()
        sgd_step(bundle, grads, bundle.zeros_like(), cfg)
        np.testing.assert_allclose(bundle["fc.bias"], before - 0.2)

    def test_velocity_moves_without_gradient(self, bundle):
        """Test a zero gradient still moves weights by momentum * velocity."""
        cfg = TrainConfig(learning_rate=0.1, momentum=0.5)
        velocity = bundle.zeros_like()
        velocity.tensors["fc.bias"][:] = 1.0
        before = bundle["fc.bias"].copy()
        sgd_step(bundle, bundle.zeros_like(), velocity, cfg)
        np.testing.assert_allclose(bundle["fc.bias"], before + 0.5)

    def test_two_steps_constant_gradient(self, bundle):
        """Test two steps move by -lr * g * (2 + momentum)."""
        cfg = TrainConfig(learning_rate=0.01, momentum=0.9)
        grads = bundle.zeros_like()
        grads.tensors["bn1.beta"][:] = 3.0
        velocity = bundle.zeros_like()
        before = bundle["bn1.beta"].copy()
        sgd_step(bundle, grads, velocity, cfg)
        sgd_step(bundle, grads, velocity, cfg)
        np.testing.assert_allclose(bundle["bn1.beta"], before - 0.01 * 3.0 * 2.9)

    def test_running_statistics_untouched(self, bundle):
        """Test buffers are skipped even with a nonzero gradient entry."""
        grads = bundle.zeros_like()
        grads.tensors["bn2.running_mean"][:] = 5.0
        sgd_step(bundle, grads, bundle.zeros_like(), TrainConfig())
        assert np.all(bundle["bn2.running_mean"] == 0.0)


@pytest.mark.unit
class TestBatchSlices:
    """Tests for mini-batch boundaries."""

    def test_exact_batches(self):
        """Test evenly divisible counts."""
        assert batch_slices(9, 3) == [slice(0, 3), slice(3, 6), slice(6, 9)]

    def test_single_trailing_sample_merged(self):
        """Test a trailing batch of one joins the previous batch."""
        assert batch_slices(10, 3) == [slice(0, 3), slice(3, 6), slice(6, 10)]

    def test_small_dataset(self):
        """Test fewer samples than one batch."""
        assert batch_slices(5, 64) == [slice(0, 5)]


@pytest.mark.unit
class TestTrain:
    """Tests for the training loop."""

    def test_curve_and_best_weights(self, tiny_config):
        """Test one curve row per epoch and weights from the best validation epoch."""
        split = make_split(24, 6)
        seen = []
        result = train(split, tiny_config, on_epoch=seen.append)

        assert [e.epoch for e in result.curve.epochs] == [1, 2, 3]
        assert seen == result.curve.epochs
        patches, labels = split.validation_arrays()
        best = min(e.val_loss for e in result.curve.epochs)
        assert evaluate_loss(
            patches, (labels / 180.0).astype(np.float32), result.weights, tiny_config
        ) == pytest.approx(best, rel=1e-5)

    def test_deterministic(self, tiny_config):
        """Test the same seed reproduces the loss curve exactly."""
        split = make_split(16, 4)
        first = train(split, tiny_config)
        second = train(split, tiny_config)
        assert first.curve.epochs == second.curve.epochs
        np.testing.assert_array_equal(first.weights["fc.weight"], second.weights["fc.weight"])

    def test_constant_target_loss_decreases(self):
        """Test the network learns a constant direction change."""
        cfg = TrainConfig(batch_size=8, epochs=10, width_divisor=8, rng_seed=0)
        result = train(make_split(16, 4, label=90.0), cfg)
        assert result.curve.epochs[-1].train_loss < result.curve.epochs[0].train_loss

    def test_empty_validation_uses_training_split(self, tiny_config):
        """Test training proceeds and reports a finite validation loss."""
        result = train(make_split(8, 0), tiny_config)
        assert all(np.isfinite(e.val_loss) for e in result.curve.epochs)

    def test_empty_dataset(self, tiny_config):
        """Test an empty training split is rejected."""
        with pytest.raises(InvalidArgumentError):
            train(DatasetSplit(), tiny_config)

    def test_single_record(self, tiny_config):
        """Test one record cannot provide batch statistics."""
        with pytest.raises(InvalidArgumentError):
            train(make_split(1, 1), tiny_config)

    def test_initial_weights_not_modified(self, tiny_config):
        """Test training starts from a copy of the given weights."""
        initial = init_weights(CnnArchitecture(width_divisor=16), seed=9)
        snapshot = initial["conv1.weight"].copy()
        train(make_split(8, 2), tiny_config, initial=initial)
        np.testing.assert_array_equal(initial["conv1.weight"], snapshot)
