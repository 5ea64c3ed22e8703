"""
Unit tests for weight initialization, validation and the weights file format.
"""

import numpy as np
import pytest

from wtl.predictor import CnnArchitecture, init_weights, load_weights, save_weights
from wtl.shared.errors import FormatError, InputOutputError, InvalidArgumentError


@pytest.fixture
def weights():
    return init_weights(CnnArchitecture(width_divisor=16), seed=5)


@pytest.mark.unit
class TestInitWeights:
    """Tests for He initialization."""

    def test_batchnorm_defaults(self, weights):
        """Test BatchNorm scale 1, shift 0, running mean 0 and variance 1."""
        assert np.all(weights["bn2.gamma"] == 1.0)
        assert np.all(weights["bn2.beta"] == 0.0)
        assert np.all(weights["bn2.running_mean"] == 0.0)
        assert np.all(weights["bn2.running_var"] == 1.0)
        assert np.all(weights["conv2.bias"] == 0.0)

    def test_seeded(self):
        """Test the same seed gives the same kernels and another seed does not."""
        arch = CnnArchitecture(width_divisor=16)
        a, b, c = init_weights(arch, 1), init_weights(arch, 1), init_weights(arch, 2)
        np.testing.assert_array_equal(a["conv3.weight"], b["conv3.weight"])
        assert not np.array_equal(a["conv3.weight"], c["conv3.weight"])

    def test_parameter_names_skip_buffers(self, weights):
        """Test running statistics are not learnable parameters."""
        names = weights.parameter_names()
        assert "bn1.gamma" in names
        assert not any(n.endswith(("running_mean", "running_var")) for n in names)


@pytest.mark.unit
class TestValidate:
    """Tests for bundle validation."""

    def test_wrong_shape(self, weights):
        """Test a tensor with the wrong shape is named."""
        weights.tensors["fc.weight"] = np.zeros(3, dtype=np.float32)
        with pytest.raises(InvalidArgumentError, match="fc.weight"):
            weights.validate()

    def test_non_positive_variance(self, weights):
        """Test running variances must be strictly positive."""
        weights.tensors["bn4.running_var"][0] = 0.0
        with pytest.raises(InvalidArgumentError, match="bn4.running_var"):
            weights.validate()


@pytest.mark.unit
class TestWeightsFile:
    """Tests for save_weights / load_weights."""

    def test_bit_exact(self, weights, tmp_path):
        """Test a float32 bundle loads back bit for bit with its metadata."""
        loaded = load_weights(save_weights(weights, tmp_path / "w.wtlw"))
        assert list(loaded.tensors) == list(weights.tensors)
        for name, tensor in weights.tensors.items():
            assert loaded[name].tobytes() == tensor.tobytes()
        assert loaded.width_divisor == 16
        assert loaded.seed == 5

    def test_missing_file(self, tmp_path):
        """Test a missing file is an I/O error."""
        with pytest.raises(InputOutputError):
            load_weights(tmp_path / "nope.wtlw")

    def test_bad_magic(self, weights, tmp_path):
        """Test a foreign file is a format error."""
        path = save_weights(weights, tmp_path / "w.wtlw")
        data = bytearray(path.read_bytes())
        data[:4] = b"JUNK"
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="magic"):
            load_weights(path)

    def test_unsupported_version(self, weights, tmp_path):
        """Test the format version is checked."""
        path = save_weights(weights, tmp_path / "w.wtlw")
        data = bytearray(path.read_bytes())
        data[8:10] = (99).to_bytes(2, "little")
        path.write_bytes(bytes(data))
        with pytest.raises(FormatError, match="version"):
            load_weights(path)

    def test_truncated(self, weights, tmp_path):
        """Test a cut-off payload is detected."""
        path = save_weights(weights, tmp_path / "w.wtlw")
        path.write_bytes(path.read_bytes()[:-10])
        with pytest.raises(FormatError, match="truncated"):
            load_weights(path)

    def test_trailing_bytes(self, weights, tmp_path):
        """Test extra bytes after the payload are rejected."""
        path = save_weights(weights, tmp_path / "w.wtlw")
        path.write_bytes(path.read_bytes() + b"\x00\x00")
        with pytest.raises(FormatError, match="trailing"):
            load_weights(path)
