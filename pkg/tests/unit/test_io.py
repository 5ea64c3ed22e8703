"""
Unit tests for raster file I/O and overlays.
"""

import numpy as np
import pytest

from wtl.raster import PixelCoord
from wtl.raster import io as raster_io
from wtl.shared.errors import FormatError, InputOutputError


@pytest.mark.unit
class TestRasterIO:
    """Tests for PNG reading and writing."""

    def test_gray_quantized_to_8_bit(self, tmp_path):
        """Test gray rasters come back at 1/255 resolution."""
        values = np.linspace(0.0, 1.0, 64, dtype=np.float32).reshape(8, 8)
        path = raster_io.save_gray(values, tmp_path / "gray.png")
        loaded = raster_io.load_gray(path)
        assert loaded.dtype == np.float32
        np.testing.assert_allclose(loaded, np.rint(values * 255) / 255, atol=1e-6)

    def test_rgb_roundtrip_shape(self, tmp_path):
        """Test RGB images keep three channels."""
        image = np.zeros((6, 7, 3), dtype=np.float32)
        image[..., 0] = 1.0
        loaded = raster_io.load_rgb(raster_io.save_rgb(image, tmp_path / "rgb.png"))
        assert loaded.shape == (6, 7, 3)
        np.testing.assert_array_equal(loaded, image)

    def test_mask(self, tmp_path, square_contour):
        """Test masks survive as booleans."""
        path = raster_io.save_mask(square_contour, tmp_path / "nested" / "mask.png")
        np.testing.assert_array_equal(raster_io.load_mask(path), square_contour)

    def test_missing_file_names_path(self, tmp_path):
        """Test a missing file is an I/O error carrying the path."""
        missing = tmp_path / "absent.png"
        with pytest.raises(InputOutputError) as exc_info:
            raster_io.load_gray(missing)
        assert exc_info.value.path == str(missing)
        assert exc_info.value.exit_code == 3

    def test_undecodable_file(self, tmp_path):
        """Test garbage content is a format error."""
        path = tmp_path / "junk.png"
        path.write_bytes(b"not an image")
        with pytest.raises(FormatError):
            raster_io.load_rgb(path)


@pytest.mark.unit
class TestOverlay:
    """Tests for contour overlays."""

    def test_pixels_drawn_red(self):
        """Test highlighted pixels are pure red on a dimmed background."""
        image = np.ones((5, 5, 3), dtype=np.float32)
        canvas = raster_io.render_overlay(image, [PixelCoord(1, 2), PixelCoord(9, 9)])
        assert canvas.dtype == np.uint8
        assert tuple(canvas[1, 2]) == (255, 0, 0)
        assert tuple(canvas[0, 0]) == (191, 191, 191)

    def test_mask_overlay(self, square_contour):
        """Test a boolean mask selects the drawn pixels."""
        image = np.zeros(square_contour.shape + (3,), dtype=np.float32)
        canvas = raster_io.render_overlay(image, square_contour)
        assert np.all(canvas[square_contour] == (255, 0, 0))
        assert np.all(canvas[~square_contour] == 64)
