"""
Unit tests for angle conventions, direction rings and segment rasterization.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtl.raster import (
    PixelCoord,
    all_ring_directions,
    angle_to_offset,
    offset_to_angle,
    rasterize_segment,
    ring_offsets,
    wrap_angle,
    wrap_angles,
)
from wtl.shared.errors import InvalidArgumentError


def brute_force_offset(heading: float, step: int) -> tuple[int, int]:
    """Closest ring offset by exhaustive search; ties to the counterclockwise side."""
    best, best_key = None, None
    for dr in range(-step, step + 1):
        for dc in range(-step, step + 1):
            if max(abs(dr), abs(dc)) != step:
                continue
            signed = wrap_angle(math.degrees(math.atan2(dr, dc)) - heading)
            key = (round(abs(signed), 9), signed)
            if best_key is None or key < best_key:
                best, best_key = (dr, dc), key
    return best


@pytest.mark.unit
class TestWrapAngle:
    """Tests for wrapping into (-180, 180]."""

    @given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
    def test_range_and_equivalence(self, angle):
        """Test wrapped value lies in (-180, 180] and differs by a multiple of 360."""
        wrapped = wrap_angle(angle)
        assert -180.0 < wrapped <= 180.0
        turns = (angle - wrapped) / 360.0
        assert turns == pytest.approx(round(turns), abs=1e-6)

    @pytest.mark.parametrize("angle", [180.0, -180.0, 540.0, -540.0])
    def test_half_turn_maps_to_plus_180(self, angle):
        """Test the half turn is represented as +180."""
        assert wrap_angle(angle) == 180.0

    @pytest.mark.parametrize("angle", [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, angle):
        """Test non-finite angles raise."""
        with pytest.raises(InvalidArgumentError):
            wrap_angle(angle)

    def test_vectorized_matches_scalar(self):
        """Test the array form wraps element-wise with the same half-turn rule."""
        wrapped = wrap_angles([190.0, -180.0, 0.0, 540.0])
        np.testing.assert_array_equal(wrapped, [-170.0, 180.0, 0.0, 180.0])

    def test_vectorized_rejects_nan(self):
        with pytest.raises(InvalidArgumentError):
            wrap_angles(np.array([0.0, np.nan]))


@pytest.mark.unit
class TestDirectionRings:
    """Tests for offset <-> angle conversion on the pixelstep rings."""

    @pytest.mark.parametrize("step,size", [(1, 8), (2, 16), (3, 24)])
    def test_ring_sizes(self, step, size):
        """Test the Chebyshev ring of each pixelstep."""
        ring = ring_offsets(step)
        assert len(ring) == size
        assert all(max(abs(dr), abs(dc)) == step for dr, dc in ring)

    def test_invalid_step(self):
        """Test pixelsteps outside 1..3 raise."""
        with pytest.raises(InvalidArgumentError):
            ring_offsets(4)
        with pytest.raises(InvalidArgumentError):
            angle_to_offset(0.0, 0)

    def test_clockwise_positive_convention(self):
        """Test 0 is east and +90 points down the rows."""
        assert offset_to_angle(0, 1) == 0.0
        assert offset_to_angle(1, 0) == 90.0
        assert offset_to_angle(-1, 0) == -90.0
        assert offset_to_angle(0, -1) == 180.0
        assert angle_to_offset(90.0, 1) == (1, 0)
        assert angle_to_offset(180.0, 2) == (0, -2)

    def test_zero_offset_rejected(self):
        """Test the zero offset has no direction."""
        with pytest.raises(InvalidArgumentError):
            offset_to_angle(0, 0)

    @pytest.mark.parametrize("step", [1, 2, 3])
    def test_matches_brute_force(self, step):
        """Test every integer heading against exhaustive search."""
        for heading in range(-179, 181):
            assert angle_to_offset(float(heading), step) == brute_force_offset(heading, step)

    def test_ties_go_counterclockwise(self):
        """Test exact ties pick the smaller angle."""
        assert angle_to_offset(22.5, 1) == (0, 1)
        assert angle_to_offset(-22.5, 1) == (-1, 1)
        assert angle_to_offset(112.5, 1) == (1, 0)

    def test_thirty_two_directions(self):
        """Test the three rings together reach 32 distinct directions."""
        directions = all_ring_directions()
        assert len(directions) == 32
        assert 0.0 in directions and 180.0 in directions


@pytest.mark.unit
class TestRasterizeSegment:
    """Tests for 8-connected segment rasterization."""

    @pytest.mark.parametrize(
        "start,end",
        [((0, 0), (2, 3)), ((5, 5), (2, 4)), ((3, 3), (3, 0)), ((1, 1), (4, 4))],
    )
    def test_consecutive_pixels_adjacent(self, start, end):
        """Test endpoints are included and neighbours touch."""
        pixels = rasterize_segment(PixelCoord(*start), PixelCoord(*end))
        assert pixels[0] == PixelCoord(*start)
        assert pixels[-1] == PixelCoord(*end)
        for a, b in zip(pixels, pixels[1:]):
            assert max(abs(a.row - b.row), abs(a.col - b.col)) == 1

    def test_single_pixel(self):
        """Test a zero-length segment is its start pixel."""
        assert rasterize_segment(PixelCoord(2, 2), PixelCoord(2, 2)) == [PixelCoord(2, 2)]
