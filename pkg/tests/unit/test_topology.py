"""
Unit tests for neighbourhood counts and closed-curve checks.
"""

import numpy as np
import pytest

from wtl.raster import closure_violation, is_closed_contour, largest_component, neighbor_counts


@pytest.mark.unit
class TestNeighborCounts:
    """Tests for 8-neighbour counting."""

    def test_isolated_and_full(self):
        """Test an isolated pixel has none and a 3x3 block centre has eight."""
        mask = np.zeros((5, 5), dtype=bool)
        mask[0, 0] = True
        assert neighbor_counts(mask)[0, 0] == 0
        mask[1:4, 1:4] = True
        assert neighbor_counts(mask)[2, 2] == 8


@pytest.mark.unit
class TestClosure:
    """Tests for the closed 1-pixel curve predicate."""

    def test_pruned_square_is_closed(self, square_contour):
        """Test the corner-pruned square ring passes."""
        assert square_contour.sum() == 56
        assert is_closed_contour(square_contour)

    def test_square_ring_with_corners_has_branches(self, square_mask):
        """Test a 4-boundary with sharp corners has 3-neighbour pixels."""
        ring = square_mask.copy()
        ring[9:23, 9:23] = False
        assert "branch" in closure_violation(ring)

    def test_open_curve(self, square_contour):
        """Test removing one pixel creates endpoints."""
        broken = square_contour.copy()
        broken[8, 15] = False
        assert "endpoint" in closure_violation(broken)

    def test_two_loops(self, square_contour):
        """Test two disjoint rings are two components."""
        both = np.concatenate([square_contour, square_contour], axis=1)
        assert "components" in closure_violation(both)

    def test_empty(self):
        """Test an empty mask is not a contour."""
        assert closure_violation(np.zeros((4, 4), dtype=bool)) == "mask is empty"


@pytest.mark.unit
class TestLargestComponent:
    """Tests for keeping the largest 8-connected component."""

    def test_keeps_largest(self):
        """Test the smaller blob is dropped."""
        mask = np.zeros((10, 10), dtype=bool)
        mask[0:2, 0:2] = True
        mask[5:9, 5:9] = True
        kept = largest_component(mask)
        assert kept.sum() == 16
        assert not kept[0, 0]
