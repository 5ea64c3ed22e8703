"""
Unit tests for the error hierarchy and its exit codes.
"""

import pytest

from wtl.shared.errors import (
    CutFailureError,
    EmptyResultError,
    FillFailureError,
    FormatError,
    InputOutputError,
    InvalidArgumentError,
    InvalidGroundTruthError,
    NoClosureError,
    NoLineError,
    NotClosedError,
    NumericFailureError,
    StageError,
    WtlError,
)


@pytest.mark.unit
class TestExitCodes:
    """Tests for the CLI exit code carried by each error."""

    @pytest.mark.parametrize(
        "error, code",
        [
            (WtlError, 1),
            (InvalidArgumentError, 2),
            (InputOutputError, 3),
            (FormatError, 4),
            (NoClosureError, 5),
            (NoLineError, 6),
            (InvalidGroundTruthError, 7),
            (CutFailureError, 8),
            (NotClosedError, 8),
            (FillFailureError, 8),
            (EmptyResultError, 8),
            (NumericFailureError, 8),
        ],
    )
    def test_codes(self, error, code):
        """Test each class maps to its documented code."""
        assert error("x").exit_code == code

    def test_stage_error_keeps_cause_code(self):
        """Test a stage failure reports the code of its cause."""
        cause = NoClosureError("never connects")
        error = StageError("threshold", cause)
        assert error.exit_code == 5
        assert error.stage == "threshold"
        assert error.cause is cause
        assert "threshold" in str(error) and "never connects" in str(error)

    def test_builtin_bases(self):
        """Test errors stay catchable as the matching builtin exceptions."""
        assert isinstance(InputOutputError("x", path="p"), OSError)
        assert isinstance(InvalidArgumentError("x"), ValueError)
        assert isinstance(FormatError("x"), ValueError)
        assert NumericFailureError("x", layer="fc").layer == "fc"
