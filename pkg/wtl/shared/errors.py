"""
Error hierarchy for the contour pipeline.
Each error class carries the process exit code the CLI reports for it.
"""

from typing import Optional


class WtlError(Exception):
    """Base class for all pipeline errors."""

    exit_code: int = 1


class InvalidArgumentError(WtlError, ValueError):
    """An argument violates an operation's precondition."""

    exit_code = 2


class InputOutputError(WtlError, OSError):
    """A file could not be read or written."""

    exit_code = 3

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.path = path


class FormatError(WtlError, ValueError):
    """A file exists but its content does not match the expected format."""

    exit_code = 4


class NoClosureError(WtlError):
    """The closing-threshold search reached zero without connecting the cut."""

    exit_code = 5


class NoLineError(WtlError):
    """No straight line could be detected in the contour map."""

    exit_code = 6


class InvalidGroundTruthError(WtlError, ValueError):
    """A ground-truth contour is not a single closed 1 pixel wide curve."""

    exit_code = 7


class CutFailureError(WtlError):
    """The contour could not be opened at the detected line."""

    exit_code = 8


class NotClosedError(WtlError):
    """Thinning and cleaning did not leave a single closed curve."""

    exit_code = 8


class FillFailureError(WtlError):
    """A closed contour could not be filled into a segmentation mask."""

    exit_code = 8


class EmptyResultError(WtlError):
    """A stage produced nothing to work with (for example no tracer seeds)."""

    exit_code = 8


class NumericFailureError(WtlError):
    """Non-finite values appeared inside the network."""

    exit_code = 8

    def __init__(self, message: str, layer: Optional[str] = None) -> None:
        super().__init__(message)
        self.layer = layer


class StageError(WtlError):
    """
    A pipeline stage failed.
    Keeps the exit code of the underlying error and names the stage.
    """

    def __init__(self, stage: str, cause: WtlError) -> None:
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code
