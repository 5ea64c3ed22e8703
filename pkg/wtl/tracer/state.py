"""
Tracer state and path records.
"""

from dataclasses import dataclass, field
from typing import Iterable

from wtl.raster.geometry import PixelCoord, wrap_angle
from wtl.shared.schemas import ExitReason, TraceOrigin


@dataclass(frozen=True)
class TracerState:
    """Center pixel and heading of one tracer."""

    cp: PixelCoord
    heading: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "cp", PixelCoord(int(self.cp[0]), int(self.cp[1])))
        object.__setattr__(self, "heading", wrap_angle(self.heading))

    def mirrored(self, width: int) -> "TracerState":
        """The same state seen in the horizontally mirrored image."""
        return TracerState(PixelCoord(self.cp.row, width - 1 - self.cp.col), 180.0 - self.heading)


@dataclass
class PathTrace:
    """Ordered pixels visited by a tracer; consecutive pixels are 8-adjacent."""

    pixels: list[PixelCoord] = field(default_factory=list)
    origin: TraceOrigin = TraceOrigin.CLOCKWISE
    exit_reason: ExitReason = ExitReason.COMPLETED

    def __len__(self) -> int:
        return len(self.pixels)

    def extend(self, pixels: Iterable[PixelCoord]) -> None:
        self.pixels.extend(pixels)

    def mirrored(self, width: int) -> "PathTrace":
        return PathTrace(
            [PixelCoord(p.row, width - 1 - p.col) for p in self.pixels],
            origin=self.origin,
            exit_reason=self.exit_reason,
        )


def path_to_csv(path: PathTrace) -> str:
    """Render a path as CSV with header index,row,col."""
    lines = ["index,row,col"]
    lines.extend(f"{i},{p.row},{p.col}" for i, p in enumerate(path.pixels))
    return "\n".join(lines) + "\n"

