"""
The direction CNN architecture.

    Input            13x13x4
    Conv1 BN ReLU    3x3x4x64      -> 13x13x64
    Conv2 BN ReLU MP 3x3x64x128    -> 6x6x128
    Conv3 BN ReLU MP 3x3x128x256   -> 3x3x256
    Conv4 BN ReLU    3x3x256x512   -> 3x3x512
    Conv5 BN ReLU    3x3x512x1024  -> 1x1x1024  (no padding)
    FC               1024 -> 1

A width divisor k scales every hidden channel count by 1/k for fast tests.
"""

from pydantic import BaseModel, ConfigDict, Field, field_validator

BASE_CHANNELS = (64, 128, 256, 512, 1024)
INPUT_CHANNELS = 4
INPUT_SIZE = 13
KERNEL = 3
CONV_LAYERS = 5
POOLED_LAYERS = frozenset({2, 3})
UNPADDED_LAYERS = frozenset({5})

BN_TENSORS = ("gamma", "beta", "running_mean", "running_var")
BUFFER_SUFFIXES = ("running_mean", "running_var")


class CnnArchitecture(BaseModel):
    """Layer dimensions of the direction CNN."""

    model_config = ConfigDict(frozen=True)

    width_divisor: int = Field(default=1, ge=1, description="Hidden channel divisor")

    @field_validator("width_divisor")
    @classmethod
    def _divides_channels(cls, value: int) -> int:
        if BASE_CHANNELS[0] % value != 0:
            raise ValueError(f"width divisor must divide {BASE_CHANNELS[0]}, got {value}")
        return value

    @property
    def channels(self) -> tuple[int, ...]:
        """Channel counts from the input through conv5."""
        return (INPUT_CHANNELS,) + tuple(c // self.width_divisor for c in BASE_CHANNELS)

    def tensor_shapes(self) -> dict[str, tuple[int, ...]]:
        """All tensors in their fixed on-disk order."""
        shapes: dict[str, tuple[int, ...]] = {}
        ch = self.channels
        for i in range(1, CONV_LAYERS + 1):
            c_in, c_out = ch[i - 1], ch[i]
            shapes[f"conv{i}.weight"] = (KERNEL, KERNEL, c_in, c_out)
            shapes[f"conv{i}.bias"] = (c_out,)
            for suffix in BN_TENSORS:
                shapes[f"bn{i}.{suffix}"] = (c_out,)
        shapes["fc.weight"] = (ch[-1],)
        shapes["fc.bias"] = (1,)
        return shapes

    def output_shapes(self) -> list[tuple[int, ...]]:
        """Per-sample activation shape after each of conv1..conv5 and the FC layer."""
        shapes = []
        size = INPUT_SIZE
        for i in range(1, CONV_LAYERS + 1):
            if i in UNPADDED_LAYERS:
                size -= KERNEL - 1
            if i in POOLED_LAYERS:
                size //= 2
            shapes.append((size, size, self.channels[i]))
        shapes.append((1,))
        return shapes


def is_buffer(name: str) -> bool:
    """True for BatchNorm running statistics, which SGD does not update."""
    return name.endswith(BUFFER_SUFFIXES)
