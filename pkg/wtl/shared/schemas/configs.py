"""
Configuration models for every pipeline stage.
All models are frozen; the CLI builds them from Settings, library callers
construct them directly or use the defaults.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class CompletionConfig(BaseModel):
    """Seeding, stepping and culling parameters of the contour completion."""

    model_config = ConfigDict(frozen=True)

    seed_threshold: float = Field(
        default=0.7, ge=0.0, le=1.0, description="Soft-map threshold for seed extraction"
    )
    checker_cell: int = Field(default=8, ge=1, description="Checkerboard cell size in pixels")
    step_probabilities: tuple[float, float, float] = Field(
        default=(0.87, 0.12, 0.01), description="Probabilities of pixelsteps 1, 2 and 3"
    )
    bad_prob_threshold: float = Field(
        default=0.1, ge=0.0, le=1.0, description="Minimum 3x3 soft-map maximum to stay alive"
    )
    loop_grace: int = Field(
        default=5, ge=0, description="Most recent path pixels ignored by the loop test"
    )
    max_steps_per_tracer: Optional[int] = Field(
        default=None, ge=1, description="Hard step cap per tracer (None: 4*(h+w))"
    )
    min_fragment_length: int = Field(
        default=4, ge=2, description="Shortest skeleton fragment that spawns tracers"
    )
    seed_lookback: int = Field(
        default=3, ge=1, description="Fragment pixels walked inward to orient a seed"
    )
    rng_seed: int = Field(default=0, ge=0, description="Seed of the step-size draws")
    threads: int = Field(default=1, ge=1, description="Worker threads for patch extraction")

    @field_validator("step_probabilities")
    @classmethod
    def _probabilities_sum_to_one(
        cls, value: tuple[float, float, float]
    ) -> tuple[float, float, float]:
        if any(p < 0.0 for p in value) or abs(sum(value) - 1.0) > 1e-9:
            raise ValueError(f"step probabilities must be >= 0 and sum to 1, got {value}")
        return value

    def step_cap(self, height: int, width: int) -> int:
        """Resolve the per-tracer step cap for an image size."""
        if self.max_steps_per_tracer is not None:
            return self.max_steps_per_tracer
        return 4 * (height + width)


class BinarizeConfig(BaseModel):
    """Parameters of the contour binarization."""

    model_config = ConfigDict(frozen=True)

    th_low: float = Field(
        default=0.2, gt=0.0, lt=1.0, description="Broad pre-binarization threshold"
    )
    delta_th: float = Field(
        default=1.0 / 255.0, gt=0.0, lt=1.0, description="Threshold decrement of the closing search"
    )
    rho_resolution: float = Field(default=1.0, gt=0.0, description="Hough rho bin size (px)")
    theta_resolution: float = Field(default=1.0, gt=0.0, description="Hough theta bin size (deg)")
    gap_tolerance: int = Field(
        default=5, ge=0, description="Largest gap (px) bridged inside the longest line"
    )
    line_tolerance: float = Field(
        default=1.0, gt=0.0, description="Max distance (px) of a pixel from the peak line"
    )
    spur_prune_cap: int = Field(default=50, ge=1, description="Iteration cap of spur peeling")
    flank_search_rows: int = Field(
        default=10, ge=0, description="Rows searched around the line for the flanking pixels"
    )
    cut_half_height: Optional[int] = Field(
        default=10, ge=0, description="Rows zeroed on each side of the line (None: full column)"
    )
    closure_retries: int = Field(
        default=8, ge=0, description="Lower thresholds tried when cleaning does not close"
    )
    open_line_threshold: float = Field(
        default=0.25, ge=0.0, le=1.0, description="Closing thresholds below this are 'open lines'"
    )


class TrainConfig(BaseModel):
    """Hyperparameters of the direction CNN training."""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.01, gt=0.0, description="SGD learning rate")
    momentum: float = Field(default=0.9, ge=0.0, lt=1.0, description="SGD momentum coefficient")
    batch_size: int = Field(default=64, ge=1, description="Mini-batch size")
    epochs: int = Field(default=30, ge=1, description="Number of epochs")
    label_scale: float = Field(
        default=180.0, gt=0.0, description="Divisor mapping degrees to the [-1, 1] target"
    )
    rng_seed: int = Field(default=0, ge=0, description="Seed for init and shuffling")
    width_divisor: int = Field(
        default=1, ge=1, description="Channel divisor of the architecture (1 = full width)"
    )
    bn_momentum: float = Field(
        default=0.1, gt=0.0, le=1.0, description="BatchNorm running-statistics momentum"
    )
    bn_epsilon: float = Field(default=1e-5, gt=0.0, description="BatchNorm epsilon")


class LabelConfig(BaseModel):
    """Training-label generation parameters."""

    model_config = ConfigDict(frozen=True)

    labels_per_image: int = Field(default=1000, ge=1, description="Labels drawn per scene")
    validation_fraction: float = Field(
        default=0.1, ge=0.0, lt=1.0, description="Share of records held out for validation"
    )
    jitter_probability: float = Field(
        default=0.5, ge=0.0, le=1.0, description="Chance to displace cp beside the contour"
    )
    lookahead: int = Field(default=3, ge=1, description="Chain pixels followed per direction")
    rng_seed: int = Field(default=0, ge=0, description="Seed of the label sampling")
    threads: int = Field(default=1, ge=1, description="Scenes processed in parallel")


class SceneParams(BaseModel):
    """Parameters of the synthetic ship-like scene generator."""

    model_config = ConfigDict(frozen=True)

    height: int = Field(default=256, ge=48, description="Image height in pixels")
    width: int = Field(default=256, ge=48, description="Image width in pixels")
    complexity: int = Field(default=2, ge=0, le=6, description="Superstructure block count")
    antennas: int = Field(default=1, ge=0, le=4, description="Thin mast-like appendages")
    noise_level: float = Field(
        default=0.05, ge=0.0, le=1.0, description="Upper bound of uniform soft-map noise"
    )
    gap_count: int = Field(
        default=2, ge=0, description="Weak 3-8 px contour segments in the soft map"
    )
