"""
Run configuration using pydantic-settings.
Resolution order: defaults <- config file (KEY=value) <- environment <- flags.
"""

import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from wtl.shared.errors import InputOutputError
from wtl.shared.schemas.configs import (
    BinarizeConfig,
    CompletionConfig,
    LabelConfig,
    SceneParams,
    TrainConfig,
)
from wtl.shared.schemas.tracing import PredictorKind


class Settings(BaseSettings):
    """
    Fully resolved run configuration.
    Every tunable of every stage config is reachable as a WTL_* key.
    """

    model_config = SettingsConfigDict(
        env_prefix="WTL_",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        env_parse_none_str="none",
    )

    # Run
    log: str = Field(default="INFO", description="Logging level")
    log_json: bool = Field(default=False, description="Emit JSON log lines")
    seed: int = Field(default=0, ge=0, description="Global RNG seed")
    threads: int = Field(default=1, ge=1, description="Worker cap for parallel sections")
    predictor: PredictorKind = Field(default=PredictorKind.RIDGE, description="Direction predictor")

    # Completion
    seed_threshold: float = Field(default=0.7, description="Soft-map seeding threshold")
    checker_cell: int = Field(default=8, description="Checkerboard cell size")
    step_probabilities: tuple[float, float, float] = Field(
        default=(0.87, 0.12, 0.01), description="Pixelstep 1/2/3 probabilities"
    )
    bad_prob_threshold: float = Field(default=0.1, description="Bad-location threshold")
    loop_grace: int = Field(default=5, description="Loop test grace window")
    max_steps_per_tracer: Optional[int] = Field(default=None, description="Step cap per tracer")
    min_fragment_length: int = Field(default=4, description="Shortest seeding fragment")
    seed_lookback: int = Field(default=3, description="Fragment pixels walked to orient a seed")

    # Binarization
    th_low: float = Field(default=0.2, description="Broad pre-binarization threshold")
    delta_th: float = Field(default=1.0 / 255.0, description="Closing search decrement")
    rho_resolution: float = Field(default=1.0, description="Hough rho resolution (px)")
    theta_resolution: float = Field(default=1.0, description="Hough theta resolution (deg)")
    gap_tolerance: int = Field(default=5, description="Gap bridged inside the longest line")
    line_tolerance: float = Field(default=1.0, description="Max pixel distance from the line")
    spur_prune_cap: int = Field(default=50, description="Spur peeling iteration cap")
    flank_search_rows: int = Field(default=10, description="Flank pixel search window")
    cut_half_height: Optional[int] = Field(default=10, description="Half height of the cut")
    closure_retries: int = Field(default=8, description="Extra thresholds tried when not closed")
    open_line_threshold: float = Field(default=0.25, description="Open-line diagnosis bound")

    # Training
    learning_rate: float = Field(default=0.01, description="SGD learning rate")
    momentum: float = Field(default=0.9, description="SGD momentum")
    batch_size: int = Field(default=64, description="Mini-batch size")
    epochs: int = Field(default=30, description="Training epochs")
    label_scale: float = Field(default=180.0, description="Label scale divisor")
    width_divisor: int = Field(default=1, description="Architecture channel divisor")
    bn_momentum: float = Field(default=0.1, description="BatchNorm running-stat momentum")
    bn_epsilon: float = Field(default=1e-5, description="BatchNorm epsilon")

    # Label generation
    labels_per_image: int = Field(default=1000, description="Labels per scene")
    validation_fraction: float = Field(default=0.1, description="Validation share")
    jitter_probability: float = Field(default=0.5, description="Beside-the-contour probability")
    lookahead: int = Field(default=3, description="Chain pixels followed per label")

    # Synthetic scenes
    scene_height: int = Field(default=256, description="Scene height")
    scene_width: int = Field(default=256, description="Scene width")
    complexity: int = Field(default=2, description="Superstructure blocks")
    antennas: int = Field(default=1, description="Mast-like appendages")
    noise_level: float = Field(default=0.05, description="Soft-map noise bound")
    gap_count: int = Field(default=2, description="Weak soft-map segments")

    def completion_config(self) -> CompletionConfig:
        return CompletionConfig(
            seed_threshold=self.seed_threshold,
            checker_cell=self.checker_cell,
            step_probabilities=self.step_probabilities,
            bad_prob_threshold=self.bad_prob_threshold,
            loop_grace=self.loop_grace,
            max_steps_per_tracer=self.max_steps_per_tracer,
            min_fragment_length=self.min_fragment_length,
            seed_lookback=self.seed_lookback,
            rng_seed=self.seed,
            threads=self.threads,
        )

    def binarize_config(self) -> BinarizeConfig:
        return BinarizeConfig(
            th_low=self.th_low,
            delta_th=self.delta_th,
            rho_resolution=self.rho_resolution,
            theta_resolution=self.theta_resolution,
            gap_tolerance=self.gap_tolerance,
            line_tolerance=self.line_tolerance,
            spur_prune_cap=self.spur_prune_cap,
            flank_search_rows=self.flank_search_rows,
            cut_half_height=self.cut_half_height,
            closure_retries=self.closure_retries,
            open_line_threshold=self.open_line_threshold,
        )

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            learning_rate=self.learning_rate,
            momentum=self.momentum,
            batch_size=self.batch_size,
            epochs=self.epochs,
            label_scale=self.label_scale,
            rng_seed=self.seed,
            width_divisor=self.width_divisor,
            bn_momentum=self.bn_momentum,
            bn_epsilon=self.bn_epsilon,
        )

    def label_config(self) -> LabelConfig:
        return LabelConfig(
            labels_per_image=self.labels_per_image,
            validation_fraction=self.validation_fraction,
            jitter_probability=self.jitter_probability,
            lookahead=self.lookahead,
            rng_seed=self.seed,
            threads=self.threads,
        )

    def scene_params(self) -> SceneParams:
        return SceneParams(
            height=self.scene_height,
            width=self.scene_width,
            complexity=self.complexity,
            antennas=self.antennas,
            noise_level=self.noise_level,
            gap_count=self.gap_count,
        )

    def to_env_text(self) -> str:
        """
        Serialize as sorted WTL_KEY=value lines.
        Loading the text back as a config file reproduces this configuration.
        """
        lines = []
        for name, value in sorted(self.model_dump(mode="json").items()):
            if value is None:
                rendered = "none"
            elif isinstance(value, (list, dict)):
                rendered = json.dumps(value)
            elif isinstance(value, bool):
                rendered = "true" if value else "false"
            else:
                rendered = str(value)
            lines.append(f"WTL_{name.upper()}={rendered}")
        return "\n".join(lines) + "\n"


def load_settings(config_file: Optional[Path] = None, **overrides: Any) -> Settings:
    """
    Resolve settings from a config file plus command-line overrides.

    Args:
        config_file: Optional KEY=value file
        **overrides: Flag values; None entries are ignored

    Returns:
        Resolved Settings

    Raises:
        InputOutputError: If the config file does not exist
    """
    if config_file is not None and not Path(config_file).is_file():
        raise InputOutputError(f"config file not found: {config_file}", path=str(config_file))

    flags = {key: value for key, value in overrides.items() if value is not None}
    return Settings(_env_file=config_file, **flags)


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings from the environment only.
    Used where no config file is involved (logging bootstrap, scripts).
    """
    return Settings()
