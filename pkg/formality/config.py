"""
Formality Toolkit Configuration Management

Handles configuration settings for all components using Pydantic models.
"""

import json
import logging
import os
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .field_linalg import Field as ExactField, multiplicative_order

logger = logging.getLogger(__name__)

FIELD_ENV_VAR = "FORMALITY_FIELD"
LOG_LEVEL_ENV_VAR = "FORMALITY_LOG_LEVEL"


@lru_cache(maxsize=None)
def _exact_field(characteristic: int) -> ExactField:
    return ExactField(characteristic)


class FieldConfig(BaseModel):
    """Coefficient field and Frobenius eigenbase."""
    model_config = ConfigDict(frozen=True)

    characteristic: int = Field(default=7, description="Prime l, or 0 for exact rationals")
    q: int = Field(default=2, description="Frobenius eigenbase")
    h: Optional[int] = Field(default=None, description="Order of q mod l (derived)")

    @model_validator(mode="before")
    @classmethod
    def _derive_order(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        data = dict(data)
        characteristic = int(data.get("characteristic", 7))
        q = int(data.get("q", 2))
        if q < 1:
            raise ValueError(f"q must be a positive integer, got {q}")
        if characteristic == 0:
            data["h"] = None
            return data
        field = _exact_field(characteristic)
        if q % characteristic == 0:
            raise ValueError(f"l = {characteristic} divides q = {q}")
        h = multiplicative_order(q, field.characteristic)
        supplied = data.get("h")
        if supplied is not None and int(supplied) != h:
            raise ValueError(f"h = {supplied} disagrees with the order {h} of {q} mod {characteristic}")
        data["h"] = h
        return data

    @property
    def field(self) -> ExactField:
        return _exact_field(self.characteristic)

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def describe(self) -> str:
        if self.is_rational:
            return f"Q (q = {self.q})"
        return f"F_{self.characteristic} (q = {self.q}, h = {self.h})"


class MasseyConfig(BaseModel):
    """Defining-system enumeration limits."""
    max_param_dim_finite: int = Field(default=12, description="Parameter dimension cap over F_l")
    max_param_dim_rational: int = Field(default=6, description="Parameter dimension cap over Q")
    rational_height: int = Field(default=1, description="Coefficient grid {-H..H} over Q")
    max_systems: int = Field(default=200000, description="Maximum enumerated defining systems")


class ModelConfig(BaseModel):
    """Free model construction settings."""
    cap_margin: int = Field(default=2, description="Materialized degrees beyond N")
    shortcut_zero_differential: bool = Field(
        default=True, description="Use the identity witness when d = 0"
    )
    integer_weight_degree: int = Field(
        default=6, description="Degrees verified when weights are integers"
    )


class RandomConfig(BaseModel):
    """Default sizes for randomized generators."""
    max_degree: int = Field(default=4, description="Top degree of random complexes")
    max_block: int = Field(default=2, description="Largest planted block")
    max_pairs: int = Field(default=3, description="Acyclic pairs per random complex")


class ToolkitConfig(BaseModel):
    """Main toolkit configuration."""

    # Component configurations
    field: FieldConfig = Field(default_factory=FieldConfig)
    massey: MasseyConfig = Field(default_factory=MasseyConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    random: RandomConfig = Field(default_factory=RandomConfig)

    # General settings
    log_level: str = Field(default="INFO", description="Logging level")
    output_format: Literal["json", "text"] = Field(default="json", description="Report format")


# Global configuration instance
config = ToolkitConfig()


def parse_field_spec(spec: str) -> FieldConfig:
    """Parse an "l:q" string such as "7:2" ("0:2" selects Q)."""
    try:
        characteristic, q = (int(part) for part in spec.split(":"))
    except ValueError as e:
        raise ValueError(f"field spec must look like 'l:q', got {spec!r}") from e
    return FieldConfig(characteristic=characteristic, q=q)


def load_config(config_path: Optional[Path] = None) -> ToolkitConfig:
    """Load configuration from file, then apply environment overrides."""
    loaded = ToolkitConfig()
    if config_path and config_path.exists():
        loaded = ToolkitConfig.model_validate_json(config_path.read_text())
        logger.info(f"Loaded configuration from {config_path}")

    updates = {}
    field_spec = os.environ.get(FIELD_ENV_VAR)
    if field_spec:
        updates["field"] = parse_field_spec(field_spec)
        logger.debug(f"{FIELD_ENV_VAR} selects {updates['field'].describe()}")
    log_level = os.environ.get(LOG_LEVEL_ENV_VAR)
    if log_level:
        updates["log_level"] = log_level.upper()
    return loaded.model_copy(update=updates) if updates else loaded


def save_config(config_obj: ToolkitConfig, config_path: Path):
    """Save configuration to file."""
    payload = json.loads(config_obj.model_dump_json())
    config_path.write_text(json.dumps(payload, indent=2, sort_keys=True))
    logger.info(f"Saved configuration to {config_path}")
