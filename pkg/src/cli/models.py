"""Command-line settings."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..config import Config
from ..models.causal import Confidence
from ..models.errors import ConfigError
from ..models.results import CombinationMode


class OutputFormat(str, Enum):
    """How command results are written to standard output."""
    TABLE = "table"
    CANONICAL = "canonical"


class CliConfig(BaseModel):
    """Effective settings for one command: flags over environment over config.yaml over defaults."""

    model_config = ConfigDict(frozen=True)

    store_path: Path = Field(..., description="Event log file")
    output_format: OutputFormat = Field(OutputFormat.TABLE)
    confidence_policy: str = Field("latest", description="latest or noisy_or")
    snapshot_cache_size: int = Field(16, ge=1)
    theta: float = Field(0.9, gt=0.0, lt=1.0, description="Contradiction threshold")
    kappa_floor: Confidence = Field(0.3, description="Audit floor for trustworthy sources")
    max_partition_depth: int = Field(3, ge=1)
    default_depth: int = Field(3, ge=0)
    combination_mode: CombinationMode = Field(CombinationMode.NOISY_OR)
    force_bruteforce: bool = Field(False)

    @classmethod
    def from_config(cls, config: Config, overrides: Optional[Dict[str, Any]] = None) -> "CliConfig":
        """Build from a Config, letting non-None ``overrides`` win."""
        conflict = config.get_conflict_config()
        causal = config.get_causal_config()
        values: Dict[str, Any] = {
            "store_path": config.get_store_path(),
            "output_format": config.get_output_format(),
            "confidence_policy": config.get_confidence_policy(),
            "snapshot_cache_size": config.get_snapshot_cache_size(),
            "theta": conflict.get("theta", 0.9),
            "kappa_floor": conflict.get("kappa_floor", 0.3),
            "max_partition_depth": conflict.get("max_partition_depth", 3),
            "default_depth": causal.get("default_depth", 3),
            "combination_mode": causal.get("combination_mode", "noisy_or"),
            "force_bruteforce": config.get_force_bruteforce(),
        }
        values.update({key: value for key, value in (overrides or {}).items() if value is not None})

        try:
            settings = cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            raise ConfigError(f"{'.'.join(str(p) for p in first['loc'])}: {first['msg']}") from e

        parent = settings.store_path.expanduser().resolve().parent
        if not parent.is_dir():
            raise ConfigError(f"store directory {parent} does not exist")
        return settings

    def store_options(self) -> Dict[str, Any]:
        return {"confidence_policy": self.confidence_policy, "snapshot_cache_size": self.snapshot_cache_size}
