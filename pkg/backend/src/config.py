"""Environment-driven toolkit settings."""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

logger = logging.getLogger(__name__)

LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}


class ToolkitSettings(BaseModel):
    """Process-wide defaults, read from ``CLOUDCHEM_*`` variables."""

    model_config = {"frozen": True}

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "WARNING"
    output_dir: Path = Path("./cloudchem-out")
    radial_nodes: int = Field(96, ge=8)
    radial_scale: float = Field(3.0, gt=0.0)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"Invalid log level: {v}")
        return level

    @classmethod
    def from_env(cls) -> "ToolkitSettings":
        """Build settings from the environment, loading ``.env`` if present."""
        load_dotenv()
        values = {}
        env_map = {
            "CLOUDCHEM_THREADS": "threads",
            "CLOUDCHEM_LOG_LEVEL": "log_level",
            "CLOUDCHEM_OUTPUT_DIR": "output_dir",
            "CLOUDCHEM_RADIAL_NODES": "radial_nodes",
            "CLOUDCHEM_RADIAL_SCALE": "radial_scale",
        }
        for env_name, field_name in env_map.items():
            raw = os.getenv(env_name)
            if raw is not None and raw.strip():
                values[field_name] = raw.strip()
        return cls(**values)


_settings: Optional[ToolkitSettings] = None


def get_settings() -> ToolkitSettings:
    """Get the global toolkit settings instance."""
    global _settings
    if _settings is None:
        _settings = ToolkitSettings.from_env()
        logger.debug(f"Loaded settings: {_settings.model_dump()}")
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None
