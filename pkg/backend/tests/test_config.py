"""Tests for environment-driven settings."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from backend.src.config import ToolkitSettings, get_settings, reset_settings


class TestToolkitSettings:
    """Tests for ToolkitSettings."""

    def test_defaults(self):
        settings = get_settings()
        assert settings.threads >= 1
        assert settings.log_level == "WARNING"
        assert settings.output_dir == Path("./cloudchem-out")
        assert settings.radial_nodes == 96
        assert settings.radial_scale == 3.0

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("CLOUDCHEM_THREADS", "3")
        monkeypatch.setenv("CLOUDCHEM_LOG_LEVEL", "debug")
        monkeypatch.setenv("CLOUDCHEM_RADIAL_NODES", "128")
        reset_settings()
        settings = get_settings()
        assert settings.threads == 3
        assert settings.log_level == "DEBUG"
        assert settings.radial_nodes == 128

    def test_singleton(self):
        assert get_settings() is get_settings()

    def test_invalid_values(self, monkeypatch):
        with pytest.raises(ValidationError, match="Invalid log level"):
            ToolkitSettings(log_level="chatty")
        monkeypatch.setenv("CLOUDCHEM_THREADS", "0")
        with pytest.raises(ValidationError):
            ToolkitSettings.from_env()
