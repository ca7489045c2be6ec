"""
Test script for configuration management
Checks the derived order h, environment overrides and file round trips
"""

import logging
import sys
import os

import pytest
from pydantic import ValidationError

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.config import (
    FIELD_ENV_VAR,
    FieldConfig,
    ToolkitConfig,
    load_config,
    parse_field_spec,
    save_config,
)

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)


def test_order_is_derived():
    assert FieldConfig(characteristic=7, q=2).h == 3
    assert FieldConfig(characteristic=5, q=2).h == 4
    assert FieldConfig(characteristic=0, q=2).h is None
    assert FieldConfig().describe() == "F_7 (q = 2, h = 3)"


def test_inconsistent_field_is_rejected():
    with pytest.raises(ValidationError):
        FieldConfig(characteristic=7, q=2, h=2)
    with pytest.raises(ValidationError):
        FieldConfig(characteristic=7, q=14)
    with pytest.raises(ValidationError):
        FieldConfig(characteristic=8, q=3)


def test_parse_field_spec():
    cfg = parse_field_spec("11:2")
    assert (cfg.characteristic, cfg.q, cfg.h) == (11, 2, 10)
    assert parse_field_spec("0:2").is_rational
    with pytest.raises(ValueError):
        parse_field_spec("seven")


def test_environment_override(monkeypatch):
    monkeypatch.setenv(FIELD_ENV_VAR, "5:2")
    settings = load_config()
    assert settings.field.characteristic == 5
    assert settings.field.h == 4


def test_save_and_load(tmp_path, monkeypatch):
    monkeypatch.delenv(FIELD_ENV_VAR, raising=False)
    settings = ToolkitConfig(field=FieldConfig(characteristic=11, q=2), output_format="text")
    path = tmp_path / "formality.json"
    save_config(settings, path)
    loaded = load_config(path)
    assert loaded.field.h == 10
    assert loaded.output_format == "text"
    assert loaded.model.cap_margin == settings.model.cap_margin


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
