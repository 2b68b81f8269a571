"""Tests for configuration loading and error exit codes."""

import json
import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from formscheme import config
from formscheme.errors import (
    CapExceeded,
    ClassificationInconsistency,
    FieldError,
    FormSchemeError,
    InvalidInput,
    exit_code_for,
)


class TestLoadConfig:
    """Defaults, file overlay and environment override."""

    def test_missing_file_uses_defaults(self):
        """A path that does not exist leaves the defaults."""
        with patch.dict(os.environ, {}, clear=True):
            cfg = config.load_config("/nonexistent/config.json")
        assert cfg == config.DEFAULT_CONFIG

    def test_file_overlays_defaults(self):
        """Keys in the file replace defaults, others stay."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "config.json"
            path.write_text(json.dumps({"seed": 42, "pair_cap": 1000}), encoding="utf-8")
            with patch.dict(os.environ, {}, clear=True):
                cfg = config.load_config(path)
        assert cfg["seed"] == 42
        assert cfg["pair_cap"] == 1000
        assert cfg["code_cap"] == config.DEFAULT_CONFIG["code_cap"]

    def test_environment_cap(self):
        """FORMSCHEME_CAP overrides the enumeration cap."""
        with patch.dict(os.environ, {config.CAP_ENV_VAR: "512"}):
            assert config.load_config(None)["enumeration_cap"] == 512

    def test_bad_environment_cap(self):
        """A non-integer cap is rejected."""
        with patch.dict(os.environ, {config.CAP_ENV_VAR: "lots"}):
            with pytest.raises(InvalidInput):
                config.load_config(None)

    def test_non_positive_cap(self):
        """Caps must be positive."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "config.json"
            path.write_text(json.dumps({"code_cap": 0}), encoding="utf-8")
            with pytest.raises(InvalidInput):
                config.load_config(path)

    def test_threads_at_least_one(self):
        """threads = 0 is rejected."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "config.json"
            path.write_text(json.dumps({"threads": 0}), encoding="utf-8")
            with pytest.raises(InvalidInput):
                config.load_config(path)


class TestSettings:
    """The process-wide settings and per-call overrides."""

    def test_configure_and_override(self):
        """configure installs settings; explicit caps win."""
        saved = dict(config.settings())
        try:
            config.configure({**saved, "pair_cap": 7, "threads": 3})
            assert config.cap("pair_cap") == 7
            assert config.cap("pair_cap", 11) == 11
            assert config.threads() == 3
            assert config.threads(0) == 1
        finally:
            config.configure(saved)


class TestExitCodes:
    """Errors map to process exit codes."""

    def test_mapping(self):
        """Usage errors 1, consistency failures 2, caps 3."""
        assert exit_code_for(InvalidInput("x")) == 1
        assert exit_code_for(FieldError("x")) == 1
        assert exit_code_for(ClassificationInconsistency("x")) == 2
        assert exit_code_for(CapExceeded("x")) == 3
        assert exit_code_for(FormSchemeError("x")) == 1
