"""Run configuration: caps, seed, thread count.

Values come from code defaults, overlaid by ``resources/config.json`` (or the
file given with ``--config``), overlaid by the ``FORMSCHEME_CAP`` environment
variable for the enumeration cap.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
from typing import Optional

from .errors import InvalidInput

logger = logging.getLogger(__name__)

CAP_ENV_VAR = "FORMSCHEME_CAP"
DEFAULT_CONFIG_PATH = "resources/config.json"

DEFAULT_CONFIG: dict = {
    "enumeration_cap": 2**24,
    "pair_cap": 2**22,
    "code_cap": 2**20,
    "pairwise_code_cap": 2**12,
    "seed": 0,
    "threads": 1,
    "output_dir": "out",
}

_CAP_KEYS = ("enumeration_cap", "pair_cap", "code_cap", "pairwise_code_cap")

_active: Optional[dict] = None


def load_config(path: str | Path | None = None) -> dict:
    cfg = dict(DEFAULT_CONFIG)
    if path is not None:
        path = Path(path)
        if path.exists():
            cfg.update(json.loads(path.read_text(encoding="utf-8")))
        else:
            logger.debug("config file %s not found, using defaults", path)

    env_cap = os.environ.get(CAP_ENV_VAR)
    if env_cap:
        try:
            cfg["enumeration_cap"] = int(env_cap)
        except ValueError as e:
            raise InvalidInput(f"{CAP_ENV_VAR} must be an integer, got {env_cap!r}") from e

    for key in _CAP_KEYS:
        if int(cfg[key]) <= 0:
            raise InvalidInput(f"{key} must be positive, got {cfg[key]}")
        cfg[key] = int(cfg[key])
    if int(cfg["threads"]) < 1:
        raise InvalidInput(f"threads must be at least 1, got {cfg['threads']}")
    return cfg


def configure(cfg: dict) -> None:
    """Install ``cfg`` as the process-wide settings."""
    global _active
    _active = dict(cfg)


def settings() -> dict:
    global _active
    if _active is None:
        _active = load_config(None)
    return _active


def cap(name: str = "enumeration_cap", override: Optional[int] = None) -> int:
    if override is not None:
        return int(override)
    return int(settings()[name])


def threads(override: Optional[int] = None) -> int:
    if override is not None:
        return max(1, int(override))
    return max(1, int(settings()["threads"]))
