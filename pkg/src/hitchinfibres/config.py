"""Optional TOML configuration.

Settings are read from the first ``hitchinfibres.toml`` or
``pyproject.toml`` (section ``[tool.hitchinfibres]``) found walking up
from the working directory, stopping at a project root. Values from the
file are merged over :data:`DEFAULTS`.

"""
import os
from pathlib import Path
from typing import Mapping, Optional, Union

import toml
from runcommands.util import is_project_root

from .exc import ConfigError
from .util import is_mapping, merge_dicts, printer
from .util.data import Data


__all__ = ["Config", "DEFAULTS", "find_config_file", "load_config", "read_config_file"]


DEFAULTS = {
    "sweep": {
        "genera": [2, 5],
        "d_L": [1, 6],
        "strata_genera": [2, 4],
        "degrees": [-3, 6],
        "max_dprime_degree": 4,
        "max_points": 3,
        "lattice_pairs": 200,
        "homomorphism_trials": 100,
        "embedding_trials": 50,
        "nonfibration_m": [2, 4, 6, 8, 10],
        "case2_m": [4, 8],
    },
    "roundtrip": {
        "seed": 0,
        "trials": 500,
        "max_order": 5,
    },
    "jets": {
        "padding": 2,
    },
}

CANDIDATES = ("hitchinfibres.toml", "pyproject.toml")


class Config(Data):

    """Resolved settings with attribute access, e.g. ``config.sweep.genera``."""

    @property
    def source(self) -> Optional[str]:
        return self["_source"] if "_source" in self else None


def find_config_file(config_file=None, start_dir=".") -> Optional[Path]:
    """Return the explicit file, else the nearest candidate, else None.

    Raises:
        ConfigError: an explicit file does not exist.

    """
    if config_file:
        config_file = Path(os.path.expanduser(config_file)).resolve()
        if not config_file.is_file():
            raise ConfigError(f"Config file does not exist: {config_file}")
        return config_file
    current_dir = Path(start_dir).resolve()
    while True:
        for candidate in CANDIDATES:
            path = current_dir / candidate
            if path.is_file():
                return path
        if is_project_root(current_dir) or current_dir == current_dir.parent:
            return None
        current_dir = current_dir.parent


def read_config_file(config_file: Union[str, Path]) -> dict:
    """Read and check one file; unknown sections or keys are errors."""
    try:
        with open(config_file) as fp:
            settings = toml.load(fp)
    except (OSError, toml.TomlDecodeError) as exc:
        raise ConfigError(f"Could not read config file {config_file}: {exc}") from None

    if os.path.basename(config_file) == "pyproject.toml":
        tool = settings.get("tool") or {}
        settings = tool.get("hitchinfibres") or {}

    check_settings(settings, DEFAULTS, str(config_file))
    return settings


def check_settings(settings: Mapping, defaults: Mapping, source: str, prefix=""):
    for name, value in settings.items():
        qualified = f"{prefix}{name}"
        if name not in defaults:
            raise ConfigError(f"Unknown setting in {source}: {qualified}")
        default = defaults[name]
        if is_mapping(default):
            if not is_mapping(value):
                raise ConfigError(f"Expected a table for {qualified} in {source}")
            check_settings(value, default, source, f"{qualified}.")
        elif isinstance(default, list):
            if not isinstance(value, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in value
            ):
                raise ConfigError(f"Expected a list of integers for {qualified} in {source}")
        elif isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"Expected an integer for {qualified} in {source}")


def load_config(config_file=None, start_dir=".", overrides: Mapping = None) -> Config:
    """Merge defaults, the discovered file and ``overrides``."""
    path = find_config_file(config_file, start_dir)
    file_settings = {}
    if path is not None:
        printer.debug("Config file:", path)
        file_settings = read_config_file(path)
    overrides = overrides or {}
    check_settings(overrides, DEFAULTS, "overrides")
    settings = merge_dicts(DEFAULTS, file_settings, overrides)
    config = Config(**settings)
    config["_source"] = str(path) if path is not None else None
    return config
