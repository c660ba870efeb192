"""
Settings file discovery and management
"""

import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from infoloss.core.errors import ContractViolation
from infoloss.core.ensembles import DEFAULT_SEED, DEFAULT_TRIALS
from infoloss.core.factory import resolve_env_vars

logger = logging.getLogger(__name__)

SETTINGS_TEMPLATE = """\
# infoloss settings
#
# Command-line flags override environment variables (INFOLOSS_SEED,
# INFOLOSS_THREADS, INFOLOSS_TRIALS), which override this file.
# Values written as ${VAR} are read from the environment.

# Master seed for sweeps, random generation, simulation and verification
seed: 20170612

# Worker count; 0 means one per core
threads: 0

# Trials per sweep cell
trials: 200

# Monte Carlo trials for `infoloss simulate`
sim_trials: 100000

# Output format for analyze/simulate/verify: text or json
format: text

"""


class ConfigManager:
    """
    Manages settings file locations with priority order:
    1. Current directory: ./config/infoloss.yaml
    2. User home: ~/.config/infoloss/infoloss.yaml
    3. Built-in defaults
    """

    DEFAULT_SETTINGS_FILE = "infoloss.yaml"

    DEFAULTS: Dict[str, Any] = {
        "seed": DEFAULT_SEED,
        "threads": 0,
        "trials": DEFAULT_TRIALS,
        "sim_trials": 100000,
        "format": "text",
    }

    ENV_OVERRIDES = {
        "seed": "INFOLOSS_SEED",
        "threads": "INFOLOSS_THREADS",
        "trials": "INFOLOSS_TRIALS",
    }

    def __init__(self):
        self.config_locations: List[Path] = [
            Path.cwd() / "config",
            Path.home() / ".config" / "infoloss",
        ]
        self._settings: Optional[Dict[str, Any]] = None

    def find_settings(self) -> Optional[Path]:
        """
        Find infoloss.yaml with priority order

        Returns:
            Path to the settings file or None if not found
        """
        for location in self.config_locations:
            settings_file = location / self.DEFAULT_SETTINGS_FILE
            if settings_file.exists():
                return settings_file
        return None

    def load_settings(self) -> Dict[str, Any]:
        """
        Read the settings file once, resolving ${ENV_VAR} values

        Raises:
            ContractViolation: If the file is not a mapping or has unknown keys
        """
        if self._settings is not None:
            return self._settings

        path = self.find_settings()
        if path is None:
            self._settings = {}
            return self._settings

        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ContractViolation(f"Settings file {path} must be a mapping")
        unknown = sorted(set(data) - set(self.DEFAULTS))
        if unknown:
            raise ContractViolation(f"Unknown setting(s) in {path}: {', '.join(unknown)}")

        logger.debug(f"Loaded settings from {path}")
        self._settings = resolve_env_vars(data)
        return self._settings

    def get(self, key: str, flag_value: Any = None) -> Any:
        """
        Effective value of a setting

        Precedence: command-line flag > environment > settings file > default.
        """
        if flag_value is not None:
            return flag_value
        env_var = self.ENV_OVERRIDES.get(key)
        if env_var and os.getenv(env_var):
            return os.getenv(env_var)
        settings = self.load_settings()
        if settings.get(key) is not None:
            return settings[key]
        return self.DEFAULTS[key]

    def init_config(self, use_user_config: bool = False, force: bool = False) -> Path:
        """
        Write the commented settings template

        Args:
            use_user_config: True uses ~/.config/infoloss, False uses ./config
            force: Overwrite an existing file

        Returns:
            Path to the written settings file

        Raises:
            FileExistsError: If the file exists and ``force`` is not set
        """
        if use_user_config:
            target_dir = Path.home() / ".config" / "infoloss"
        else:
            target_dir = Path.cwd() / "config"
        target_dir.mkdir(parents=True, exist_ok=True)

        target_file = target_dir / self.DEFAULT_SETTINGS_FILE
        if target_file.exists() and not force:
            raise FileExistsError(f"Settings file already exists: {target_file} (use --force)")

        target_file.write_text(SETTINGS_TEMPLATE, encoding="utf-8")
        self._settings = None
        return target_file

