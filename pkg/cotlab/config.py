"""
Configuration for cotlab.
This module provides the layered settings used by the algebra kernels and the suite runner.
"""

import os
import copy
import json
import logging
import platform
import threading
from enum import Enum
from typing import Any, Dict, Optional, Union

logger = logging.getLogger(__name__)

MAX_CARD_ENV = "COTLAB_MAX_CARD"


class Thoroughness(Enum):
    """How hard the checkers look."""
    QUICK = "quick"
    STANDARD = "standard"
    EXHAUSTIVE = "exhaustive"


class LabConfig:
    """Configuration manager for enumeration limits and trial budgets."""

    def __init__(self, custom_config_file: Optional[str] = None):
        """
        Initialize the configuration manager.

        Args:
            custom_config_file: Path to a JSON file with overrides (optional)
        """
        self.config_path = custom_config_file or self._get_config_path()
        self.configs = self._load_default_configs()
        self.custom_configs = self._load_custom_configs()
        self._merge_configs(self.configs, self.custom_configs)
        self._apply_environment()

    def _get_config_path(self) -> str:
        """Get the path of the user configuration file."""
        if platform.system() == "Windows":
            base_dir = os.path.join(os.environ.get("APPDATA", ""), "cotlab")
        else:  # Linux/macOS
            base_dir = os.path.join(os.path.expanduser("~"), ".config", "cotlab")
        return os.path.join(base_dir, "config.json")

    def _load_default_configs(self) -> Dict[str, Any]:
        """Load the built-in defaults for limits and per-level trial counts."""
        limits = {
            "max_modulus": 1 << 16,  # largest n accepted for Z/nZ
            "max_card": 4096,        # elementwise enumeration bound
            "max_arity": 5,          # cube constructions refuse larger n
            "default_arity": 3,
        }

        # Trial budgets per thoroughness level
        trials = {
            Thoroughness.QUICK.value: {
                "random_trials": 10,
                "lemma_trials": 10,
                "complex_samples": 40,
                "hom_sample_cap": 64,
                "universe_max_factors": 1,
            },
            Thoroughness.STANDARD.value: {
                "random_trials": 100,
                "lemma_trials": 50,
                "complex_samples": 200,
                "hom_sample_cap": 256,
                "universe_max_factors": 2,
            },
            Thoroughness.EXHAUSTIVE.value: {
                "random_trials": 250,
                "lemma_trials": 100,
                "complex_samples": 400,
                "hom_sample_cap": 1024,
                "universe_max_factors": 2,
            },
        }

        suite = {
            "workers": 4,
            "thoroughness": Thoroughness.STANDARD.value,
        }

        return {
            "limits": limits,
            "trials": trials,
            "suite": suite,
            "version": "1.0.0",
        }

    def _load_custom_configs(self) -> Dict[str, Any]:
        """Load custom configurations from disk."""
        try:
            if os.path.exists(self.config_path):
                with open(self.config_path, 'r') as f:
                    return json.load(f)
            return {}
        except Exception as e:
            logger.error(f"Error loading custom configuration {self.config_path}: {e}")
            return {}

    def _apply_environment(self) -> None:
        """Apply environment overrides (COTLAB_MAX_CARD)."""
        raw = os.environ.get(MAX_CARD_ENV)
        if not raw:
            return
        try:
            value = int(raw)
            if value < 1:
                raise ValueError("must be positive")
            self.configs["limits"]["max_card"] = value
            logger.debug(f"{MAX_CARD_ENV} overrides max_card to {value}")
        except ValueError as e:
            logger.warning(f"Ignoring invalid {MAX_CARD_ENV}={raw!r}: {e}")

    def save_custom_config(self, config_data: Dict[str, Any]) -> bool:
        """Save custom configurations to disk."""
        try:
            os.makedirs(os.path.dirname(self.config_path), exist_ok=True)
            with open(self.config_path, 'w') as f:
                json.dump(config_data, f, indent=2)
            self.custom_configs = config_data
            self._merge_configs(self.configs, config_data)
            return True
        except Exception as e:
            logger.error(f"Error saving custom configuration: {e}")
            return False

    def get_config_for_level(self, level: Union[str, Thoroughness, None] = None) -> Dict[str, Any]:
        """
        Get the trial budget for a thoroughness level.

        Args:
            level: The thoroughness level (quick, standard, exhaustive); defaults to the suite setting

        Returns:
            Dictionary of trial parameters
        """
        if level is None:
            level = self.configs["suite"]["thoroughness"]
        if isinstance(level, Thoroughness):
            level_str = level.value
        else:
            try:
                level_str = Thoroughness(level).value
            except ValueError:
                logger.warning(f"Invalid thoroughness: {level}. Using STANDARD.")
                level_str = Thoroughness.STANDARD.value
        return copy.deepcopy(self.configs["trials"][level_str])

    @property
    def limits(self) -> Dict[str, int]:
        return self.configs["limits"]

    @property
    def max_card(self) -> int:
        return int(self.configs["limits"]["max_card"])

    @property
    def max_modulus(self) -> int:
        return int(self.configs["limits"]["max_modulus"])

    @property
    def max_arity(self) -> int:
        return int(self.configs["limits"]["max_arity"])

    @property
    def workers(self) -> int:
        return int(self.configs["suite"]["workers"])

    def _merge_configs(self, base_config: Dict[str, Any], override_config: Dict[str, Any]) -> None:
        """Merge override_config into base_config, modifying base_config."""
        for key, value in override_config.items():
            if key in base_config and isinstance(base_config[key], dict) and isinstance(value, dict):
                self._merge_configs(base_config[key], value)
            else:
                base_config[key] = value


_active_config: Optional[LabConfig] = None
_config_lock = threading.Lock()


def get_config() -> LabConfig:
    """Return the process-wide configuration, loading it on first use."""
    global _active_config
    with _config_lock:
        if _active_config is None:
            _active_config = LabConfig()
        return _active_config


def set_config(config: Optional[LabConfig]) -> None:
    """Install a configuration (None resets to lazily loaded defaults)."""
    global _active_config
    with _config_lock:
        _active_config = config
