"""
Configuration Manager

Loads curvelab settings from YAML or JSON and merges them over the
built-in defaults, so a file only needs the keys it changes.
"""

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

logger = logging.getLogger(__name__)

POSITIVE_INTEGERS = [
    'field.max_size',
    'series.initial_precision',
    'series.max_precision',
    'series.conductor_factor',
    'curve.k_max',
    'resolve.initial_precision',
    'resolve.max_precision',
    'verification.n_max',
    'verification.r_max',
    'verification.workers',
    'output.json_indent',
]


class ConfigManager:
    """Manages configuration loading and validation."""

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize the configuration manager.

        Args:
            config_path: Path to configuration file (YAML or JSON)
        """
        self.config_path = config_path
        self.load_failed = False
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from file or return defaults."""
        config = self._default_config()
        if self.config_path and Path(self.config_path).exists():
            logger.info(f"Loading configuration from: {self.config_path}")
            self._deep_update(config, self._load_config_file(self.config_path))
        elif self.config_path:
            logger.error(f"Configuration file not found: {self.config_path}")
            self.load_failed = True
        else:
            logger.debug("Using default configuration")
        return config

    def _load_config_file(self, config_path: str) -> Dict[str, Any]:
        """Load configuration from YAML or JSON file; {} when unreadable."""
        config_file = Path(config_path)

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                if config_file.suffix.lower() in ['.yaml', '.yml']:
                    config = yaml.safe_load(f)
                elif config_file.suffix.lower() == '.json':
                    config = json.load(f)
                else:
                    raise ValueError(f"Unsupported config file format: {config_file.suffix}")
            if config is None:
                config = {}
            if not isinstance(config, dict):
                raise ValueError("top level must be a mapping")

            logger.info(f"Successfully loaded configuration from {config_path}")
            return config

        except Exception as e:
            logger.error(f"Error loading configuration from {config_path}: {e}")
            logger.info("Falling back to default configuration")
            self.load_failed = True
            return {}

    def _default_config(self) -> Dict[str, Any]:
        """Return default configuration."""
        return {
            'field': {
                'max_size': 1 << 20
            },
            'series': {
                'initial_precision': 32,
                'max_precision': 4096,
                'conductor_factor': 2
            },
            'curve': {
                'k_max': 4
            },
            'resolve': {
                'initial_precision': 24,
                'max_precision': 2048,
                'certify_precision': True
            },
            'invariants': {
                'xg_exponent': None
            },
            'surfaces': {
                'b_self_intersection': -2,
                'b_attachments': [3, 13],
                'a1_count_for_k3': 5
            },
            'verification': {
                'manifest': 'data/paper_claims.yaml',
                'n_max': 4,
                'r_max': 4,
                'workers': 1,
                'show_progress': True
            },
            'output': {
                'json_indent': 2,
                'sort_keys': True
            },
            'logging': {
                'level': 'INFO',
                'save_logs': False,
                'log_file': 'curvelab.log'
            }
        }

    def get_config(self) -> Dict[str, Any]:
        """Get the loaded configuration."""
        return self.config

    def get_section(self, section: str) -> Dict[str, Any]:
        """Get a specific configuration section."""
        return self.config.get(section, {})

    def get_value(self, key_path: str, default: Any = None) -> Any:
        """
        Get a configuration value using dot notation.

        Args:
            key_path: Dot-separated path to the configuration value (e.g., 'resolve.max_precision')
            default: Default value if key is not found

        Returns:
            Configuration value or default
        """
        keys = key_path.split('.')
        value = self.config

        for key in keys:
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default

        return value

    def update_config(self, updates: Dict[str, Any]):
        """Update configuration with new values."""
        self._deep_update(self.config, updates)

    def _deep_update(self, base_dict: Dict, update_dict: Dict):
        """Recursively update nested dictionary."""
        for key, value in update_dict.items():
            if key in base_dict and isinstance(base_dict[key], dict) and isinstance(value, dict):
                self._deep_update(base_dict[key], value)
            else:
                base_dict[key] = copy.deepcopy(value)

    def save_config(self, output_path: str):
        """Save current configuration to file."""
        output_file = Path(output_path)

        try:
            with open(output_file, 'w', encoding='utf-8') as f:
                if output_file.suffix.lower() in ['.yaml', '.yml']:
                    yaml.safe_dump(self.config, f, default_flow_style=False, indent=2)
                elif output_file.suffix.lower() == '.json':
                    json.dump(self.config, f, indent=2, ensure_ascii=False)
                else:
                    raise ValueError(f"Unsupported output format: {output_file.suffix}")

            logger.info(f"Configuration saved to: {output_path}")

        except Exception as e:
            logger.error(f"Error saving configuration to {output_path}: {e}")

    def validate_config(self) -> bool:
        """Validate the configuration structure and values."""
        if self.load_failed:
            logger.error("Configuration file could not be loaded")
            return False

        for key_path in POSITIVE_INTEGERS:
            value = self.get_value(key_path)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                logger.error(f"{key_path} must be a positive integer, got: {value!r}")
                return False

        for section in ('series', 'resolve'):
            initial = self.get_value(f"{section}.initial_precision")
            maximum = self.get_value(f"{section}.max_precision")
            if maximum < initial:
                logger.error(f"{section}.max_precision ({maximum}) is below initial_precision ({initial})")
                return False

        exponent = self.get_value('invariants.xg_exponent')
        if exponent is not None and (not isinstance(exponent, int) or exponent % 2 == 0):
            logger.error(f"invariants.xg_exponent must be null or an odd integer, got: {exponent!r}")
            return False

        attachments = self.get_value('surfaces.b_attachments')
        if not isinstance(attachments, list) or len(attachments) != 2:
            logger.error(f"surfaces.b_attachments must list two chain positions, got: {attachments!r}")
            return False

        level = str(self.get_value('logging.level', 'INFO')).upper()
        if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            logger.error(f"Unknown logging level: {level}")
            return False

        logger.debug("Configuration validation passed")
        return True
