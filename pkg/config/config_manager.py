# config/config_manager.py
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from config.constants import BENCH_CONFIG_VALIDATION_SCHEMA

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = {
    "version": "1.0",
    "benchmark_dir": None,
    "profiles": [
        {"algo": "abcbs", "eps0": 10.0, "res": "never"},
        {"algo": "aecbs", "eps0": 10.0, "res": "1", "cic": True},
    ]
}


class ConfigManager:
    """
    Bench profile file. A missing file is created with defaults; an unreadable
    one falls back to in-memory defaults. Profiles are validated against
    BENCH_CONFIG_VALIDATION_SCHEMA on load.
    """

    def __init__(self, config_path: str = "bench_config.json"):
        self.config_path = Path(config_path)
        self.config_data: Optional[Dict[str, Any]] = None

        if not self._load_config():
            logger.warning("Bench configuration loaded from defaults")

    def _load_config(self) -> bool:
        """
        Returns:
            bool: True if loaded from file, False if using defaults
        """
        if not self.config_path.exists():
            logger.info(f"Config file not found: {self.config_path}")
            if not self._create_default_config():
                return self._fallback_to_defaults("config file not found")

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                self.config_data = json.load(f)
            if not isinstance(self.config_data, dict):
                return self._fallback_to_defaults("top level is not an object")

            self._validate_all_profiles()
            logger.info(f"Config loaded from {self.config_path} "
                        f"(version {self.config_data.get('version', 'unknown')})")
            return True

        except json.JSONDecodeError as e:
            logger.error(f"Invalid JSON in config: {e}")
            return self._fallback_to_defaults("invalid JSON")

        except OSError as e:
            logger.error(f"Error loading config: {e}")
            return self._fallback_to_defaults(f"error reading file: {e}")

    def _fallback_to_defaults(self, reason: str) -> bool:
        logger.warning(f"Falling back to defaults: {reason}")
        self.config_data = json.loads(json.dumps(DEFAULT_CONFIG))
        self._validate_all_profiles()
        return False

    def _create_default_config(self) -> bool:
        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(DEFAULT_CONFIG, f, indent=2)
            logger.info(f"Created default config file: {self.config_path}")
            return True
        except PermissionError:
            logger.warning(f"Permission denied creating config: {self.config_path}")
            return False
        except OSError as e:
            logger.error(f"Failed to create default config: {e}")
            return False

    @property
    def benchmark_dir(self) -> Optional[str]:
        value = (self.config_data or {}).get('benchmark_dir')
        return value if isinstance(value, str) and value.strip() else None

    def get_profiles(self) -> List[Dict[str, Any]]:
        return [dict(p) for p in (self.config_data or {}).get('profiles', [])]

    def get_profile(self, algo: str) -> Optional[Dict[str, Any]]:
        """First profile for ``algo``, or None."""
        for profile in self.get_profiles():
            if profile.get('algo') == algo:
                return profile
        logger.debug(f"No profile for {algo}")
        return None

    def _validate_all_profiles(self) -> None:
        """Drop profiles without a usable algorithm; repair the other fields."""
        profiles = self.config_data.get('profiles')
        if not isinstance(profiles, list):
            logger.warning("No profiles array found in config file")
            self.config_data['profiles'] = []
            return

        validated = []
        for i, profile in enumerate(profiles):
            if not isinstance(profile, dict):
                logger.warning(f"Profile {i} is not an object - skipping")
                continue
            if not self._validate_algo_field(profile, i):
                continue
            self._validate_config_fields(profile, BENCH_CONFIG_VALIDATION_SCHEMA,
                                         profile['algo'])
            validated.append(profile)

        self.config_data['profiles'] = validated
        logger.info(f"Validated {len(validated)} bench profiles")

    def _validate_algo_field(self, profile: dict, index: int) -> bool:
        schema = BENCH_CONFIG_VALIDATION_SCHEMA['algo']
        algo = profile.get('algo')
        if not isinstance(algo, str):
            logger.warning(f"Profile {index} missing required 'algo' field - skipping")
            return False
        if algo not in schema['choices']:
            logger.warning(f"Profile {index} has unknown algo '{algo}' - skipping")
            return False
        return True

    def _validate_config_fields(self, config: dict, schema: dict, owner: str) -> None:
        """Validate and fix fields in place; invalid fields without a default are removed."""
        for field_name, field_schema in schema.items():
            if field_name == 'algo':
                continue
            validated = self._validate_single_field(config.get(field_name), field_name,
                                                    field_schema, owner)
            if validated is not None:
                config[field_name] = validated
            elif field_name in config:
                del config[field_name]

    def _validate_single_field(self, value, field_name: str, field_schema: dict, owner: str):
        expected_type = field_schema.get('type')
        default_value = field_schema.get('default')

        if value is None:
            if field_schema.get('required', False):
                logger.warning(f"{owner}: required field '{field_name}' missing, "
                               f"using default: {default_value}")
            return default_value

        # JSON has one number type; integers are fine where floats are expected
        if expected_type is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if expected_type and not isinstance(value, expected_type):
            logger.warning(f"{owner}: invalid type for '{field_name}': expected "
                           f"{expected_type.__name__}, got {type(value).__name__}, "
                           f"using default: {default_value}")
            return default_value

        if expected_type in (int, float):
            return self._validate_number_field(value, field_name, field_schema, owner,
                                               default_value)
        if expected_type is str:
            return self._validate_str_field(value, field_name, field_schema, owner,
                                            default_value)
        return value

    def _validate_number_field(self, value, field_name: str, field_schema: dict,
                               owner: str, default_value):
        min_val = field_schema.get('min')
        max_val = field_schema.get('max')
        if min_val is not None and value < min_val:
            logger.warning(f"{owner}: '{field_name}' value {value} below minimum {min_val}, "
                           f"using default: {default_value}")
            return default_value
        if max_val is not None and value > max_val:
            logger.warning(f"{owner}: '{field_name}' value {value} above maximum {max_val}, "
                           f"using default: {default_value}")
            return default_value
        return value

    def _validate_str_field(self, value: str, field_name: str, field_schema: dict,
                            owner: str, default_value):
        min_length = field_schema.get('min_length')
        if min_length is not None and len(value.strip()) < min_length:
            logger.warning(f"{owner}: '{field_name}' empty or too short, "
                           f"using default: {default_value}")
            return default_value
        choices = field_schema.get('choices')
        if choices is not None and value not in choices:
            logger.warning(f"{owner}: '{field_name}' value '{value}' not one of {choices}, "
                           f"using default: {default_value}")
            return default_value
        return value
