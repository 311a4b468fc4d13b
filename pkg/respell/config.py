"""
Toolkit configuration and defaults.

Precedence, lowest first: class defaults, environment (``RESPELL_<KEY>``,
optionally from a ``.env`` file), a ``key = value`` config file, CLI flags.
"""

import logging
import os

from dotenv import dotenv_values, find_dotenv, load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")
ENV_PREFIX = "RESPELL_"

MODES = ("mixed", "defaults-only", "g2g-only")


class Config:
    """Toolkit settings. Class attributes are the defaults."""

    # Data files
    GRAPHEME_ALPHABET_FILE = os.path.join(DATA_DIR, "graphemes.txt")
    TRANSLITERATION_FILE = os.path.join(DATA_DIR, "transliteration.tsv")
    PHONE_INVENTORY_FILE = os.path.join(DATA_DIR, "phones.txt")

    # Character LM
    CHAR_LM_ORDER = 10

    # Joint-sequence alignment
    SOURCE_CAP = 2
    TARGET_CAP = 2
    EM_MAX_ITERS = 50
    EM_TOLERANCE = 1e-6
    PRUNE_THRESHOLD = 1e-4
    UNIT_PENALTY = 0.1

    # Graphone LM and decoding
    GRAPHONE_LM_ORDER = 6
    EPS_CHAIN_CAP = 2
    BEAM = 50

    # Lexicon generation
    MAX_VARIANTS = 2
    MODE = "mixed"
    JOBS = 1

    LOG_LEVEL = "INFO"

    # (minimum, maximum) for numeric knobs; None means unbounded
    RANGES = {
        "CHAR_LM_ORDER": (1, None),
        "SOURCE_CAP": (1, 4),
        "TARGET_CAP": (1, 4),
        "EM_MAX_ITERS": (1, None),
        "EM_TOLERANCE": (0.0, None),
        "PRUNE_THRESHOLD": (0.0, None),
        "UNIT_PENALTY": (1e-12, 1.0),
        "GRAPHONE_LM_ORDER": (1, None),
        "EPS_CHAIN_CAP": (0, None),
        "BEAM": (1, None),
        "MAX_VARIANTS": (1, None),
        "JOBS": (1, None),
    }

    def __init__(self, **overrides):
        self.update(overrides)

    @classmethod
    def keys(cls):
        """Names of all settings."""
        return sorted(
            name for name, value in vars(cls).items()
            if name.isupper() and name != "RANGES" and not callable(value)
        )

    def update(self, values, source="override"):
        """
        Apply a mapping of settings, coercing each to its default's type.

        Args:
            values: Mapping of key -> value; keys are case-insensitive
            source: Where the values came from, for error messages
        """
        known = set(self.keys())
        for raw_key, raw_value in values.items():
            key = raw_key.strip().upper()
            if key not in known:
                raise ConfigError(f"Unknown setting {raw_key!r} ({source})")
            setattr(self, key, self._coerce(key, raw_value, source))
        self.validate()
        return self

    def _coerce(self, key, value, source):
        default = getattr(type(self), key)
        if value is None:
            raise ConfigError(f"Setting {key} has no value ({source})")
        try:
            if isinstance(default, bool):
                if isinstance(value, str):
                    return value.strip().lower() in ("1", "true", "yes", "on")
                return bool(value)
            if isinstance(default, int):
                return int(value)
            if isinstance(default, float):
                return float(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Bad value for {key}: {value!r} ({source})") from e
        return str(value).strip()

    def validate(self):
        """Check numeric ranges and enumerated values."""
        for key, (low, high) in self.RANGES.items():
            value = getattr(self, key)
            if low is not None and value < low:
                raise ConfigError(f"{key} must be >= {low}, got {value}")
            if high is not None and value > high:
                raise ConfigError(f"{key} must be <= {high}, got {value}")
        if self.MODE not in MODES:
            raise ConfigError(f"MODE must be one of {', '.join(MODES)}, got {self.MODE!r}")

    def as_dict(self):
        return {key: getattr(self, key) for key in self.keys()}

    def alignment(self):
        """Alignment settings as an immutable value."""
        from .joint_sequence import AlignmentConfig

        return AlignmentConfig(
            source_cap=self.SOURCE_CAP,
            target_cap=self.TARGET_CAP,
            max_iters=self.EM_MAX_ITERS,
            tolerance=self.EM_TOLERANCE,
            prune_threshold=self.PRUNE_THRESHOLD,
            unit_penalty=self.UNIT_PENALTY,
        )


def env_overrides(dotenv_path=None):
    """
    Collect ``RESPELL_*`` settings from the environment.

    Args:
        dotenv_path: Optional ``.env`` file; values already in the
            environment win over it

    Returns:
        Mapping of setting name -> raw string value
    """
    load_dotenv(dotenv_path=dotenv_path or find_dotenv(usecwd=True), override=False)
    return {
        name[len(ENV_PREFIX):]: value
        for name, value in sorted(os.environ.items())
        if name.startswith(ENV_PREFIX) and name[len(ENV_PREFIX):] in Config.keys()
    }


def read_config_file(path):
    """Parse a ``key = value`` config file."""
    if not os.path.isfile(path):
        raise ConfigError(f"Config file not found: {path}")
    return dict(dotenv_values(path))


def load_config(path=None, overrides=None, use_env=True):
    """
    Build a Config from every layer.

    Args:
        path: Optional config file
        overrides: Mapping applied last (CLI flags)
        use_env: Read ``RESPELL_*`` variables and ``.env``

    Returns:
        A validated Config
    """
    config = Config()
    if use_env:
        config.update(env_overrides(), source="environment")
    if path:
        config.update(read_config_file(path), source=str(path))
        logger.debug("Loaded config file %s", path)
    if overrides:
        config.update({k: v for k, v in overrides.items() if v is not None}, source="command line")
    return config


# Global config instance
CFG = Config()
