"""Environment configuration.

MAHLER_DEFAULT_BITS, MAHLER_DEFAULT_GUARD_BITS and MAHLER_DEFAULT_SEED
may be set in the environment or in a .env file.
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

from mahler_sums.domain.errors import InvalidParameters

# Load environment variables
load_dotenv()

DEFAULT_BITS = 256
DEFAULT_GUARD_BITS = 32
DEFAULT_SEED = 0


@dataclass(frozen=True)
class Settings:
    """Defaults used when a command line option is not given."""

    default_bits: int
    default_guard_bits: int
    default_seed: int


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameters(f"{name} must be an integer, got {raw!r}") from None


def get_settings() -> Settings:
    """Read the defaults from the environment."""
    return Settings(
        default_bits=_int_env("MAHLER_DEFAULT_BITS", DEFAULT_BITS),
        default_guard_bits=_int_env("MAHLER_DEFAULT_GUARD_BITS", DEFAULT_GUARD_BITS),
        default_seed=_int_env("MAHLER_DEFAULT_SEED", DEFAULT_SEED),
    )
