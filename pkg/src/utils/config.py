"""
Runtime configuration for the Fermat quotient sequence toolkit
Values come from the environment, optionally seeded from a .env file
"""
import os
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

from src.utils.errors import ParameterError

logger = logging.getLogger(__name__)

DEFAULT_CACHE_DIR = "./.fermatseq-cache"
DEFAULT_MAX_FIELD_DEGREE = 512
DEFAULT_MAX_PRIME = 101


def _int_from_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParameterError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ParameterError(f"{name} must be positive, got {value}")
    return value


@dataclass(frozen=True)
class Settings:
    """Caps, cache location and logging level shared by every command"""
    cache_dir: Path = Path(DEFAULT_CACHE_DIR)
    max_field_degree: int = DEFAULT_MAX_FIELD_DEGREE
    max_prime: int = DEFAULT_MAX_PRIME
    log_level: str = "INFO"
    workers: int = 1

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from FERMATSEQ_* environment variables"""
        load_dotenv()
        settings = cls(
            cache_dir=Path(os.getenv("FERMATSEQ_CACHE_DIR", DEFAULT_CACHE_DIR)),
            max_field_degree=_int_from_env("FERMATSEQ_MAX_FIELD_DEGREE", DEFAULT_MAX_FIELD_DEGREE),
            max_prime=_int_from_env("FERMATSEQ_MAX_PRIME", DEFAULT_MAX_PRIME),
            log_level=os.getenv("FERMATSEQ_LOG_LEVEL", "INFO").upper(),
            workers=_int_from_env("FERMATSEQ_WORKERS", 1),
        )
        logger.debug(f"Loaded settings: {settings}")
        return settings


# Global settings instance
_settings_instance: Optional[Settings] = None


def get_settings() -> Settings:
    """Get global settings instance"""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = Settings.from_env()
    return _settings_instance


def reset_settings() -> None:
    """Forget the cached settings so the next call re-reads the environment"""
    global _settings_instance
    _settings_instance = None
