import os
import logging
import sys
from dataclasses import dataclass

from models import DEFAULT_MAX_LEN

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    threads: int = 1
    max_len: int = DEFAULT_MAX_LEN
    log_level: str = "WARNING"


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logging.warning(f"Ignoring {name}={raw!r}: not an integer")
        return default


def load_settings():
    """Read runtime defaults from the environment"""
    return Settings(
        threads=max(1, _env_int("NEGMINE_THREADS", 1)),
        max_len=_env_int("NEGMINE_MAX_LEN", DEFAULT_MAX_LEN),
        log_level=os.environ.get("NEGMINE_LOG_LEVEL", "WARNING").upper(),
    )


def configure_logging(level="WARNING", verbosity=0):
    """Configure process-wide logging on standard error"""
    if verbosity >= 2:
        level = "DEBUG"
    elif verbosity == 1:
        level = "INFO"

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
