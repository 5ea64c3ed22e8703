"""
Common utility functions across components.
"""

from .config import Settings, get_settings, load_settings
from .hashing import digest_artifacts
from .logger import get_logger, setup_logging

__all__ = [
    "get_logger",
    "setup_logging",
    "get_settings",
    "load_settings",
    "Settings",
    "digest_artifacts",
]
