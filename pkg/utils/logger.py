"""
Logger utility
"""
import logging
from typing import Optional, Union

from utils.settings import get_settings

LOG_FORMAT = '%(asctime)s | %(levelname)-8s | %(name)s | %(message)s'


def _resolve_level(level: Optional[Union[int, str]]) -> int:
    if level is None:
        level = get_settings().log_level
    if isinstance(level, str):
        value = logging.getLevelName(level.upper())
        return value if isinstance(value, int) else logging.WARNING
    return level


def setup_logger(name: str, level: Optional[Union[int, str]] = None) -> logging.Logger:
    """Setup and return a logger instance"""
    logger = logging.getLogger(name)
    resolved = _resolve_level(level)
    logger.setLevel(resolved)

    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, datefmt='%Y-%m-%d %H:%M:%S'))
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_global_level(level: Union[int, str]) -> None:
    """Re-level every logger created through setup_logger (CLI --log-level)"""
    resolved = _resolve_level(level)
    for name, obj in logging.Logger.manager.loggerDict.items():
        if isinstance(obj, logging.Logger) and obj.handlers:
            obj.setLevel(resolved)
