from __future__ import annotations

import sys

from loguru import logger

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}: {message}"


def configure_logging(level: str = "INFO") -> None:
    """Route loguru output to stderr so stdout stays free for documents."""
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT)
