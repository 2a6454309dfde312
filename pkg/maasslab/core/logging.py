"""
Logging setup shared by the command line and the self test
"""

import logging
import sys

from pythonjsonlogger.json import JsonFormatter

from maasslab.core.config import settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str = None, json_lines: bool = None) -> None:
    """
    Configure the root logger once per process

    Args:
        level: log level name, defaults to settings.LOG_LEVEL
        json_lines: emit JSON records, defaults to settings.LOG_JSON
    """
    level = (level or settings.LOG_LEVEL).upper()
    json_lines = settings.LOG_JSON if json_lines is None else json_lines

    handler = logging.StreamHandler(sys.stderr)
    if json_lines:
        handler.setFormatter(JsonFormatter(LOG_FORMAT, rename_fields={"levelname": "level"}))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))

    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level, logging.INFO))
