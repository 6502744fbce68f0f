import json
import logging
import logging.handlers
import os
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional, TextIO

LOGGER_NAME = "sheafcalc"

# Attributes every LogRecord carries; anything else came in through ``extra=``
_RESERVED_RECORD_KEYS = frozenset([
    "args", "asctime", "created", "exc_info", "exc_text", "filename",
    "funcName", "id", "levelname", "levelno", "lineno", "module",
    "msecs", "message", "msg", "name", "pathname", "process",
    "processName", "relativeCreated", "stack_info", "taskName",
    "thread", "threadName",
])


class JSONFormatter(logging.Formatter):
    """
    Render each log record as a single JSON object.

    Usage:
        handler.setFormatter(JSONFormatter())
    """

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            exc_type = record.exc_info[0]
            log_data["exception"] = {
                "type": exc_type.__name__ if exc_type else "Exception",
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }

        for key, value in record.__dict__.items():
            if key not in _RESERVED_RECORD_KEYS:
                log_data[key] = value

        return json.dumps(log_data, default=str)


def setup_logging(log_level: Optional[str] = None, stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Configure the ``sheafcalc`` logger.

    Args:
        log_level: Level name; falls back to the LOG_LEVEL environment variable, then INFO
        stream: Console stream, stderr by default so stdout stays free for results

    Returns:
        The configured logger
    """
    if log_level is None:
        log_level = os.environ.get("LOG_LEVEL", "INFO")
    level = getattr(logging, log_level.upper(), logging.INFO)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    logger.propagate = False
    if logger.handlers:
        logger.handlers.clear()

    if os.environ.get("LOG_FORMAT", "").lower() == "json":
        formatter: logging.Formatter = JSONFormatter()
    else:
        formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    log_file = os.environ.get("LOG_FILE")
    if log_file:
        file_handler = logging.handlers.RotatingFileHandler(
            log_file, maxBytes=10485760, backupCount=5
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.debug(f"Logging initialized at {logging.getLevelName(level)} level")
    return logger


def format_response(data: Dict[str, Any]) -> Dict[str, Any]:
    """
    Normalize a result payload so it survives JSON encoding unchanged.

    Args:
        data: Result payload built by the service layer

    Returns:
        The same payload after a JSON round trip, or an error object when
        something in it cannot be encoded
    """
    try:
        return json.loads(json.dumps(data))
    except (TypeError, ValueError) as e:
        logging.getLogger(LOGGER_NAME).error(f"Error formatting response: {e}")
        return {"error": {"code": "unserializable", "message": str(e), "context": {}}}
