"""Structured logging for crflab.

Log messages follow ``"<area>.<event>: key=value key=value"``. The JSON
formatter splits that shape into an ``event`` name and a ``fields`` object
so diagnostics from long runs can be filtered without regexes.
"""

from __future__ import annotations

import json
import logging
import re
from datetime import UTC, datetime
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from crflab.config import Settings

_EVENT = re.compile(r"^(?P<event>[a-z_]+(?:\.[a-z0-9_]+)+):\s*(?P<rest>.*)$")
_FIELD = re.compile(r"(?P<key>[A-Za-z_][\w\[\]]*)=(?P<value>[^\s,]+)")


def split_event(message: str) -> tuple[str | None, dict[str, str]]:
    """``"flow.converged: t=12.5"`` -> ``("flow.converged", {"t": "12.5"})``."""
    match = _EVENT.match(message)
    if match is None:
        return None, {}
    fields = {m["key"]: m["value"] for m in _FIELD.finditer(match["rest"])}
    return match["event"], fields


class _JsonFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        message = record.getMessage()
        entry: dict[str, Any] = {
            "timestamp": datetime.now(UTC).isoformat(),
            "level": record.levelname,
            "name": record.name,
            "message": message,
        }
        event, fields = split_event(message)
        if event is not None:
            entry["event"] = event
            entry["fields"] = fields
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry)


def setup_logging(settings: Settings) -> None:
    """Configure the root logger from *settings*.

    Calling it again replaces the previous handler. Python warnings (numpy
    overflow and invalid-value warnings among them) go through the same
    handler under the ``py.warnings`` logger.
    """
    level = getattr(logging, settings.log_level.upper(), logging.INFO)
    root = logging.getLogger()
    root.setLevel(level)
    root.handlers.clear()

    handler = logging.StreamHandler()
    handler.setLevel(level)
    if settings.log_format == "json":
        handler.setFormatter(_JsonFormatter())
    else:
        handler.setFormatter(
            logging.Formatter("%(asctime)s %(levelname)-8s %(name)s: %(message)s")
        )
    root.addHandler(handler)
    logging.captureWarnings(True)


def get_logger(name: str) -> logging.Logger:
    """Return a named logger; :func:`setup_logging` decides where it goes."""
    return logging.getLogger(name)
