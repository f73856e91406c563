"""Run logging for flasquekit commands.

Every message carries a level symbol and an optional ``[module]`` tag. The
console echo goes to stderr because stdout holds the report; a per-run file is
written only when a log directory is given.
"""

from __future__ import annotations

import logging
import os
import sys
from datetime import datetime
from typing import Any, Mapping, Optional, TextIO

# level name -> (stdlib level, symbol)
LEVELS: dict[str, tuple[int, str]] = {
    "DEBUG": (logging.DEBUG, "🔍"),
    "INFO": (logging.INFO, "📝"),
    "SUCCESS": (logging.INFO, "✅"),
    "METRIC": (logging.INFO, "📊"),
    "WARNING": (logging.WARNING, "⚠️"),
    "ERROR": (logging.ERROR, "❌"),
}

_FILE_FORMAT = "%(asctime)s.%(msecs)03d │ %(levelname)-8s │ %(message)s"


class Logger:
    def __init__(
        self,
        name: str = "flasquekit",
        *,
        log_dir: Optional[str] = None,
        print_to_console: bool = False,
        stream: Optional[TextIO] = None,
    ) -> None:
        self.name = name
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")[:-3]
        self.log_filename: Optional[str] = None

        self._logger = logging.getLogger(f"{name}.run.{self.timestamp}.{id(self):x}")
        self._logger.setLevel(logging.DEBUG)
        self._logger.propagate = False
        # keeps logging's last-resort handler from printing when nothing is attached
        self._logger.addHandler(logging.NullHandler())

        if print_to_console:
            console = logging.StreamHandler(stream if stream is not None else sys.stderr)
            console.setFormatter(logging.Formatter("%(message)s"))
            self._logger.addHandler(console)

        if log_dir is not None:
            os.makedirs(log_dir, exist_ok=True)
            self.log_filename = os.path.join(log_dir, f"{name}_{self.timestamp}.log")
            file_handler = logging.FileHandler(self.log_filename, encoding="utf-8")
            file_handler.setFormatter(logging.Formatter(_FILE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
            file_handler.stream.write(f"{'=' * 72}\n{name} run log, started {self.timestamp}\n{'=' * 72}\n")
            self._logger.addHandler(file_handler)

    def get_log_filename(self) -> Optional[str]:
        return self.log_filename

    def log_print(self, *args: object, sep: str = " ", level: str = "INFO", module: Optional[str] = None) -> None:
        message = sep.join(str(arg) for arg in args)
        if not message.strip():
            return
        stdlib_level, symbol = LEVELS.get(level.upper(), LEVELS["INFO"])
        tag = f"[{module}] " if module else ""
        self._logger.log(stdlib_level, f"{symbol} {tag}{message}")

    def log_section(self, title: str, width: int = 72) -> None:
        rule = "━" * width
        self.log_print(rule)
        self.log_print(f"  {title}  ".center(width))
        self.log_print(rule)

    def log_metric(self, metric_name: str, value: Any, unit: str = "", module: Optional[str] = None) -> None:
        self.log_print(f"{metric_name}: {value}{unit}", level="METRIC", module=module)

    def log_dict(self, data: Mapping[str, Any], title: Optional[str] = None, level: str = "INFO") -> None:
        if title:
            self.log_print(f"┌─ {title}", level=level)
        for key, value in data.items():
            self.log_print(f"│ {key}: {value}", level=level)
        if title:
            self.log_print("└─", level=level)

    def debug(self, *args: object, **kwargs: Any) -> None:
        self.log_print(*args, level="DEBUG", **kwargs)

    def info(self, *args: object, **kwargs: Any) -> None:
        self.log_print(*args, level="INFO", **kwargs)

    def error(self, *args: object, **kwargs: Any) -> None:
        self.log_print(*args, level="ERROR", **kwargs)

    def close(self) -> None:
        for handler in self._logger.handlers[:]:
            handler.close()
            self._logger.removeHandler(handler)


__all__ = ["LEVELS", "Logger"]
