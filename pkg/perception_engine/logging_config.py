"""
Logging configuration for the perception engine.
- Configures the ROOT logger so all child loggers (perception_engine.extract, perception_engine.dictionary, etc.)
  automatically write to the rotating file handlers.
- Console handler writes to stderr to keep stdout clean for reports piped by the CLI.
- Log files: <log_dir>/pipeline.log (DEBUG+), <log_dir>/error.log (ERROR+)
- Log directory and console level come from UOP_LOG_DIR / UOP_LOG_LEVEL unless passed explicitly.
"""
import logging
import logging.handlers
import os
from pathlib import Path

from dotenv import load_dotenv
from rich.console import Console
from rich.logging import RichHandler

load_dotenv()

_FORMATTER = logging.Formatter(
    "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)


def configure_logging(log_dir: str | Path | None = None, level: str | None = None) -> None:
    """
    Attach the file and console handlers to the root logger.
    Only the first call has an effect; later calls are ignored.
    """
    root = logging.getLogger()
    if getattr(root, "_uop_configured", False):
        return
    root.setLevel(logging.DEBUG)

    log_dir = Path(log_dir or os.getenv("UOP_LOG_DIR", "logs"))
    level = (level or os.getenv("UOP_LOG_LEVEL", "INFO")).upper()
    log_dir.mkdir(parents=True, exist_ok=True)

    # Rotating file handler, all levels
    fh = logging.handlers.RotatingFileHandler(
        log_dir / "pipeline.log", maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8"
    )
    fh.setLevel(logging.DEBUG)
    fh.setFormatter(_FORMATTER)
    root.addHandler(fh)

    # Rotating file handler, errors only
    eh = logging.handlers.RotatingFileHandler(
        log_dir / "error.log", maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8"
    )
    eh.setLevel(logging.ERROR)
    eh.setFormatter(_FORMATTER)
    root.addHandler(eh)

    # Console → stderr
    ch = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    ch.setLevel(level)
    root.addHandler(ch)

    root._uop_configured = True


def get_logger(name: str) -> logging.Logger:
    """Return a named logger. Handlers are on the root logger, so everything propagates automatically."""
    return logging.getLogger(name)
