"""
Run artifact helpers: input digests for manifests and clean-up of partial outputs
"""
import hashlib
from pathlib import Path
from typing import Iterable

from perception_engine.logging_config import get_logger

logger = get_logger(__name__)

_CHUNK = 1 << 20


def file_digest(path: str | Path) -> str:
    """sha256 of a file, or of every file under a directory in sorted path order."""
    path = Path(path)
    digest = hashlib.sha256()
    files = sorted(p for p in path.rglob("*") if p.is_file()) if path.is_dir() else [path]
    for file in files:
        if path.is_dir():
            digest.update(file.relative_to(path).as_posix().encode("utf-8"))
        with file.open("rb") as f:
            while chunk := f.read(_CHUNK):
                digest.update(chunk)
    return digest.hexdigest()


def remove_outputs(paths: Iterable[str | Path]) -> None:
    for path in paths:
        path = Path(path)
        try:
            if path.is_file():
                path.unlink()
                logger.info(f"Removed partial output {path}")
        except OSError as e:
            logger.error(f"Could not remove partial output {path}: {str(e)}")
