"""
Pipeline configuration
- PipelineConfig holds every tunable of the dictionary build, the extraction and the analysis
- A run is driven by one flat KEY=value file (dotenv syntax), read with python-dotenv
- Precedence: CLI overrides > UOP_<FIELD> environment variables > config file > defaults
- Keys are matched case-insensitively and ignoring underscores, so MIN_COUNT, min_count and minCount are the same key
"""
import os
from pathlib import Path
from typing import Any, Literal, Optional

from dotenv import dotenv_values
from pydantic import BaseModel, Field, ValidationError, field_validator

from perception_engine.exceptions import ConfigError
from perception_engine.logging_config import get_logger

logger = get_logger(__name__)

ENV_PREFIX = "UOP_"

_PATH_FIELDS = (
    "reviews_path",
    "geo_path",
    "lexicon_dir",
    "neighborhoods_path",
    "external_points_path",
    "dictionary_path",
    "model_path",
    "out_dir",
)


class PipelineConfig(BaseModel):
    """
    Parameters of the whole pipeline.
    Defaults follow the values the method was tuned with: alpha=0.8, beta=1.13, k=6,
    ws=8, minCount=20, m=300, threshSpatial=10, threshSemantic=18.
    """

    model_config = {"frozen": True}

    # dictionary build
    alpha: float = Field(0.8, ge=0.0, le=1.0)
    beta: float = Field(1.13, ge=0.0)
    k: int = Field(6, ge=2)
    prune_mode: Literal["both", "either"] = "both"
    label_overrides: dict[str, str] = Field(default_factory=dict)

    # embedding training
    ws: int = Field(8, ge=2)
    min_count: int = Field(20, gt=0)
    m: int = Field(300, gt=0)
    epochs: int = Field(10, gt=0)
    learning_rate: float = Field(0.025, gt=0.0)
    seed: int = Field(1, ge=0)
    workers: int = Field(1, gt=0)

    # extraction
    thresh_spatial: int = Field(10, gt=0)
    thresh_semantic: float = Field(18.0, ge=0.0, le=100.0)
    min_cluster_size: int = Field(5, ge=2)

    # analysis
    zscore_ddof: int = Field(0, ge=0, le=1)
    comparison_scope: Literal["neighborhood", "city"] = "neighborhood"
    run_label: str = "run"

    # inputs / outputs
    reviews_path: Optional[Path] = None
    geo_path: Optional[Path] = None
    lexicon_dir: Optional[Path] = None
    neighborhoods_path: Optional[Path] = None
    external_points_path: Optional[Path] = None
    dictionary_path: Optional[Path] = None
    model_path: Optional[Path] = None
    out_dir: Path = Path("out")

    @field_validator("label_overrides", mode="before")
    @classmethod
    def _parse_overrides(cls, value: Any) -> Any:
        if isinstance(value, str):
            pairs = {}
            for item in filter(None, (p.strip() for p in value.split(","))):
                if "=" not in item:
                    raise ValueError(f"label override '{item}' is not of the form word=LABEL")
                word, label = (s.strip() for s in item.split("=", 1))
                pairs[word.lower()] = label
            return pairs
        return value

    def echo(self) -> dict[str, Any]:
        """JSON-safe dump used by run manifests."""
        return self.model_dump(mode="json")


def _normalize_key(key: str) -> str:
    return key.lower().replace("_", "").replace("-", "")


_FIELD_BY_KEY = {_normalize_key(name): name for name in PipelineConfig.model_fields}


def _map_keys(raw: dict[str, Any], source: str) -> dict[str, Any]:
    mapped = {}
    for key, value in raw.items():
        name = _FIELD_BY_KEY.get(_normalize_key(key))
        if name is None:
            logger.warning(f"Ignoring unknown config key '{key}' from {source}")
            continue
        if value is None or value == "":
            continue
        mapped[name] = value
    return mapped


def _env_values() -> dict[str, Any]:
    return {k[len(ENV_PREFIX):]: v for k, v in os.environ.items() if k.startswith(ENV_PREFIX)
            and k not in ("UOP_LOG_DIR", "UOP_LOG_LEVEL")}


def _resolve_paths(values: dict[str, Any], base_dir: Path) -> dict[str, Any]:
    for name in _PATH_FIELDS:
        if name in values:
            p = Path(values[name])
            values[name] = p if p.is_absolute() else base_dir / p
    return values


def load_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> PipelineConfig:
    """
    Build a PipelineConfig from a flat key-value file, the environment and explicit overrides.
    Relative paths in the file resolve against the file's directory; paths from the environment
    or overrides resolve against the working directory.
    """
    values: dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"config file not found: {path}")
        logger.info(f"Loading config from {path}")
        values.update(_resolve_paths(_map_keys(dotenv_values(path), str(path)), path.resolve().parent))
    values.update(_resolve_paths(_map_keys(_env_values(), "environment"), Path.cwd()))
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    values.update(_resolve_paths(_map_keys(overrides, "overrides"), Path.cwd()))

    try:
        config = PipelineConfig(**values)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        raise ConfigError(str(e)) from e
    logger.debug(f"Config resolved: {config.echo()}")
    return config
