"""
Loaders for corpora, lexicon resources, neighborhoods and external perception points.
Supported formats:
- corpus: line-delimited JSON records with id / text / timestamp and optional lat / lon
- lexicons: stopwords.txt, contractions.tsv, sentiment.tsv, adjectives.txt
- neighborhoods: GeoJSON FeatureCollection (or list) of Polygons with a `name` property
- external points: CSV with label, lat, lon columns
- clusters: the JSON dump written by the extract command
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import pandas as pd
from pydantic import ValidationError
from shapely.geometry import shape

from perception_engine.exceptions import AnalysisError, CorpusLoadError, LexiconLoadError
from perception_engine.logging_config import get_logger
from perception_engine.schemas import ExternalPoint, LexiconBundle, NeighborhoodSpec, PerceptionCluster, RawRecord

logger = get_logger(__name__)

BUNDLED_LEXICON_DIR = Path(__file__).resolve().parents[1] / "resources" / "lexicons"
LEXICON_FILES = {
    "stopwords": "stopwords.txt",
    "contractions": "contractions.tsv",
    "sentiment": "sentiment.tsv",
    "adjectives": "adjectives.txt",
}


@dataclass
class Rejection:
    line: int
    reason: str


@dataclass
class CorpusLoad:
    """Records that passed validation, plus what was rejected and why."""
    records: list[RawRecord]
    rejected: list[Rejection] = field(default_factory=list)

    @property
    def reject_count(self) -> int:
        return len(self.rejected)


def load_corpus(path: str | Path, require_geo: bool = False) -> CorpusLoad:
    """
    Load a line-delimited corpus file.
    Invalid lines, duplicate ids and (with require_geo) records without coordinates
    are counted and reported, never returned. Order of the valid records is preserved.
    """
    path = Path(path)
    logger.info(f"Loading corpus: {path} (require_geo={require_geo})")
    try:
        handle = path.open("r", encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot read corpus {path}: {e}")
        raise CorpusLoadError(f"cannot read corpus file {path}: {e}") from e

    records: list[RawRecord] = []
    rejected: list[Rejection] = []
    seen: set[str] = set()
    with handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                if not isinstance(payload, dict):
                    raise ValueError("record is not a JSON object")
                record = RawRecord.model_validate(payload)
            except (ValueError, ValidationError) as e:
                reason = str(e).splitlines()[0] if isinstance(e, ValidationError) else str(e)
                rejected.append(Rejection(line_no, f"malformed record: {reason}"))
                logger.warning(f"{path}:{line_no}: rejected malformed record ({reason})")
                continue
            if record.id in seen:
                rejected.append(Rejection(line_no, f"duplicate id '{record.id}'"))
                logger.warning(f"{path}:{line_no}: rejected duplicate id '{record.id}'")
                continue
            if require_geo and not record.has_geo:
                rejected.append(Rejection(line_no, f"record '{record.id}' has no geolocation"))
                logger.warning(f"{path}:{line_no}: rejected record '{record.id}' without geolocation")
                continue
            seen.add(record.id)
            records.append(record)

    logger.info(f"Loaded {len(records)} records from {path}, rejected {len(rejected)}")
    return CorpusLoad(records=records, rejected=rejected)


def write_corpus(records: Iterable[RawRecord], path: str | Path) -> None:
    """Write records as line-delimited JSON; load_corpus reads them back unchanged."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as out:
        for record in records:
            out.write(record.model_dump_json(exclude_none=True))
            out.write("\n")
            count += 1
    logger.info(f"Wrote {count} records to {path}")


def _read_lines(path: Path) -> list[tuple[int, str]]:
    if not path.is_file():
        raise LexiconLoadError(f"missing lexicon file: {path}")
    with path.open("r", encoding="utf-8") as f:
        return [(no, line.rstrip("\n")) for no, line in enumerate(f, start=1)
                if line.strip() and not line.lstrip().startswith("#")]


def _read_tsv(path: Path) -> list[tuple[int, str, str]]:
    rows = []
    for no, line in _read_lines(path):
        parts = line.split("\t")
        if len(parts) < 2:
            raise LexiconLoadError(f"{path}:{no}: expected two tab-separated columns, got '{line}'")
        rows.append((no, parts[0], parts[1]))
    return rows


def load_lexicons(directory: str | Path) -> LexiconBundle:
    """
    Load the four lexicon resources from a directory.
    Entries are lowercased; sentiment scores must be numeric and within [-1, 1].
    """
    directory = Path(directory)
    logger.info(f"Loading lexicons from {directory}")
    paths = {name: directory / filename for name, filename in LEXICON_FILES.items()}

    stopwords = [line.strip() for _, line in _read_lines(paths["stopwords"])]
    adjectives = [line.strip() for _, line in _read_lines(paths["adjectives"])]
    contractions = {surface.strip(): expansion.strip() for _, surface, expansion in _read_tsv(paths["contractions"])}

    sentiment: dict[str, float] = {}
    for no, word, raw in _read_tsv(paths["sentiment"]):
        try:
            score = float(raw)
        except ValueError as e:
            raise LexiconLoadError(f"{paths['sentiment']}:{no}: sentiment score '{raw}' is not numeric") from e
        if not -1.0 <= score <= 1.0:
            raise LexiconLoadError(f"{paths['sentiment']}:{no}: sentiment score {score} for '{word}' is outside [-1, 1]")
        sentiment[word.strip().lower()] = score

    bundle = LexiconBundle(stopwords=stopwords, contractions=contractions, sentiment=sentiment, adjectives=adjectives)
    logger.info(
        f"Lexicons loaded: {len(bundle.stopwords)} stopwords, {len(bundle.contractions)} contractions, "
        f"{len(bundle.sentiment)} sentiment entries, {len(bundle.adjectives)} adjectives"
    )
    return bundle


def load_neighborhoods(path: str | Path) -> list[NeighborhoodSpec]:
    """
    Load neighborhood polygons. GeoJSON rings are [lon, lat]; they are stored as (lat, lon).
    Polygons must be simple (non-self-intersecting).
    """
    path = Path(path)
    logger.info(f"Loading neighborhoods from {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise CorpusLoadError(f"cannot read neighborhoods file {path}: {e}") from e

    features = payload["features"] if isinstance(payload, dict) else payload
    neighborhoods = []
    for index, feature in enumerate(features):
        geometry = feature.get("geometry", feature)
        name = (feature.get("properties") or {}).get("name") or feature.get("name")
        if geometry.get("type") != "Polygon" or not name:
            raise CorpusLoadError(f"{path}: feature {index} must be a named Polygon")
        polygon = shape(geometry)
        if not polygon.is_valid:
            raise CorpusLoadError(f"{path}: neighborhood '{name}' is self-intersecting")
        ring = tuple((float(lat), float(lon)) for lon, lat in geometry["coordinates"][0])
        neighborhoods.append(NeighborhoodSpec(name=name, ring=ring))
    logger.info(f"Loaded {len(neighborhoods)} neighborhoods")
    return neighborhoods


def load_external_points(path: str | Path) -> list[ExternalPoint]:
    """Load labelled external perception points (label, lat, lon)."""
    path = Path(path)
    logger.info(f"Loading external points from {path}")
    try:
        frame = pd.read_csv(path)
    except pd.errors.EmptyDataError as e:
        raise AnalysisError(f"external points file {path} is empty") from e
    except OSError as e:
        raise CorpusLoadError(f"cannot read external points file {path}: {e}") from e

    missing = {"label", "lat", "lon"} - set(frame.columns)
    if missing:
        raise CorpusLoadError(f"{path}: missing columns {sorted(missing)}")
    points = [ExternalPoint(label=row.label, lat=row.lat, lon=row.lon) for row in frame.itertuples(index=False)]
    if not points:
        raise AnalysisError(f"external points file {path} has no points")
    logger.info(f"Loaded {len(points)} external points")
    return points


def load_clusters(path: str | Path) -> list[PerceptionCluster]:
    """Read back a cluster dump written by save_clusters."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
        clusters = [PerceptionCluster.model_validate(item) for item in payload]
    except (OSError, ValueError) as e:
        raise CorpusLoadError(f"cannot read clusters file {path}: {e}") from e
    logger.info(f"Loaded {len(clusters)} clusters from {path}")
    return clusters
