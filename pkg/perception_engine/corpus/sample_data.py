"""
Deterministic synthetic sample data
- Review corpus with two planted qualifier groups of opposite polarity; words of one group only
  ever share sentences with each other
- Geolocated corpus: per month, one dense blob of perception documents in each sample neighborhood,
  scattered perception documents, unrelated chatter, and a bot hotspot at one exact coordinate
- Neighborhood polygons, external labelled points and a ready-to-run config file

Example: make_sample("data/sample", seed=7)
"""
import json
import math
import shutil
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd

from perception_engine.corpus.file_loader import BUNDLED_LEXICON_DIR, write_corpus
from perception_engine.logging_config import get_logger
from perception_engine.schemas import NeighborhoodSpec, RawRecord

logger = get_logger(__name__)


POSITIVE_WORDS = ("great", "amazing", "awesome", "beautiful", "lovely", "wonderful", "charming", "pleasant")
NEGATIVE_WORDS = ("terrible", "awful", "dirty", "scary", "creepy", "horrible", "ugly", "dangerous")
POSITIVE_NOUNS = ("garden", "view", "music", "coffee", "fountain")
NEGATIVE_NOUNS = ("alley", "trash", "traffic", "noise", "graffiti")
CHATTER = (
    "just finished my shift at the office",
    "anyone watching the game tonight",
    "new phone who dis",
    "meeting moved to thursday afternoon",
    "reading a book about history",
)
METRES_PER_DEGREE = 111_320.0

# name -> (south, west, north, east), Chicago
SAMPLE_NEIGHBORHOODS = {
    "Loop": (41.8750, -87.6400, 41.8890, -87.6200),
    "Wicker Park": (41.9030, -87.6880, 41.9150, -87.6700),
    "Norwood Park": (41.9800, -87.8150, 41.9950, -87.7950),
}
# polarity of the planted blob in each neighborhood
BLOB_POLARITY = {"Loop": "positive", "Wicker Park": "negative", "Norwood Park": "positive"}
SAMPLE_MONTHS = ((2018, 1), (2018, 2), (2018, 3))
CITY_BOX = (41.8600, -87.8200, 42.0000, -87.6000)
BOT_COORDINATE = (41.8819, -87.6278)


def offset(center: tuple[float, float], dx_m: float, dy_m: float) -> tuple[float, float]:
    lat, lon = center
    return lat + dy_m / METRES_PER_DEGREE, lon + dx_m / (METRES_PER_DEGREE * math.cos(math.radians(lat)))


def blob_points(rng: np.random.Generator, center: tuple[float, float], sigma_m: float, n: int) -> list[tuple[float, float]]:
    """Gaussian blob of n points around a centre, sigma in metres."""
    return [offset(center, dx, dy) for dx, dy in rng.normal(0.0, sigma_m, size=(n, 2))]


def uniform_points(rng: np.random.Generator, center: tuple[float, float], side_m: float, n: int) -> list[tuple[float, float]]:
    """n points uniform over a square of the given side centred on center."""
    return [offset(center, dx, dy) for dx, dy in rng.uniform(-side_m / 2, side_m / 2, size=(n, 2))]


def _group(polarity: str) -> tuple[Sequence[str], Sequence[str]]:
    return (POSITIVE_WORDS, POSITIVE_NOUNS) if polarity == "positive" else (NEGATIVE_WORDS, NEGATIVE_NOUNS)


def _review_sentence(rng: np.random.Generator, polarity: str) -> str:
    words, nouns = _group(polarity)
    a, b, c = rng.choice(words, size=3, replace=False)
    noun = rng.choice(nouns)
    return f"the {noun} was {a}, {b} and so {c}"


def planted_review_records(seed: int = 7, reviews_per_group: int = 300) -> list[RawRecord]:
    """Reviews whose qualifiers form two groups that never share a sentence."""
    rng = np.random.default_rng(seed)
    start = int(datetime(2017, 6, 1, tzinfo=timezone.utc).timestamp())
    records = []
    for index in range(2 * reviews_per_group):
        polarity = "positive" if index % 2 == 0 else "negative"
        text = ". ".join(_review_sentence(rng, polarity) for _ in range(2)) + "!"
        records.append(RawRecord(id=f"review-{index:05d}", text=text, timestamp=start + index * 3600))
    return records


def sample_neighborhoods() -> list[NeighborhoodSpec]:
    return [NeighborhoodSpec.from_bbox(name, *box) for name, box in SAMPLE_NEIGHBORHOODS.items()]


def _centre(box: tuple[float, float, float, float]) -> tuple[float, float]:
    south, west, north, east = box
    return (south + north) / 2, (west + east) / 2


def _month_time(rng: np.random.Generator, year: int, month: int) -> int:
    start = datetime(year, month, 1, tzinfo=timezone.utc)
    return int(start.timestamp()) + int(rng.integers(0, 27 * 24 * 3600))


def _perception_text(rng: np.random.Generator, polarity: str) -> str:
    words, nouns = _group(polarity)
    a, b = rng.choice(words, size=2, replace=False)
    return f"what a {a} {rng.choice(nouns)}, really {b}! http://t.co/x{int(rng.integers(1000))}"


def planted_geo_records(seed: int = 7, blob_size: int = 12, scatter: int = 8, chatter: int = 10,
                        bot_posts: int = 12) -> list[RawRecord]:
    rng = np.random.default_rng(seed)
    records: list[RawRecord] = []

    def add(text: str, timestamp: int, lat: float, lon: float) -> None:
        records.append(RawRecord(id=f"geo-{len(records):05d}", text=text, timestamp=timestamp,
                                 lat=round(lat, 6), lon=round(lon, 6)))

    for year, month in SAMPLE_MONTHS:
        for name, box in SAMPLE_NEIGHBORHOODS.items():
            polarity = BLOB_POLARITY[name]
            for lat, lon in blob_points(rng, _centre(box), 60.0, blob_size):
                add(_perception_text(rng, polarity), _month_time(rng, year, month), lat, lon)
        south, west, north, east = CITY_BOX
        for _ in range(scatter):
            polarity = "positive" if rng.random() < 0.5 else "negative"
            add(_perception_text(rng, polarity), _month_time(rng, year, month),
                rng.uniform(south, north), rng.uniform(west, east))
        for _ in range(chatter):
            add(str(rng.choice(CHATTER)), _month_time(rng, year, month),
                rng.uniform(south, north), rng.uniform(west, east))
    for _ in range(bot_posts):
        year, month = SAMPLE_MONTHS[0]
        add(_perception_text(rng, "positive"), _month_time(rng, year, month), *BOT_COORDINATE)
    return records


def external_points_frame(seed: int = 7, per_neighborhood: int = 6) -> pd.DataFrame:
    """External labelled points around the planted blobs; Norwood Park only gets neutral ones."""
    rng = np.random.default_rng(seed + 1)
    labels = {"Loop": ("wealthy", "safety", "beautiful"), "Wicker Park": ("depressing", "boring"),
              "Norwood Park": ("lively",)}
    rows = []
    for name, box in SAMPLE_NEIGHBORHOODS.items():
        for lat, lon in blob_points(rng, _centre(box), 120.0, per_neighborhood):
            rows.append({"label": str(rng.choice(labels[name])), "lat": round(lat, 6), "lon": round(lon, 6)})
    return pd.DataFrame(rows, columns=["label", "lat", "lon"])


def neighborhoods_geojson() -> dict:
    features = []
    for spec in sample_neighborhoods():
        features.append({
            "type": "Feature",
            "properties": {"name": spec.name},
            "geometry": {"type": "Polygon", "coordinates": [[[lon, lat] for lat, lon in spec.ring]]},
        })
    return {"type": "FeatureCollection", "features": features}


SAMPLE_CONFIG = """\
# Synthetic sample run; paths are relative to this file
REVIEWS_PATH=reviews.jsonl
GEO_PATH=geo.jsonl
LEXICON_DIR=lexicons
NEIGHBORHOODS_PATH=neighborhoods.geojson
EXTERNAL_POINTS_PATH=external_points.csv
OUT_DIR=out
RUN_LABEL=sample
ALPHA=0.8
BETA=0.3
K=4
WS=5
MIN_COUNT=5
M=50
EPOCHS=10
LEARNING_RATE=0.025
SEED={seed}
THRESH_SPATIAL=10
THRESH_SEMANTIC=18
MIN_CLUSTER_SIZE=5
"""


def make_sample(out_dir: str | Path, seed: int = 7) -> Path:
    """Write the whole sample (corpora, lexicons, neighborhoods, external points, config) and return the config path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    logger.info(f"Writing synthetic sample to {out_dir} (seed={seed})")
    write_corpus(planted_review_records(seed), out_dir / "reviews.jsonl")
    write_corpus(planted_geo_records(seed), out_dir / "geo.jsonl")
    shutil.copytree(BUNDLED_LEXICON_DIR, out_dir / "lexicons", dirs_exist_ok=True)
    (out_dir / "neighborhoods.geojson").write_text(json.dumps(neighborhoods_geojson(), indent=2) + "\n", encoding="utf-8")
    external_points_frame(seed).to_csv(out_dir / "external_points.csv", index=False, lineterminator="\n")
    config_path = out_dir / "sample.env"
    config_path.write_text(SAMPLE_CONFIG.format(seed=seed), encoding="utf-8")
    return config_path
