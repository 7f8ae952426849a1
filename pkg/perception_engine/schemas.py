"""
Pydantic schemas for the domain types shared across the pipeline
- RawRecord: one line of a corpus file, validated at load
- LexiconBundle: stopwords, contractions, sentiment scores and the adjective list
- Sentence / Document: preprocessed text items
- Community / UopDictionary: the learned qualifier-word communities
- LabeledDocument / PerceptionCluster: extraction results
- NeighborhoodSpec, ExternalPoint, ZScoreEntry / ZScoreReport: analysis inputs and outputs
- RunManifest: the record every CLI run leaves behind
"""
import math
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Iterator, Optional

from pydantic import BaseModel, Field, field_validator, model_validator


def parse_timestamp(value: Any) -> Any:
    """Accept integer seconds or an ISO-8601 string; naive ISO times are taken as UTC."""
    if isinstance(value, str):
        text = value.strip()
        if text.lstrip("-").isdigit():
            return int(text)
        try:
            parsed = datetime.fromisoformat(text.replace("Z", "+00:00"))
        except ValueError as e:
            raise ValueError(f"timestamp '{value}' is neither integer seconds nor ISO-8601") from e
        if parsed.tzinfo is None:
            parsed = parsed.replace(tzinfo=timezone.utc)
        return int(parsed.timestamp())
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


class RawRecord(BaseModel):
    model_config = {"frozen": True}

    id: str = Field(..., min_length=1)
    text: str
    timestamp: int = Field(..., ge=0)
    lat: Optional[float] = Field(None, ge=-90.0, le=90.0)
    lon: Optional[float] = Field(None, ge=-180.0, le=180.0)

    @field_validator("id")
    @classmethod
    def _strip_id(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("id must be nonempty")
        return value

    @field_validator("text")
    @classmethod
    def _lowercase(cls, value: str) -> str:
        return value.lower()

    @field_validator("timestamp", mode="before")
    @classmethod
    def _timestamp(cls, value: Any) -> Any:
        return parse_timestamp(value)

    @model_validator(mode="after")
    def _geo_pair(self) -> "RawRecord":
        if (self.lat is None) != (self.lon is None):
            raise ValueError("lat and lon must be both present or both absent")
        return self

    @property
    def has_geo(self) -> bool:
        return self.lat is not None


class LexiconBundle(BaseModel):
    model_config = {"frozen": True}

    stopwords: frozenset[str]
    contractions: dict[str, str]
    sentiment: dict[str, float]
    adjectives: frozenset[str]

    @field_validator("stopwords", "adjectives", mode="before")
    @classmethod
    def _lower_set(cls, value: Any) -> Any:
        return frozenset(w.strip().lower() for w in value if w and w.strip())

    @field_validator("contractions", mode="before")
    @classmethod
    def _lower_map(cls, value: Any) -> Any:
        return {k.strip().lower(): v.strip().lower() for k, v in dict(value).items()}

    @field_validator("sentiment", mode="before")
    @classmethod
    def _scores(cls, value: Any) -> Any:
        scores = {}
        for word, score in dict(value).items():
            score = float(score)
            if not math.isfinite(score) or not -1.0 <= score <= 1.0:
                raise ValueError(f"sentiment score for '{word}' must be finite and within [-1, 1], got {score}")
            scores[word.strip().lower()] = score
        return scores


class Sentence(BaseModel):
    model_config = {"frozen": True}

    stems: tuple[str, ...]
    surfaces: tuple[str, ...]

    @model_validator(mode="after")
    def _parallel(self) -> "Sentence":
        if len(self.stems) != len(self.surfaces):
            raise ValueError("stems and surfaces must have equal length")
        if any(not s for s in self.stems):
            raise ValueError("empty stem")
        return self


class Document(BaseModel):
    model_config = {"frozen": True}

    id: str = Field(..., min_length=1)
    sentences: tuple[Sentence, ...] = ()
    timestamp: int = Field(..., ge=0)
    geo: Optional[tuple[float, float]] = None

    def stems(self) -> Iterator[str]:
        for sentence in self.sentences:
            yield from sentence.stems

    def surfaces(self) -> Iterator[str]:
        for sentence in self.sentences:
            yield from sentence.surfaces


class Community(BaseModel):
    model_config = {"frozen": True}

    label: str
    representative: str
    members: frozenset[str]
    overlap_words: frozenset[str] = frozenset()
    polarity: Polarity
    stems: frozenset[str]
    fallback_label: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "Community":
        if self.representative not in self.members:
            raise ValueError(f"representative '{self.representative}' is not a member of community {self.label}")
        if not self.overlap_words <= self.members:
            raise ValueError("overlap words must be members")
        if self.polarity is Polarity.NEUTRAL:
            raise ValueError("dictionary communities are either positive or negative")
        return self


class UopDictionary(BaseModel):
    model_config = {"frozen": True}

    communities: tuple[Community, ...]
    alpha: float
    beta: float
    k: int

    @model_validator(mode="after")
    def _unique_labels(self) -> "UopDictionary":
        labels = [c.label for c in self.communities]
        if len(labels) != len(set(labels)):
            raise ValueError(f"community labels must be unique: {labels}")
        return self

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.communities]

    def community(self, label: str) -> Community:
        for c in self.communities:
            if c.label == label:
                return c
        raise KeyError(label)


class LabeledDocument(BaseModel):
    model_config = {"frozen": True}

    doc: Document
    labels: frozenset[str] = Field(..., min_length=1)
    semantic_score: float = Field(0.0, ge=0.0, le=100.0)


class PerceptionCluster(BaseModel):
    model_config = {"frozen": True}

    id: int
    month: tuple[int, int]
    members: tuple[LabeledDocument, ...]
    centroid: tuple[float, float]

    @property
    def month_key(self) -> str:
        return f"{self.month[0]:04d}-{self.month[1]:02d}"


class NeighborhoodSpec(BaseModel):
    model_config = {"frozen": True}

    name: str = Field(..., min_length=1)
    ring: tuple[tuple[float, float], ...]  # (lat, lon) vertices, closed

    @field_validator("ring")
    @classmethod
    def _closed(cls, ring: tuple[tuple[float, float], ...]) -> tuple[tuple[float, float], ...]:
        if len(set(ring)) < 3:
            raise ValueError("a neighborhood ring needs at least 3 distinct vertices")
        if ring[0] != ring[-1]:
            ring = ring + (ring[0],)
        return ring

    @classmethod
    def from_bbox(cls, name: str, south: float, west: float, north: float, east: float) -> "NeighborhoodSpec":
        return cls(name=name, ring=((south, west), (south, east), (north, east), (north, west), (south, west)))


class ExternalPoint(BaseModel):
    model_config = {"frozen": True}

    label: str
    lat: float = Field(..., ge=-90.0, le=90.0)
    lon: float = Field(..., ge=-180.0, le=180.0)

    @field_validator("label")
    @classmethod
    def _lower(cls, value: str) -> str:
        return value.strip().lower()


class ZScoreEntry(BaseModel):
    category: str
    month: str
    neighborhood: str
    count: int = Field(..., ge=0)
    mean: float
    std: float = Field(..., ge=0.0)
    z: float


class ZScoreReport(BaseModel):
    entries: list[ZScoreEntry]
    ddof: int = 0


class RunManifest(BaseModel):
    command: str
    config: dict[str, Any]
    input_digests: dict[str, str] = Field(default_factory=dict)
    stage_counts: dict[str, Any] = Field(default_factory=dict)
    timings: dict[str, float] = Field(default_factory=dict)
    outputs: list[str] = Field(default_factory=list)
