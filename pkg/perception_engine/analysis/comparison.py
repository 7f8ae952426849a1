"""
Comparison with an external labelled perception point set
- Both label vocabularies are mapped onto positive / neutral / negative
- For every external point, the distance to the nearest of our points with the same polarity
- Mean distance per (neighborhood, polarity) with a normal-approximation 95% confidence interval
"""
import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

from perception_engine.analysis.neighborhoods import locate
from perception_engine.dictionary.communities import CANONICAL_POLARITY
from perception_engine.exceptions import AnalysisError, UnknownLabelError
from perception_engine.extract.geo import haversine_m
from perception_engine.logging_config import get_logger
from perception_engine.schemas import ExternalPoint, NeighborhoodSpec, PerceptionCluster, Polarity, UopDictionary

logger = get_logger(__name__)

UOP_POLARITY = CANONICAL_POLARITY
EXTERNAL_POLARITY = {
    "wealthy": Polarity.POSITIVE,
    "beautiful": Polarity.POSITIVE,
    "safety": Polarity.POSITIVE,
    "lively": Polarity.NEUTRAL,
    "boring": Polarity.NEGATIVE,
    "depressing": Polarity.NEGATIVE,
}
POLARITY_ORDER = (Polarity.POSITIVE, Polarity.NEUTRAL, Polarity.NEGATIVE)
COMPARISON_COLUMNS = ("neighborhood", "polarity", "mean_m", "ci_low_m", "ci_high_m", "n_points", "status")
Z_95 = 1.96


def aggregate_polarity(label: str, dictionary: Optional[UopDictionary] = None) -> Polarity:
    """
    Polarity class of a category from either vocabulary.
    Labels outside both tables fall back to the polarity of the dictionary community with that label.
    """
    if label in UOP_POLARITY:
        return UOP_POLARITY[label]
    if label in EXTERNAL_POLARITY:
        return EXTERNAL_POLARITY[label]
    if dictionary is not None and label in dictionary.labels:
        return dictionary.community(label).polarity
    raise UnknownLabelError(f"no polarity is known for category '{label}'")


@dataclass(frozen=True)
class LabeledPoint:
    label: str
    lat: float
    lon: float


def cluster_points(clusters: Iterable[PerceptionCluster]) -> list[LabeledPoint]:
    """One point per (document, label) incidence."""
    return [LabeledPoint(label, m.doc.geo[0], m.doc.geo[1])
            for c in clusters for m in c.members for label in sorted(m.labels)]


@dataclass
class DistanceSummary:
    neighborhood: str
    polarity: Polarity
    mean_m: Optional[float]
    ci_low_m: Optional[float]
    ci_high_m: Optional[float]
    n_points: int
    status: Literal["ok", "small_sample", "absent"]

    def as_row(self) -> dict:
        return {
            "neighborhood": self.neighborhood,
            "polarity": self.polarity.value,
            "mean_m": self.mean_m,
            "ci_low_m": self.ci_low_m,
            "ci_high_m": self.ci_high_m,
            "n_points": self.n_points,
            "status": self.status,
        }


def summarize_distances(neighborhood: str, polarity: Polarity, distances: Sequence[float]) -> DistanceSummary:
    n = len(distances)
    if n == 0:
        return DistanceSummary(neighborhood, polarity, None, None, None, 0, "absent")
    ordered = sorted(distances)
    mean = math.fsum(ordered) / n
    if n == 1:
        # no spread to estimate: the interval collapses onto the mean
        return DistanceSummary(neighborhood, polarity, mean, mean, mean, 1, "small_sample")
    stderr = float(np.std(ordered, ddof=1)) / math.sqrt(n)
    return DistanceSummary(neighborhood, polarity, mean, mean - Z_95 * stderr, mean + Z_95 * stderr, n, "ok")


def nearest_distance_comparison(external_points: Iterable[ExternalPoint], our_points: Iterable[LabeledPoint],
                                neighborhoods: Sequence[NeighborhoodSpec],
                                scope: Literal["neighborhood", "city"] = "neighborhood",
                                dictionary: Optional[UopDictionary] = None) -> list[DistanceSummary]:
    external_points = list(external_points)
    if not external_points:
        raise AnalysisError("no external points to compare")

    def placed(points, polarity_of):
        rows = []
        for p in points:
            rows.append((polarity_of(p.label), p.lat, p.lon, set(locate(p.lat, p.lon, neighborhoods))))
        return rows

    theirs = placed(external_points, aggregate_polarity)
    ours = placed(list(our_points), lambda label: aggregate_polarity(label, dictionary))

    summaries = []
    for spec in neighborhoods:
        for polarity in POLARITY_ORDER:
            queries = [(lat, lon) for pol, lat, lon, inside in theirs if pol is polarity and spec.name in inside]
            targets = np.array([(lat, lon) for pol, lat, lon, inside in ours
                                if pol is polarity and (scope == "city" or spec.name in inside)], dtype=np.float64)
            if not queries or len(targets) == 0:
                summaries.append(summarize_distances(spec.name, polarity, []))
                continue
            distances = [float(np.min(haversine_m(lat, lon, targets[:, 0], targets[:, 1]))) for lat, lon in queries]
            summaries.append(summarize_distances(spec.name, polarity, distances))

    absent = [f"{s.neighborhood}/{s.polarity.value}" for s in summaries if s.status == "absent"]
    if absent:
        logger.info(f"No comparable points for: {', '.join(absent)}")
    return summaries
