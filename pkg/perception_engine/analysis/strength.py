"""
Perception strength per neighborhood and month
- count_points: X[i, j, n] = (document, label) incidences of category i in month j inside neighborhood n
- z_scores: (X - mean_n) / std_n for every (category, month); std = 0 gives z = 0
- strength_summary: median / quartiles / range of z over months, the numbers behind a boxplot
- external_strength: the same z-scores for an external labelled point set, grouped by polarity
"""
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from perception_engine.analysis.comparison import aggregate_polarity
from perception_engine.analysis.neighborhoods import locate
from perception_engine.exceptions import AnalysisError
from perception_engine.logging_config import get_logger
from perception_engine.schemas import ExternalPoint, NeighborhoodSpec, PerceptionCluster, ZScoreEntry, ZScoreReport

logger = get_logger(__name__)

ZSCORE_COLUMNS = ("category", "month", "neighborhood", "count", "mean", "std", "z")
SUMMARY_COLUMNS = ("category", "neighborhood", "months", "median", "q1", "q3", "min", "max")
ALL_MONTHS = "all"


@dataclass
class CountTensor:
    categories: list[str]
    months: list[str]
    neighborhoods: list[str]
    counts: np.ndarray  # shape (categories, months, neighborhoods)


def count_points(clusters: Iterable[PerceptionCluster], neighborhoods: Sequence[NeighborhoodSpec],
                 categories: Sequence[str]) -> CountTensor:
    clusters = list(clusters)
    categories = list(categories)
    months = sorted({c.month_key for c in clusters})
    names = [n.name for n in neighborhoods]
    counts = np.zeros((len(categories), len(months), len(names)), dtype=np.int64)
    cat_index = {c: i for i, c in enumerate(categories)}
    month_index = {m: j for j, m in enumerate(months)}
    name_index = {name: k for k, name in enumerate(names)}

    for cluster in clusters:
        j = month_index[cluster.month_key]
        for member in cluster.members:
            inside = locate(member.doc.geo[0], member.doc.geo[1], neighborhoods)
            for label in member.labels:
                if label not in cat_index:
                    continue
                for name in inside:
                    counts[cat_index[label], j, name_index[name]] += 1
    logger.info(f"Counted {int(counts.sum())} perception points over {len(months)} months and {len(names)} neighborhoods")
    return CountTensor(categories=categories, months=months, neighborhoods=names, counts=counts)


def z_scores(tensor: CountTensor, ddof: int = 0) -> ZScoreReport:
    """Standardise each (category, month) slice across neighborhoods; ddof=0 is the population std."""
    if len(tensor.neighborhoods) < 2:
        raise AnalysisError(f"z-scores need at least 2 neighborhoods, got {len(tensor.neighborhoods)}")
    x = tensor.counts.astype(np.float64)
    mean = x.mean(axis=2, keepdims=True)
    std = x.std(axis=2, ddof=ddof, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(std > 0, (x - mean) / std, 0.0)

    entries = []
    for i, category in enumerate(tensor.categories):
        for j, month in enumerate(tensor.months):
            for k, name in enumerate(tensor.neighborhoods):
                entries.append(ZScoreEntry(
                    category=category, month=month, neighborhood=name, count=int(tensor.counts[i, j, k]),
                    mean=float(mean[i, j, 0]), std=float(std[i, j, 0]), z=float(z[i, j, k]),
                ))
    return ZScoreReport(entries=entries, ddof=ddof)


def report_frame(report: ZScoreReport) -> pd.DataFrame:
    return pd.DataFrame([e.model_dump() for e in report.entries], columns=list(ZSCORE_COLUMNS))


def strength_summary(report: ZScoreReport) -> pd.DataFrame:
    frame = report_frame(report)
    if frame.empty:
        return pd.DataFrame(columns=list(SUMMARY_COLUMNS))
    grouped = frame.groupby(["category", "neighborhood"], sort=True)["z"]
    summary = grouped.agg(
        months="count",
        median="median",
        q1=lambda s: s.quantile(0.25),
        q3=lambda s: s.quantile(0.75),
        min="min",
        max="max",
    ).reset_index()
    return summary[list(SUMMARY_COLUMNS)]


def external_strength(points: Iterable[ExternalPoint], neighborhoods: Sequence[NeighborhoodSpec],
                      ddof: int = 0) -> pd.DataFrame:
    """z-scores of the external categories over a single pseudo-month, with each category's polarity."""
    points = list(points)
    categories = sorted({p.label for p in points})
    names = [n.name for n in neighborhoods]
    counts = np.zeros((len(categories), 1, len(names)), dtype=np.int64)
    cat_index = {c: i for i, c in enumerate(categories)}
    name_index = {name: k for k, name in enumerate(names)}
    for p in points:
        for name in locate(p.lat, p.lon, neighborhoods):
            counts[cat_index[p.label], 0, name_index[name]] += 1

    tensor = CountTensor(categories=categories, months=[ALL_MONTHS], neighborhoods=names, counts=counts)
    frame = report_frame(z_scores(tensor, ddof=ddof))
    frame.insert(1, "polarity", [aggregate_polarity(c).value for c in frame["category"]])
    return frame.sort_values(["polarity", "category", "neighborhood"], kind="stable").reset_index(drop=True)
