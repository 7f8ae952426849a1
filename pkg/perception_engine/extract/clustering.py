"""
Density-based spatial clustering of one month's labelled documents
- HDBSCAN (scikit-learn) over a precomputed haversine distance matrix in metres
- Core distances use min_samples = min_cluster_size; clusters are chosen by excess of mass
- Documents are ordered by id first, so the result does not depend on input order
"""
from typing import Iterable

from sklearn.cluster import HDBSCAN

from perception_engine.extract.filters import month_of
from perception_engine.extract.geo import haversine_matrix, spherical_mean
from perception_engine.logging_config import get_logger
from perception_engine.schemas import LabeledDocument, PerceptionCluster

logger = get_logger(__name__)

NOISE = -1


def cluster_labels(coords: list[tuple[float, float]], min_cluster_size: int) -> list[int]:
    """HDBSCAN labels for (lat, lon) points; -1 is noise."""
    if len(coords) < max(min_cluster_size, 2):
        return [NOISE] * len(coords)
    model = HDBSCAN(min_cluster_size=min_cluster_size, min_samples=min_cluster_size,
                    metric="precomputed", cluster_selection_method="eom")
    return [int(label) for label in model.fit_predict(haversine_matrix(coords))]


def cluster_spatial(docs: Iterable[LabeledDocument], min_cluster_size: int,
                    month: tuple[int, int] | None = None,
                    first_id: int = 0) -> tuple[list[PerceptionCluster], list[LabeledDocument]]:
    """
    Cluster one month of geolocated documents.
    Returns the clusters (ids from first_id, ordered by their smallest member id) and the noise documents.
    """
    docs = sorted(docs, key=lambda d: d.doc.id)
    if not docs:
        return [], []
    if month is None:
        month = month_of(docs[0].doc.timestamp)

    labels = cluster_labels([d.doc.geo for d in docs], min_cluster_size)
    groups: dict[int, list[LabeledDocument]] = {}
    noise = []
    for doc, label in zip(docs, labels):
        if label == NOISE:
            noise.append(doc)
        else:
            groups.setdefault(label, []).append(doc)

    clusters = []
    for offset, members in enumerate(sorted(groups.values(), key=lambda g: g[0].doc.id)):
        clusters.append(PerceptionCluster(
            id=first_id + offset,
            month=month,
            members=tuple(members),
            centroid=spherical_mean([m.doc.geo for m in members]),
        ))
    logger.info(f"Month {month[0]:04d}-{month[1]:02d}: {len(clusters)} clusters, {len(noise)} noise documents "
                f"out of {len(docs)}")
    return clusters, noise
