"""
Writers for the run outputs
- GeoJSON (RFC 7946) FeatureCollection of clustered perception points
- JSON dump of the clusters themselves, reloaded by analyze / compare
- CSV reports with fixed headers and a fixed float format, so identical runs give identical bytes
"""
import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from perception_engine.logging_config import get_logger
from perception_engine.schemas import PerceptionCluster

logger = get_logger(__name__)

FLOAT_FORMAT = "%.6f"
CLUSTER_SUMMARY_COLUMNS = ("cluster_id", "month", "category", "label_count", "size", "centroid_lat", "centroid_lon")


def clusters_to_feature_collection(clusters: Iterable[PerceptionCluster]) -> dict:
    """One Point feature per member document; coordinates are [lon, lat]."""
    features = []
    for cluster in sorted(clusters, key=lambda c: c.id):
        for member in sorted(cluster.members, key=lambda m: m.doc.id):
            lat, lon = member.doc.geo
            features.append({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [lon, lat]},
                "properties": {
                    "cluster_id": cluster.id,
                    "labels": sorted(member.labels),
                    "month": cluster.month_key,
                    "doc_id": member.doc.id,
                },
            })
    return {"type": "FeatureCollection", "features": features}


def write_geojson(clusters: Iterable[PerceptionCluster], path: str | Path) -> Path:
    path = Path(path)
    collection = clusters_to_feature_collection(clusters)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(collection, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Cannot write GeoJSON to {path}: {e}")
        raise
    logger.info(f"Wrote {len(collection['features'])} features to {path}")
    return path


def write_csv(rows: Iterable[dict] | pd.DataFrame, columns: Sequence[str], path: str | Path) -> Path:
    """Write rows under exactly the given header, in the given column order."""
    path = Path(path)
    frame = rows if isinstance(rows, pd.DataFrame) else pd.DataFrame(list(rows))
    frame = frame.reindex(columns=list(columns))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        logger.error(f"Cannot write CSV to {path}: {e}")
        raise
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def _cluster_payload(cluster: PerceptionCluster) -> dict:
    members = []
    for member in sorted(cluster.members, key=lambda m: m.doc.id):
        members.append({
            "doc": member.doc.model_dump(mode="json"),
            "labels": sorted(member.labels),
            "semantic_score": member.semantic_score,
        })
    return {"id": cluster.id, "month": list(cluster.month), "centroid": list(cluster.centroid), "members": members}


def save_clusters(clusters: Iterable[PerceptionCluster], path: str | Path) -> Path:
    """Full cluster dump (documents with their stems) read back by the analysis commands."""
    path = Path(path)
    payload = [_cluster_payload(c) for c in sorted(clusters, key=lambda c: c.id)]
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Saved {len(payload)} clusters to {path}")
    return path


def cluster_summary_rows(clusters: Iterable[PerceptionCluster]) -> list[dict]:
    """One row per (cluster, label): size and centroid of the cluster, documents carrying the label."""
    rows = []
    for cluster in sorted(clusters, key=lambda c: c.id):
        label_counts = Counter(label for m in cluster.members for label in m.labels)
        for label in sorted(label_counts):
            rows.append({
                "cluster_id": cluster.id,
                "month": cluster.month_key,
                "category": label,
                "label_count": label_counts[label],
                "size": len(cluster.members),
                "centroid_lat": cluster.centroid[0],
                "centroid_lon": cluster.centroid[1],
            })
    return rows

