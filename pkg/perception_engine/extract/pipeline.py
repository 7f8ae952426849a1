"""
Defining the perception extraction pipeline
geolocated documents -> spatial noise filter -> dictionary matching -> semantic filter
-> monthly partition -> HDBSCAN per month -> perception clusters + stage counts
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from perception_engine.config import PipelineConfig
from perception_engine.embedding_model.embeddings import EmbeddingModel
from perception_engine.extract.clustering import cluster_spatial
from perception_engine.extract.filters import (
    keep_above,
    label_documents,
    monthly_partition,
    score_documents,
    spatial_noise_filter,
)
from perception_engine.logging_config import get_logger
from perception_engine.schemas import Document, LabeledDocument, PerceptionCluster, UopDictionary

logger = get_logger(__name__)

STAGES = ("collected", "spatial_filter", "dictionary_match", "semantic_filter")


@dataclass
class StageReport:
    collected: int = 0
    spatial_filter: int = 0
    dictionary_match: int = 0
    semantic_filter: int = 0
    clustered: int = 0
    noise: int = 0
    clusters_per_month: dict[str, int] = field(default_factory=dict)

    def rows(self, run_label: str) -> list[dict]:
        rows = [{"stage": stage, "count": getattr(self, stage), "run": run_label} for stage in STAGES]
        rows.append({"stage": "clustered", "count": self.clustered, "run": run_label})
        rows.extend({"stage": f"clusters:{month}", "count": count, "run": run_label}
                    for month, count in self.clusters_per_month.items())
        return rows

    def as_dict(self) -> dict:
        return {stage: getattr(self, stage) for stage in (*STAGES, "clustered", "noise")} | {
            "clusters_per_month": dict(self.clusters_per_month)}


@dataclass
class ExtractionResult:
    clusters: list[PerceptionCluster]
    report: StageReport
    matched: list[LabeledDocument] = field(default_factory=list)
    scored: list[LabeledDocument] = field(default_factory=list)


def extract_perceptions(documents: list[Document], dictionary: UopDictionary, model: EmbeddingModel,
                        config: PipelineConfig) -> ExtractionResult:
    report = StageReport(collected=len(documents))
    try:
        # ── 1. Spatial noise ──────────────────────────────────────────────────
        located = spatial_noise_filter(documents, config.thresh_spatial)
        report.spatial_filter = len(located)

        # ── 2. Dictionary labels ──────────────────────────────────────────────
        matched = label_documents(located, dictionary)
        report.dictionary_match = len(matched)

        # ── 3. Semantic filter ────────────────────────────────────────────────
        scored = score_documents(matched, model, dictionary)
        relevant = keep_above(scored, config.thresh_semantic)
        report.semantic_filter = len(relevant)
        logger.info(f"Semantic filter (thresh={config.thresh_semantic}): kept {len(relevant)}/{len(scored)} documents")

        # ── 4. Monthly HDBSCAN ────────────────────────────────────────────────
        months = monthly_partition(relevant)
        if config.workers > 1 and len(months) > 1:
            with ThreadPoolExecutor(max_workers=config.workers) as pool:
                futures = {month: pool.submit(cluster_spatial, docs, config.min_cluster_size, month)
                           for month, docs in months.items()}
                per_month = {month: future.result() for month, future in futures.items()}
        else:
            per_month = {month: cluster_spatial(docs, config.min_cluster_size, month)
                         for month, docs in months.items()}

        # ids are assigned after the join so they do not depend on scheduling
        clusters: list[PerceptionCluster] = []
        for month, (month_clusters, noise) in per_month.items():
            for cluster in month_clusters:
                clusters.append(cluster.model_copy(update={"id": len(clusters)}))
            report.clusters_per_month[f"{month[0]:04d}-{month[1]:02d}"] = len(month_clusters)
            report.noise += len(noise)
        report.clustered = sum(len(c.members) for c in clusters)
    except Exception as e:
        logger.error(f"Error in extraction pipeline: {str(e)}")
        raise

    logger.info(
        f"Extraction finished: {report.collected} -> {report.spatial_filter} -> {report.dictionary_match} -> "
        f"{report.semantic_filter} documents, {len(clusters)} clusters"
    )
    return ExtractionResult(clusters=clusters, report=report, matched=matched, scored=scored)
