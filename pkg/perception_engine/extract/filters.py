"""
Document filters applied before clustering
- spatial_noise_filter: drops every document sharing its exact (lat, lon) with threshSpatial or more documents
- match_dictionary / label_documents: dictionary labels by stem membership; unlabelled documents are dropped
- semantic_filter: keeps documents whose best assigned-community score is strictly above threshSemantic
- monthly_partition: UTC calendar months
"""
from collections import Counter, defaultdict
from datetime import datetime, timezone
from typing import Iterable, Mapping, TypeVar

import numpy as np

from perception_engine.dictionary.communities import stem_index
from perception_engine.embedding_model.embeddings import EmbeddingModel, doc_community_score
from perception_engine.logging_config import get_logger
from perception_engine.schemas import Document, LabeledDocument, UopDictionary

logger = get_logger(__name__)

Month = tuple[int, int]
D = TypeVar("D", Document, LabeledDocument)


def spatial_noise_filter(docs: Iterable[Document], thresh_spatial: int) -> list[Document]:
    docs = list(docs)
    occupancy = Counter(doc.geo for doc in docs)
    hotspots = {geo for geo, count in occupancy.items() if count >= thresh_spatial}
    kept = [doc for doc in docs if doc.geo not in hotspots]
    logger.info(f"Spatial filter (thresh={thresh_spatial}): {len(hotspots)} hotspots, kept {len(kept)}/{len(docs)} documents")
    return kept


def match_dictionary(doc: Document, dictionary: UopDictionary | Mapping[str, frozenset[str]]) -> frozenset[str]:
    """Labels of every community sharing at least one stem with the document."""
    index = stem_index(dictionary) if isinstance(dictionary, UopDictionary) else dictionary
    labels: set[str] = set()
    for s in doc.stems():
        labels.update(index.get(s, ()))
    return frozenset(labels)


def label_documents(docs: Iterable[Document], dictionary: UopDictionary) -> list[LabeledDocument]:
    index = stem_index(dictionary)
    docs = list(docs)
    labeled = []
    for doc in docs:
        labels = match_dictionary(doc, index)
        if labels:
            labeled.append(LabeledDocument(doc=doc, labels=labels))
    logger.info(f"Dictionary matching: {len(labeled)}/{len(docs)} documents labelled")
    return labeled


def semantic_score(doc: LabeledDocument, model: EmbeddingModel, dictionary: UopDictionary) -> float:
    return max(doc_community_score(model, doc.doc, dictionary.community(label).members) for label in sorted(doc.labels))


def score_documents(docs: Iterable[LabeledDocument], model: EmbeddingModel,
                    dictionary: UopDictionary) -> list[LabeledDocument]:
    return [doc.model_copy(update={"semantic_score": semantic_score(doc, model, dictionary)}) for doc in docs]


def keep_above(scored: Iterable[LabeledDocument], thresh_semantic: float) -> list[LabeledDocument]:
    # strictly above: a score equal to the threshold is dropped
    return [doc for doc in scored if doc.semantic_score > thresh_semantic]


def semantic_filter(docs: Iterable[LabeledDocument], model: EmbeddingModel, dictionary: UopDictionary,
                    thresh_semantic: float) -> list[LabeledDocument]:
    scored = score_documents(docs, model, dictionary)
    kept = keep_above(scored, thresh_semantic)
    logger.info(f"Semantic filter (thresh={thresh_semantic}): kept {len(kept)}/{len(scored)} documents")
    return kept


def month_of(timestamp: int) -> Month:
    moment = datetime.fromtimestamp(timestamp, tz=timezone.utc)
    return moment.year, moment.month


def monthly_partition(docs: Iterable[D]) -> dict[Month, list[D]]:
    """Partition by UTC calendar month; keys come out in chronological order."""
    parts: dict[Month, list[D]] = defaultdict(list)
    for doc in docs:
        timestamp = doc.doc.timestamp if isinstance(doc, LabeledDocument) else doc.timestamp
        parts[month_of(timestamp)].append(doc)
    return {month: parts[month] for month in sorted(parts)}


def score_histogram(scores: Iterable[float], bins: int = 20) -> list[dict]:
    """Distribution of semantic scores over [0, 100], used to choose threshSemantic."""
    counts, edges = np.histogram(np.asarray(list(scores), dtype=np.float64), bins=bins, range=(0.0, 100.0))
    return [{"bin_low": float(edges[i]), "bin_high": float(edges[i + 1]), "count": int(counts[i])}
            for i in range(bins)]
