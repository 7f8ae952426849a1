"""
Shared fixtures: a tiny lexicon bundle, toy embedding models with hand-written vectors,
and the synthetic sample written to a temporary directory.
"""
from pathlib import Path

import numpy as np
import pytest

from perception_engine.corpus.file_loader import BUNDLED_LEXICON_DIR, load_lexicons
from perception_engine.corpus.sample_data import make_sample
from perception_engine.embedding_model.embeddings import EmbeddingModel, TrainingConfig
from perception_engine.logging_config import configure_logging
from perception_engine.schemas import Document, LabeledDocument, LexiconBundle, Sentence
from perception_engine.text.sentiment import SentimentLexicon


@pytest.fixture(scope="session", autouse=True)
def _logging(tmp_path_factory):
    configure_logging(log_dir=tmp_path_factory.mktemp("logs"), level="WARNING")


def make_model(vectors: dict[str, list[float]]) -> EmbeddingModel:
    """Embedding model from explicit vectors; rows follow dict order."""
    words = list(vectors)
    matrix = np.array([vectors[w] for w in words], dtype=np.float32)
    return EmbeddingModel(vocab={w: i for i, w in enumerate(words)}, vectors=matrix,
                          config=TrainingConfig(m=matrix.shape[1]))


def make_doc(doc_id: str, words: list[str], timestamp: int = 1_514_764_800,
             geo: tuple[float, float] | None = (41.88, -87.63)) -> Document:
    """Document with a single sentence whose stems are the given words."""
    sentences = (Sentence(stems=tuple(words), surfaces=tuple(words)),) if words else ()
    return Document(id=doc_id, sentences=sentences, timestamp=timestamp, geo=geo)


def make_labeled(doc_id: str, labels: set[str], geo: tuple[float, float] = (41.88, -87.63),
                 timestamp: int = 1_514_764_800, score: float = 50.0) -> LabeledDocument:
    return LabeledDocument(doc=make_doc(doc_id, [], timestamp=timestamp, geo=geo), labels=frozenset(labels),
                           semantic_score=score)


@pytest.fixture
def tiny_lexicons() -> LexiconBundle:
    return LexiconBundle(
        stopwords=["i", "am", "at", "it", "is", "are", "not", "the", "was", "and"],
        contractions={"i'm": "i am", "aren't": "are not", "it's": "it is"},
        sentiment={"great": 0.6, "amazing": 0.7, "awesome": 0.5, "worst": -0.8, "creepy": -0.5, "dirty": -0.45},
        adjectives=["great", "amazing", "awesome", "worst", "creepy", "dirty", "beautiful", "quiet"],
    )


@pytest.fixture
def sentiment(tiny_lexicons) -> SentimentLexicon:
    return SentimentLexicon.from_bundle(tiny_lexicons)


@pytest.fixture(scope="session")
def bundled_lexicons() -> LexiconBundle:
    return load_lexicons(BUNDLED_LEXICON_DIR)


@pytest.fixture
def sample_config(tmp_path) -> Path:
    return make_sample(tmp_path / "sample", seed=7)
