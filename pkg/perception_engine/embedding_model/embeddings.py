"""
Word embeddings for the qualifier graph and the semantic filter
- Trains skip-gram vectors with a Huffman-tree hierarchical softmax (gensim, no negative sampling, no subsampling)
- Context pairs are words at most ws-1 positions apart; windows are never shrunk
- The learning rate decays linearly from learning_rate to learning_rate / 10
- With workers=1 and a fixed seed the vectors are bit-identical across runs
- Exposes w2v_sim (cosine of two words) and doc_community_score (0..100 document-to-community score)

- Example: w2v_sim(model, "amazing", "great")
    Output: 0.87...
"""
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from gensim.models import Word2Vec
from gensim.models.callbacks import CallbackAny2Vec

from perception_engine.config import PipelineConfig
from perception_engine.exceptions import ModelFormatError, VocabularyError
from perception_engine.logging_config import get_logger
from perception_engine.schemas import Document, Sentence
from perception_engine.text.preprocess import stem

logger = get_logger(__name__)


@dataclass(frozen=True)
class TrainingConfig:
    ws: int = 8
    min_count: int = 20
    m: int = 300
    epochs: int = 10
    learning_rate: float = 0.025
    seed: int = 1
    workers: int = 1

    @classmethod
    def from_pipeline(cls, config: PipelineConfig) -> "TrainingConfig":
        return cls(ws=config.ws, min_count=config.min_count, m=config.m, epochs=config.epochs,
                   learning_rate=config.learning_rate, seed=config.seed, workers=config.workers)


@dataclass
class EmbeddingModel:
    """Vocabulary (token -> row) and an n x m matrix of vectors."""
    vocab: dict[str, int]
    vectors: np.ndarray
    config: TrainingConfig
    epoch_losses: list[float] = field(default_factory=list)
    inner_nodes: Optional[int] = None

    @property
    def n(self) -> int:
        return len(self.vocab)

    @property
    def m(self) -> int:
        return self.vectors.shape[1]

    def key(self, word: str) -> Optional[str]:
        """The vocabulary token for a word: the word itself, else its stem."""
        if word in self.vocab:
            return word
        if word.isalpha():
            token = stem(word)
            if token in self.vocab:
                return token
        return None

    def __contains__(self, word: str) -> bool:
        return self.key(word) is not None

    def vector(self, word: str) -> np.ndarray:
        token = self.key(word)
        if token is None:
            raise VocabularyError(f"'{word}' is not in the embedding vocabulary")
        return self.vectors[self.vocab[token]]


class _EpochLoss(CallbackAny2Vec):
    """Turns gensim's running loss into per-epoch losses."""

    def __init__(self):
        self.losses: list[float] = []
        self._previous = 0.0

    def on_epoch_end(self, model):
        cumulative = model.get_latest_training_loss()
        self.losses.append(float(cumulative - self._previous))
        self._previous = cumulative
        logger.debug(f"Epoch {len(self.losses)} loss: {self.losses[-1]:.4f}")


def _stable_hash(text: str) -> int:
    # gensim seeds each word's initial vector with hashfxn(word + str(seed)); builtin hash() is salted per process
    return zlib.crc32(text.encode("utf-8"))


def _token_lists(corpus: Iterable[Sentence | Sequence[str]]) -> list[list[str]]:
    return [list(s.stems) if isinstance(s, Sentence) else list(s) for s in corpus]


def _count_inner_nodes(w2v: Word2Vec) -> int:
    nodes = set()
    for word in w2v.wv.index_to_key:
        nodes.update(int(p) for p in w2v.wv.get_vecattr(word, "point"))
    return len(nodes)


def train(corpus: Iterable[Sentence | Sequence[str]], config: TrainingConfig) -> EmbeddingModel:
    """
    Train skip-gram vectors with hierarchical softmax on stemmed sentences.
    Raises VocabularyError when fewer than two words reach min_count.
    """
    sentences = [s for s in _token_lists(corpus) if s]
    if not sentences:
        raise VocabularyError("training corpus is empty")

    frequencies: dict[str, int] = {}
    for sentence in sentences:
        for token in sentence:
            frequencies[token] = frequencies.get(token, 0) + 1
    kept = sum(1 for c in frequencies.values() if c >= config.min_count)
    if kept < 2:
        raise VocabularyError(
            f"vocabulary has {kept} word(s) occurring at least minCount={config.min_count} times; need at least 2"
        )
    if config.workers > 1:
        logger.warning(f"Training with {config.workers} workers: vectors will differ between runs")

    logger.info(
        f"Training skip-gram/HS on {len(sentences)} sentences: ws={config.ws}, minCount={config.min_count}, "
        f"m={config.m}, epochs={config.epochs}, lr={config.learning_rate}, seed={config.seed}"
    )
    try:
        w2v = Word2Vec(
            vector_size=config.m,
            window=config.ws - 1,
            min_count=config.min_count,
            sg=1,
            hs=1,
            negative=0,
            sample=0,
            alpha=config.learning_rate,
            min_alpha=config.learning_rate / 10,
            seed=config.seed,
            workers=config.workers,
            hashfxn=_stable_hash,
            shrink_windows=False,
            compute_loss=True,
        )
        w2v.build_vocab(sentences)
        loss = _EpochLoss()
        w2v.train(sentences, total_examples=len(sentences), epochs=config.epochs,
                  compute_loss=True, callbacks=[loss])
    except Exception as e:
        logger.error(f"Error training embeddings: {str(e)}")
        raise

    vocab = {word: i for i, word in enumerate(w2v.wv.index_to_key)}
    model = EmbeddingModel(
        vocab=vocab,
        vectors=np.array(w2v.wv.vectors, copy=True),
        config=config,
        epoch_losses=loss.losses,
        inner_nodes=_count_inner_nodes(w2v),
    )
    logger.info(f"Trained {model.n} word vectors of dimension {model.m}")
    return model


def _cosine(a: np.ndarray, b: np.ndarray) -> float:
    norm = float(np.linalg.norm(a) * np.linalg.norm(b))
    if norm == 0.0:
        return 0.0
    return float(np.clip(np.dot(a, b) / norm, -1.0, 1.0))


def w2v_sim(model: EmbeddingModel, w1: str, w2: str) -> float:
    """Cosine similarity of two in-vocabulary words."""
    return _cosine(model.vector(w1).astype(np.float64), model.vector(w2).astype(np.float64))


def _mean_vector(model: EmbeddingModel, words: Iterable[str]) -> Optional[np.ndarray]:
    rows = [model.vocab[t] for t in (model.key(w) for w in words) if t is not None]
    if not rows:
        return None
    return model.vectors[rows].astype(np.float64).mean(axis=0)


def doc_community_score(model: EmbeddingModel, doc: Document | Iterable[str], community: Iterable[str]) -> float:
    """
    100 x max(0, cosine(mean doc vector, community centroid)).
    A document with no in-vocabulary word scores 0.
    """
    centroid = _mean_vector(model, community)
    if centroid is None:
        raise VocabularyError("community has no word in the embedding vocabulary")
    tokens = doc.stems() if isinstance(doc, Document) else doc
    doc_vector = _mean_vector(model, tokens)
    if doc_vector is None:
        return 0.0
    return min(100.0, 100.0 * max(0.0, _cosine(doc_vector, centroid)))


def save_model(model: EmbeddingModel, path: str | Path) -> Path:
    """
    Text format: header `n m key=value...`, then one `word v1 ... vm` row per word.
    Floats are written with repr so loading gives back the same values.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    c = model.config
    header = (f"{model.n} {model.m} ws={c.ws} min_count={c.min_count} m={c.m} epochs={c.epochs} "
              f"learning_rate={c.learning_rate!r} seed={c.seed} workers={c.workers}")
    by_index = sorted(model.vocab.items(), key=lambda item: item[1])
    with path.open("w", encoding="utf-8") as out:
        out.write(header + "\n")
        for word, index in by_index:
            out.write(word + " " + " ".join(repr(float(v)) for v in model.vectors[index]) + "\n")
    logger.info(f"Saved {model.n} vectors to {path}")
    return path


def load_model(path: str | Path) -> EmbeddingModel:
    path = Path(path)
    logger.info(f"Loading embedding model from {path}")
    with path.open("r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) < 2:
            raise ModelFormatError(f"{path}: missing 'n m' header")
        n, m = int(header[0]), int(header[1])
        options = dict(item.split("=", 1) for item in header[2:])
        config = TrainingConfig(
            ws=int(options.get("ws", 8)),
            min_count=int(options.get("min_count", 20)),
            m=int(options.get("m", m)),
            epochs=int(options.get("epochs", 10)),
            learning_rate=float(options.get("learning_rate", 0.025)),
            seed=int(options.get("seed", 1)),
            workers=int(options.get("workers", 1)),
        )
        if config.m != m:
            raise ModelFormatError(f"{path}: header dimension {m} disagrees with config m={config.m}")
        vocab: dict[str, int] = {}
        vectors = np.zeros((n, m), dtype=np.float32)
        for line_no, line in enumerate(f, start=2):
            parts = line.rstrip("\n").split(" ")
            if len(parts) != m + 1:
                raise ModelFormatError(f"{path}:{line_no}: expected {m} components, got {len(parts) - 1}")
            if len(vocab) >= n:
                raise ModelFormatError(f"{path}: more rows than the declared n={n}")
            values = np.array([float(v) for v in parts[1:]], dtype=np.float64)
            if not np.all(np.isfinite(values)):
                raise ModelFormatError(f"{path}:{line_no}: non-finite component")
            vocab[parts[0]] = len(vocab)
            vectors[vocab[parts[0]]] = values
    if len(vocab) != n:
        raise ModelFormatError(f"{path}: declared {n} rows, found {len(vocab)}")
    return EmbeddingModel(vocab=vocab, vectors=vectors, config=config)
