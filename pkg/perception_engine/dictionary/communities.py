"""
k-clique communities and the UOP-dictionary
- Clique percolation over the pruned word graph (networkx): a community is a maximal union of
  k-cliques chained through (k-1)-vertex overlaps; a word may belong to several communities
- Each community gets a polarity (mean lexicon polarity >= 0 is positive), its overlap words,
  a representative word and a label
- The representative is the non-overlapped member with the highest total score_sim to the other
  members (ties: lexicographic); labels default to the representative upper-cased and can be
  overridden, e.g. amazing=GREAT; an automatic label never reuses a canonical category of
  the other polarity (GREAT_2 for a negative community represented by "great")
- Dictionaries persist as JSON with sorted lists, so identical dictionaries give identical files
"""
import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from networkx.algorithms.community import k_clique_communities as _nx_k_clique_communities

from perception_engine.dictionary.word_graph import WordGraph, score_sim
from perception_engine.embedding_model.embeddings import EmbeddingModel
from perception_engine.exceptions import GraphError, NoCommunitiesError
from perception_engine.logging_config import get_logger
from perception_engine.schemas import Community, Polarity, UopDictionary
from perception_engine.text.preprocess import stem
from perception_engine.text.sentiment import SentimentLexicon

logger = get_logger(__name__)

CANONICAL_POLARITY = {
    "GREAT": Polarity.POSITIVE,
    "RESPECTFUL": Polarity.POSITIVE,
    "SPECTACULAR": Polarity.POSITIVE,
    "LIVELY": Polarity.NEUTRAL,
    "AGGRESSIVE": Polarity.NEGATIVE,
    "WRONG": Polarity.NEGATIVE,
    "DEAD": Polarity.NEGATIVE,
    "CREEPY": Polarity.NEGATIVE,
}


def k_clique_communities(graph: WordGraph, k: int) -> list[frozenset[str]]:
    """Clique-percolation communities, ordered by their sorted member lists."""
    if k < 2:
        raise GraphError(f"k={k}, k must be at least 2")
    communities = [frozenset(c) for c in _nx_k_clique_communities(graph, k)]
    communities.sort(key=lambda c: sorted(c))
    logger.info(f"Found {len(communities)} {k}-clique communities")
    return communities


@dataclass
class AssemblyReport:
    overlap_words: list[str] = field(default_factory=list)
    fallback_labels: list[str] = field(default_factory=list)
    renamed_labels: list[str] = field(default_factory=list)


def _representative(members: list[str], candidates: list[str], model: EmbeddingModel,
                    lex: SentimentLexicon, alpha: float) -> str:
    def total(word: str) -> float:
        return sum(score_sim(model, lex, word, other, alpha) for other in members if other != word)

    # highest total first, then lexicographic
    return min(candidates, key=lambda w: (-total(w), w))


def assemble_dictionary(communities: Iterable[Iterable[str]], lex: SentimentLexicon, model: EmbeddingModel,
                        alpha: float = 0.8, beta: float = 1.13, k: int = 6,
                        label_overrides: Mapping[str, str] | None = None) -> tuple[UopDictionary, AssemblyReport]:
    communities = [frozenset(c) for c in communities]
    if not communities:
        raise NoCommunitiesError()
    label_overrides = {w.lower(): label for w, label in (label_overrides or {}).items()}

    membership = Counter(w for c in communities for w in c)
    overlapped = {w for w, count in membership.items() if count > 1}
    report = AssemblyReport(overlap_words=sorted(overlapped))

    assembled = []
    used_labels: set[str] = set()
    for members in communities:
        ordered = sorted(members)
        candidates = [w for w in ordered if w not in overlapped]
        fallback = not candidates
        representative = _representative(ordered, candidates or ordered, model, lex, alpha)
        mean_polarity = sum(lex.polarity(w) for w in ordered) / len(ordered)
        polarity = Polarity.POSITIVE if mean_polarity >= 0 else Polarity.NEGATIVE

        taken = used_labels
        label = label_overrides.get(representative)
        if label is None:
            label = representative.upper()
            # an automatic label may not take over a canonical category of another polarity
            if CANONICAL_POLARITY.get(label, polarity) is not polarity:
                taken = used_labels | {label}
        base, suffix = label, 2
        while label in taken:
            label = f"{base}_{suffix}"
            suffix += 1
        if label != base:
            report.renamed_labels.append(label)
        used_labels.add(label)
        if fallback:
            logger.warning(f"Every member of community {label} is overlapped; labelled by its best-scoring member")
            report.fallback_labels.append(label)

        assembled.append(Community(
            label=label,
            representative=representative,
            members=members,
            overlap_words=members & overlapped,
            polarity=polarity,
            stems=frozenset(stem(w) for w in members),
            fallback_label=fallback,
        ))

    dictionary = UopDictionary(communities=tuple(assembled), alpha=alpha, beta=beta, k=k)
    positives = sum(1 for c in assembled if c.polarity is Polarity.POSITIVE)
    logger.info(f"Assembled dictionary: {len(assembled)} communities ({positives} positive, "
                f"{len(assembled) - positives} negative), {len(overlapped)} overlapped words")
    return dictionary, report


def stem_index(dictionary: UopDictionary) -> dict[str, frozenset[str]]:
    """stem -> labels of the communities containing it."""
    index: dict[str, set[str]] = defaultdict(set)
    for community in dictionary.communities:
        for s in community.stems:
            index[s].add(community.label)
    return {s: frozenset(labels) for s, labels in index.items()}


def _community_payload(community: Community) -> dict:
    return {
        "label": community.label,
        "representative": community.representative,
        "polarity": community.polarity.value,
        "members": sorted(community.members),
        "overlap_words": sorted(community.overlap_words),
        "stems": sorted(community.stems),
        "fallback_label": community.fallback_label,
    }


def save_dictionary(dictionary: UopDictionary, path: str | Path) -> Path:
    path = Path(path)
    payload = {
        "alpha": dictionary.alpha,
        "beta": dictionary.beta,
        "k": dictionary.k,
        "communities": [_community_payload(c) for c in dictionary.communities],
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info(f"Saved dictionary with {len(dictionary.communities)} communities to {path}")
    return path


def load_dictionary(path: str | Path) -> UopDictionary:
    path = Path(path)
    logger.info(f"Loading dictionary from {path}")
    return UopDictionary.model_validate(json.loads(path.read_text(encoding="utf-8")))
