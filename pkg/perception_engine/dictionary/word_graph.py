"""
Qualifier word graph
- Edge weight between two qualifiers: alpha * w2v_sim + (1 - alpha) * sent_sim
- The graph starts complete over the in-vocabulary qualifiers
- Each vertex gets a threshold mean + beta * std of its incident weights; mean divides by |V|-1 and
  std by |V|-2, as the method prescribes (not by the vertex degree)
- Pruning drops every edge not strictly above its endpoint thresholds, then drops isolated vertices
"""
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Literal

import networkx as nx

from perception_engine.embedding_model.embeddings import EmbeddingModel, w2v_sim
from perception_engine.exceptions import GraphError
from perception_engine.logging_config import get_logger
from perception_engine.text.sentiment import SentimentLexicon

logger = get_logger(__name__)

WordGraph = nx.Graph


def combine_scores(w2v: float, sent: float, alpha: float) -> float:
    return alpha * w2v + (1.0 - alpha) * sent


def score_sim(model: EmbeddingModel, lex: SentimentLexicon, w1: str, w2: str, alpha: float) -> float:
    """Similarity of two qualifiers; raises VocabularyError for out-of-vocabulary words."""
    return combine_scores(w2v_sim(model, w1, w2), lex.sent_sim(w1, w2), alpha)


@dataclass
class GraphBuild:
    graph: WordGraph
    dropped: list[str] = field(default_factory=list)


def build_graph(words: Iterable[str], model: EmbeddingModel, lex: SentimentLexicon, alpha: float,
                min_vertices: int = 2) -> GraphBuild:
    """Complete graph on the in-vocabulary words, weighted by score_sim."""
    words = sorted(set(words))
    kept = [w for w in words if w in model]
    dropped = [w for w in words if w not in model]
    if dropped:
        logger.warning(f"{len(dropped)} qualifiers are not in the embedding vocabulary: {dropped}")
    if len(kept) < min_vertices:
        raise GraphError(f"only {len(kept)} qualifiers are in the vocabulary; at least {min_vertices} are needed")

    graph = nx.Graph()
    graph.add_nodes_from(kept)
    for u, v in combinations(kept, 2):
        graph.add_edge(u, v, weight=score_sim(model, lex, u, v, alpha))
    logger.info(f"Built word graph: |V|={graph.number_of_nodes()}, |E|={graph.number_of_edges()}")
    return GraphBuild(graph=graph, dropped=dropped)


def vertex_threshold(graph: WordGraph, u: str, beta: float) -> float:
    """mean_u + beta * std_u over the edges incident to u."""
    n = graph.number_of_nodes()
    if n < 3:
        raise GraphError(f"vertex thresholds need |V| >= 3, got {n}")
    if u not in graph:
        raise GraphError(f"'{u}' is not a vertex of the graph")
    weights = [data["weight"] for _, _, data in graph.edges(u, data=True)]
    mean = math.fsum(weights) / (n - 1)
    std = math.sqrt(math.fsum((w - mean) ** 2 for w in weights) / (n - 2))
    return mean + beta * std


def prune(graph: WordGraph, beta: float, mode: Literal["both", "either"] = "both") -> WordGraph:
    """
    Keep edge (u, v) only if its weight exceeds thresh_u and thresh_v ("both"),
    or at least one of them ("either"). Thresholds come from the unpruned graph.
    """
    thresholds = {u: vertex_threshold(graph, u, beta) for u in graph.nodes}
    combine = all if mode == "both" else any

    pruned = nx.Graph()
    pruned.add_nodes_from(graph.nodes)
    for u, v, data in graph.edges(data=True):
        w = data["weight"]
        if combine((w > thresholds[u], w > thresholds[v])):
            pruned.add_edge(u, v, weight=w)

    isolated = sorted(nx.isolates(pruned))
    pruned.remove_nodes_from(isolated)
    logger.info(
        f"Pruned graph (beta={beta}, mode={mode}): |V'|={pruned.number_of_nodes()}, "
        f"|E'|={pruned.number_of_edges()}, {len(isolated)} isolated vertices removed"
    )
    return pruned
