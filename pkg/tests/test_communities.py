import random
from itertools import combinations

import networkx as nx
import pytest

from perception_engine.analysis.comparison import aggregate_polarity
from perception_engine.dictionary.communities import (
    assemble_dictionary,
    k_clique_communities,
    load_dictionary,
    save_dictionary,
    stem_index,
)
from perception_engine.exceptions import GraphError, NoCommunitiesError
from perception_engine.schemas import Polarity
from perception_engine.text.sentiment import SentimentLexicon

from conftest import make_model


def brute_force_communities(graph: nx.Graph, k: int) -> set[frozenset]:
    """Every k-clique, adjacency through k-1 shared vertices, union per connected component."""
    cliques = [frozenset(c) for c in combinations(sorted(graph.nodes), k)
               if all(graph.has_edge(u, v) for u, v in combinations(c, 2))]
    overlap = nx.Graph()
    overlap.add_nodes_from(range(len(cliques)))
    for i, j in combinations(range(len(cliques)), 2):
        if len(cliques[i] & cliques[j]) == k - 1:
            overlap.add_edge(i, j)
    return {frozenset().union(*(cliques[i] for i in component)) for component in nx.connected_components(overlap)}


def union_find_components(graph: nx.Graph) -> set[frozenset]:
    parent = {v: v for v in graph.nodes}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in graph.edges:
        parent[find(u)] = find(v)
    groups: dict = {}
    for v in graph.nodes:
        if graph.degree(v) > 0:
            groups.setdefault(find(v), set()).add(v)
    return {frozenset(g) for g in groups.values()}


def _random_graph(rng: random.Random, max_vertices: int = 15) -> nx.Graph:
    n = rng.randint(2, max_vertices)
    p = rng.uniform(0.15, 0.75)
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((u, v) for u, v in combinations(range(n), 2) if rng.random() < p)
    return graph


def test_two_triangles_sharing_an_edge():
    graph = nx.Graph([("a", "b"), ("b", "c"), ("a", "c"), ("b", "d"), ("c", "d")])
    assert k_clique_communities(graph, 3) == [frozenset("abcd")]


def test_two_triangles_sharing_a_vertex():
    graph = nx.Graph([("a", "b"), ("b", "c"), ("a", "c"), ("c", "d"), ("d", "e"), ("c", "e")])
    assert set(k_clique_communities(graph, 3)) == {frozenset("abc"), frozenset("cde")}


def test_path_graph_has_no_triangles():
    assert k_clique_communities(nx.path_graph(6), 3) == []


def test_k_below_two_is_rejected():
    with pytest.raises(GraphError):
        k_clique_communities(nx.complete_graph(3), 1)


def test_matches_brute_force_oracle():
    rng = random.Random(2024)
    for _ in range(200):
        graph = _random_graph(rng)
        k = rng.choice((2, 3, 4))
        found = k_clique_communities(graph, k)
        assert set(found) == brute_force_communities(graph, k)
        for community in found:
            assert any(all(graph.has_edge(u, v) for u, v in combinations(c, 2))
                       for c in combinations(community, k))


def test_k_two_equals_connected_components():
    rng = random.Random(99)
    for _ in range(100):
        graph = _random_graph(rng)
        assert set(k_clique_communities(graph, 2)) == union_find_components(graph)


@pytest.fixture
def model():
    return make_model({
        "great": [1.0, 0.1], "amaz": [0.9, 0.2], "awesom": [0.95, 0.0], "love": [0.8, 0.3],
        "creepi": [-0.9, 0.4], "dirti": [-1.0, 0.3], "scari": [-0.8, 0.5],
    })


@pytest.fixture
def lex():
    return SentimentLexicon({"great": 0.6, "amazing": 0.7, "awesome": 0.5, "lovely": 0.7,
                             "creepy": -0.5, "dirty": -0.45, "scary": -0.55})


def test_positive_community(model, lex):
    dictionary, report = assemble_dictionary([{"great", "amazing", "awesome"}], lex, model)
    [community] = dictionary.communities
    assert community.polarity is Polarity.POSITIVE
    assert community.representative in community.members
    assert community.label == community.representative.upper()
    assert community.stems == frozenset({"great", "amaz", "awesom"})
    assert report.fallback_labels == []


def test_overlapped_word_is_in_both_and_never_representative(model, lex):
    communities = [{"great", "amazing", "awesome"}, {"great", "creepy", "dirty", "scary"}]
    dictionary, report = assemble_dictionary(communities, lex, model)
    assert report.overlap_words == ["great"]
    for community in dictionary.communities:
        assert "great" in community.members
        assert community.overlap_words == frozenset({"great"})
        assert community.representative != "great"
    assert [c.polarity for c in dictionary.communities] == [Polarity.POSITIVE, Polarity.NEGATIVE]


def test_fully_overlapped_community_falls_back(model, lex):
    communities = [{"great", "amazing"}, {"great", "amazing", "lovely"}, {"lovely", "awesome"}]
    dictionary, report = assemble_dictionary(communities, lex, model)
    first, _, last = dictionary.communities
    assert first.fallback_label
    assert first.label in report.fallback_labels
    assert first.representative in first.members
    assert not last.fallback_label
    assert last.representative == "awesome"
    assert len(set(dictionary.labels)) == 3


def test_labels_are_unique_and_overridable(model, lex):
    communities = [{"great", "amazing", "awesome"}, {"creepy", "dirty", "scary"}]
    overrides = {"creepy": "CREEPY", "dirty": "CREEPY", "scary": "CREEPY"}
    dictionary, _ = assemble_dictionary(communities, lex, model, label_overrides=overrides)
    assert dictionary.communities[1].label == "CREEPY"
    assert dictionary.communities[0].label == dictionary.communities[0].representative.upper()


def test_clashing_labels_get_a_suffix(model, lex):
    communities = [{"great", "amazing", "awesome"}, {"creepy", "dirty", "scary"}]
    dictionary, report = assemble_dictionary(communities, lex, model, label_overrides={
        "great": "GREAT", "amazing": "GREAT", "awesome": "GREAT", "creepy": "GREAT", "dirty": "GREAT", "scary": "GREAT"})
    assert dictionary.labels == ["GREAT", "GREAT_2"]
    assert report.renamed_labels == ["GREAT_2"]


def test_automatic_label_skips_canonical_category_of_other_polarity(model, lex):
    # "great" is the only non-overlapped member of a negative community
    communities = [{"great", "creepy", "dirty", "scary"}, {"creepy", "dirty", "scary"}]
    dictionary, report = assemble_dictionary(communities, lex, model)
    first = dictionary.communities[0]
    assert first.representative == "great"
    assert first.polarity is Polarity.NEGATIVE
    assert first.label == "GREAT_2"
    assert "GREAT_2" in report.renamed_labels
    assert aggregate_polarity(first.label, dictionary) is Polarity.NEGATIVE


def test_automatic_label_keeps_canonical_category_of_same_polarity(model, lex):
    dictionary, report = assemble_dictionary([{"great"}, {"creepy", "dirty", "scary"}], lex, model)
    assert dictionary.labels[0] == "GREAT"
    assert report.renamed_labels == []


def test_no_communities_raises(model, lex):
    with pytest.raises(NoCommunitiesError, match="no communities found"):
        assemble_dictionary([], lex, model)


def test_stem_index_and_round_trip(tmp_path, model, lex):
    communities = [{"great", "amazing", "awesome"}, {"great", "creepy", "dirty", "scary"}]
    dictionary, _ = assemble_dictionary(communities, lex, model, alpha=0.8, beta=0.5, k=3)
    index = stem_index(dictionary)
    assert index["great"] == frozenset(dictionary.labels)
    assert len(index["amaz"]) == 1

    path = save_dictionary(dictionary, tmp_path / "dictionary.json")
    assert load_dictionary(path) == dictionary
    first_bytes = path.read_bytes()
    save_dictionary(load_dictionary(path), path)
    assert path.read_bytes() == first_bytes
