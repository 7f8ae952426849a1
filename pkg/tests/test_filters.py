from datetime import datetime, timezone

import pytest

from perception_engine.extract.filters import (
    keep_above,
    label_documents,
    match_dictionary,
    monthly_partition,
    score_histogram,
    semantic_filter,
    spatial_noise_filter,
)
from perception_engine.schemas import Community, Polarity, UopDictionary

from conftest import make_doc, make_labeled, make_model


def _ts(text: str) -> int:
    return int(datetime.fromisoformat(text).replace(tzinfo=timezone.utc).timestamp())


@pytest.fixture
def dictionary() -> UopDictionary:
    return UopDictionary(alpha=0.8, beta=1.13, k=3, communities=(
        Community(label="GREAT", representative="great", members=frozenset({"great", "amazing"}),
                  polarity=Polarity.POSITIVE, stems=frozenset({"great", "amaz"})),
        Community(label="CREEPY", representative="creepy", members=frozenset({"creepy", "scary"}),
                  polarity=Polarity.NEGATIVE, stems=frozenset({"creepi", "scari"})),
    ))


def test_hotspot_of_twelve_is_removed():
    docs = [make_doc(f"b{i}", ["great"], geo=(41.0, -87.0)) for i in range(12)]
    docs.append(make_doc("x", ["great"], geo=(41.1, -87.0)))
    assert [d.id for d in spatial_noise_filter(docs, 10)] == ["x"]


def test_nine_at_one_coordinate_are_kept():
    docs = [make_doc(f"b{i}", ["great"], geo=(41.0, -87.0)) for i in range(9)]
    assert len(spatial_noise_filter(docs, 10)) == 9


def test_group_of_exactly_the_threshold_is_removed():
    docs = [make_doc(f"b{i}", ["great"], geo=(41.0, -87.0)) for i in range(10)]
    assert spatial_noise_filter(docs, 10) == []


def test_match_dictionary(dictionary):
    assert match_dictionary(make_doc("a", ["amaz", "park"]), dictionary) == frozenset({"GREAT"})
    assert match_dictionary(make_doc("b", ["great", "scari"]), dictionary) == frozenset({"GREAT", "CREEPY"})
    assert match_dictionary(make_doc("c", ["park"]), dictionary) == frozenset()


def test_unlabelled_documents_are_dropped(dictionary):
    docs = [make_doc("a", ["amaz"]), make_doc("b", ["park"]), make_doc("c", ["creepi", "great"])]
    labelled = label_documents(docs, dictionary)
    assert [d.doc.id for d in labelled] == ["a", "c"]
    assert labelled[1].labels == frozenset({"GREAT", "CREEPY"})


@pytest.mark.parametrize("score, kept", [(18.0, False), (18.01, True), (17.99, False), (100.0, True)])
def test_semantic_threshold_is_strict(score, kept):
    doc = make_labeled("d", {"GREAT"}, score=score)
    assert (keep_above([doc], 18.0) == [doc]) is kept


def test_semantic_filter_uses_best_assigned_community(dictionary):
    model = make_model({"great": [1.0, 0.0], "amaz": [1.0, 0.0], "creepi": [0.0, 1.0], "scari": [0.0, 1.0],
                        "park": [0.7, 0.7]})
    labelled = label_documents([make_doc("a", ["great", "scari"]), make_doc("b", ["creepi"])], dictionary)
    kept = semantic_filter(labelled, model, dictionary, 18.0)
    scores = {d.doc.id: d.semantic_score for d in kept}
    # a sits halfway between both centroids: cos 45 degrees with each
    assert scores["a"] == pytest.approx(100 * 2 ** -0.5, rel=1e-6)
    assert scores["b"] == pytest.approx(100.0)


def test_month_boundary_is_utc():
    docs = [make_labeled("a", {"GREAT"}, timestamp=_ts("2018-01-31T23:59:00")),
            make_labeled("b", {"GREAT"}, timestamp=_ts("2018-02-01T00:00:00"))]
    parts = monthly_partition(docs)
    assert list(parts) == [(2018, 1), (2018, 2)]
    assert [d.doc.id for d in parts[(2018, 1)]] == ["a"]


def test_partition_edge_cases():
    assert monthly_partition([]) == {}
    docs = [make_labeled(str(i), {"GREAT"}, timestamp=_ts("2018-03-05T10:00:00") + i) for i in range(5)]
    parts = monthly_partition(docs)
    assert list(parts) == [(2018, 3)]
    assert len(parts[(2018, 3)]) == 5


def test_score_histogram_covers_every_score():
    rows = score_histogram([0.0, 17.9, 18.0, 55.5, 100.0], bins=20)
    assert len(rows) == 20
    assert sum(r["count"] for r in rows) == 5
    assert rows[0]["bin_low"] == 0.0
    assert rows[-1]["bin_high"] == 100.0
    assert rows[-1]["count"] == 1
