import json

import pytest

from perception_engine.corpus.file_loader import (
    load_clusters,
    load_corpus,
    load_external_points,
    load_lexicons,
    load_neighborhoods,
    write_corpus,
)
from perception_engine.corpus.writers import clusters_to_feature_collection, save_clusters, write_geojson
from perception_engine.exceptions import AnalysisError, CorpusLoadError, LexiconLoadError
from perception_engine.schemas import PerceptionCluster, RawRecord

from conftest import make_labeled


def _write_lines(path, payloads):
    path.write_text("\n".join(p if isinstance(p, str) else json.dumps(p) for p in payloads) + "\n")
    return path


def test_three_valid_lines(tmp_path):
    path = _write_lines(tmp_path / "c.jsonl", [
        {"id": "a", "text": "Great park", "timestamp": 10},
        {"id": "b", "text": "quiet street", "timestamp": "2018-01-01T00:00:00Z"},
        {"id": "c", "text": "x", "timestamp": 12, "lat": 41.0, "lon": -87.0},
    ])
    load = load_corpus(path)
    assert [r.id for r in load.records] == ["a", "b", "c"]
    assert load.reject_count == 0
    assert load.records[0].text == "great park"
    assert load.records[1].timestamp == 1_514_764_800


def test_out_of_range_latitude_is_rejected(tmp_path):
    path = _write_lines(tmp_path / "c.jsonl", [
        {"id": "a", "text": "t", "timestamp": 1, "lat": 91, "lon": 0},
        {"id": "b", "text": "t", "timestamp": 1, "lat": 45, "lon": 0},
    ])
    load = load_corpus(path)
    assert [r.id for r in load.records] == ["b"]
    assert load.reject_count == 1
    assert load.rejected[0].line == 1


def test_require_geo_rejects_records_without_coordinates(tmp_path):
    path = _write_lines(tmp_path / "c.jsonl", [{"id": "a", "text": "t", "timestamp": 1}])
    assert load_corpus(path).reject_count == 0
    load = load_corpus(path, require_geo=True)
    assert load.records == []
    assert load.reject_count == 1


def test_malformed_and_duplicate_lines_are_counted(tmp_path):
    path = _write_lines(tmp_path / "c.jsonl", [
        {"id": "a", "text": "t", "timestamp": 1},
        "{not json",
        {"id": "a", "text": "again", "timestamp": 2},
        {"id": "d", "text": "t", "timestamp": 1, "lat": 40.0},
    ])
    load = load_corpus(path)
    assert [r.id for r in load.records] == ["a"]
    assert [r.line for r in load.rejected] == [2, 3, 4]


def test_unreadable_corpus_raises(tmp_path):
    with pytest.raises(CorpusLoadError):
        load_corpus(tmp_path / "missing.jsonl")


def test_write_then_load_gives_equal_records(tmp_path):
    records = [
        RawRecord(id="r1", text="what a lovely view", timestamp=100),
        RawRecord(id="r2", text="creepy alley", timestamp=200, lat=41.9, lon=-87.7),
    ]
    write_corpus(records, tmp_path / "out.jsonl")
    assert load_corpus(tmp_path / "out.jsonl").records == records


def _lexicon_dir(tmp_path, sentiment="great\t0.6\nworst\t-0.8\n"):
    directory = tmp_path / "lex"
    directory.mkdir()
    (directory / "stopwords.txt").write_text("the\nAnd\n")
    (directory / "contractions.tsv").write_text("aren't\tare not\n")
    (directory / "sentiment.tsv").write_text(sentiment)
    (directory / "adjectives.txt").write_text("great\nworst\n")
    return directory


def test_load_lexicons(tmp_path):
    lex = load_lexicons(_lexicon_dir(tmp_path))
    assert lex.sentiment["great"] == 0.6
    assert lex.contractions["aren't"] == "are not"
    assert "and" in lex.stopwords
    assert lex.adjectives == frozenset({"great", "worst"})


def test_sentiment_out_of_range_names_file_and_line(tmp_path):
    directory = _lexicon_dir(tmp_path, sentiment="great\t0.6\nbad\t-1.5\n")
    with pytest.raises(LexiconLoadError, match=r"sentiment\.tsv:2"):
        load_lexicons(directory)


def test_missing_sentiment_file_names_the_file(tmp_path):
    directory = _lexicon_dir(tmp_path)
    (directory / "sentiment.tsv").unlink()
    with pytest.raises(LexiconLoadError, match="sentiment.tsv"):
        load_lexicons(directory)


def test_bundled_lexicons_cover_the_sample_words(bundled_lexicons):
    for word in ("great", "amazing", "terrible", "creepy", "dangerous"):
        assert word in bundled_lexicons.adjectives
        assert word in bundled_lexicons.sentiment
    assert bundled_lexicons.contractions["aren't"] == "are not"


def test_empty_cluster_list_gives_empty_feature_collection():
    assert clusters_to_feature_collection([]) == {"type": "FeatureCollection", "features": []}


def test_one_cluster_of_three_docs(tmp_path):
    members = tuple(make_labeled(f"d{i}", {"LIVELY", "GREAT"}, geo=(41.88 + i * 1e-4, -87.63)) for i in range(3))
    cluster = PerceptionCluster(id=4, month=(2018, 1), members=members, centroid=(41.8801, -87.63))
    collection = clusters_to_feature_collection([cluster])
    assert len(collection["features"]) == 3
    assert {f["properties"]["cluster_id"] for f in collection["features"]} == {4}
    first = collection["features"][0]
    assert first["properties"]["labels"] == ["GREAT", "LIVELY"]
    assert first["properties"]["month"] == "2018-01"
    assert first["geometry"]["coordinates"] == [-87.63, 41.88]

    path = write_geojson([cluster], tmp_path / "p.geojson")
    assert json.loads(path.read_text()) == collection


def test_cluster_dump_round_trip(tmp_path):
    members = (make_labeled("b", {"CREEPY"}, geo=(41.9, -87.7)), make_labeled("a", {"GREAT", "CREEPY"}, geo=(41.9, -87.7)))
    cluster = PerceptionCluster(id=0, month=(2018, 2), members=members, centroid=(41.9, -87.7))
    save_clusters([cluster], tmp_path / "clusters.json")
    loaded = load_clusters(tmp_path / "clusters.json")
    assert len(loaded) == 1
    assert [m.doc.id for m in loaded[0].members] == ["a", "b"]
    assert loaded[0].members[0].labels == frozenset({"GREAT", "CREEPY"})
    assert loaded[0].month == (2018, 2)


def test_load_neighborhoods_swaps_to_lat_lon(tmp_path):
    path = tmp_path / "n.geojson"
    path.write_text(json.dumps({"type": "FeatureCollection", "features": [{
        "type": "Feature", "properties": {"name": "Loop"},
        "geometry": {"type": "Polygon", "coordinates": [[[-87.64, 41.87], [-87.62, 41.87], [-87.62, 41.89], [-87.64, 41.89], [-87.64, 41.87]]]},
    }]}))
    [loop] = load_neighborhoods(path)
    assert loop.name == "Loop"
    assert loop.ring[0] == (41.87, -87.64)


def test_self_intersecting_neighborhood_is_rejected(tmp_path):
    path = tmp_path / "n.geojson"
    bowtie = [[[0, 0], [1, 1], [1, 0], [0, 1], [0, 0]]]
    path.write_text(json.dumps([{"name": "bow", "type": "Polygon", "coordinates": bowtie}]))
    with pytest.raises(CorpusLoadError, match="self-intersecting"):
        load_neighborhoods(path)


def test_external_points(tmp_path):
    path = tmp_path / "ext.csv"
    path.write_text("label,lat,lon\nWealthy,41.88,-87.63\nlively,41.9,-87.7\n")
    points = load_external_points(path)
    assert [p.label for p in points] == ["wealthy", "lively"]


@pytest.mark.parametrize("content", ["", "label,lat,lon\n"])
def test_empty_external_file_raises(tmp_path, content):
    path = tmp_path / "ext.csv"
    path.write_text(content)
    with pytest.raises(AnalysisError):
        load_external_points(path)
