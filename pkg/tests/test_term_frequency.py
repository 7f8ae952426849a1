from perception_engine.analysis.term_frequency import term_frequencies

from conftest import make_doc, make_labeled


def test_counts_stems():
    assert term_frequencies([make_doc("d", ["great", "great", "park"])]) == [("great", 2), ("park", 1)]


def test_empty_input():
    assert term_frequencies([]) == []


def test_ties_are_lexicographic():
    docs = [make_doc("a", ["zoo", "art"]), make_doc("b", ["mid"])]
    assert term_frequencies(docs) == [("art", 1), ("mid", 1), ("zoo", 1)]


def test_labelled_documents_are_unwrapped():
    labelled = make_labeled("x", {"GREAT"})
    assert term_frequencies([labelled]) == []
