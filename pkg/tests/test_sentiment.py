import pytest

from perception_engine.text.sentiment import SentimentLexicon, polarity, sent_sim


@pytest.fixture
def lex():
    return SentimentLexicon({"great": 0.6, "good": 0.5, "worst": -0.8, "Quiet": 0.0})


def test_polarity_lookup(lex):
    assert polarity(lex, "great") == 0.6
    assert polarity(lex, "worst") == -0.8
    assert polarity(lex, "quiet") == 0.0
    assert polarity(lex, "park") == 0.0


def test_sent_sim_signs(lex):
    assert sent_sim(lex, "great", "good") == pytest.approx(0.30)
    assert sent_sim(lex, "great", "park") == 0.0
    assert sent_sim(lex, "great", "worst") == pytest.approx(-0.48)


def test_sent_sim_symmetric_and_bounded(lex):
    words = ["great", "good", "worst", "quiet", "park"]
    for a in words:
        for b in words:
            assert sent_sim(lex, a, b) == sent_sim(lex, b, a)
            assert -1.0 <= sent_sim(lex, a, b) <= 1.0
