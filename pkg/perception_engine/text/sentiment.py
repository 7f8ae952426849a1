"""
Word-level sentiment from a lexicon.
Missing words are neutral (0). Lookups are case-insensitive.
"""
from typing import Mapping

from perception_engine.schemas import LexiconBundle


class SentimentLexicon:
    def __init__(self, scores: Mapping[str, float]):
        self._scores = {w.lower(): float(s) for w, s in scores.items()}

    @classmethod
    def from_bundle(cls, lex: LexiconBundle) -> "SentimentLexicon":
        return cls(lex.sentiment)

    def __len__(self) -> int:
        return len(self._scores)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._scores

    def polarity(self, word: str) -> float:
        return self._scores.get(word.lower(), 0.0)

    def sent_sim(self, w1: str, w2: str) -> float:
        """Product of the two polarities: positive for agreeing signs, 0 if either is neutral."""
        return self.polarity(w1) * self.polarity(w2)


def polarity(lex: SentimentLexicon, word: str) -> float:
    return lex.polarity(word)


def sent_sim(lex: SentimentLexicon, w1: str, w2: str) -> float:
    return lex.sent_sim(w1, w2)
