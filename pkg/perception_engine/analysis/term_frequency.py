"""
Stem frequencies of a document set (word-cloud data), most frequent first, ties in lexicographic order.
"""
from collections import Counter
from typing import Iterable

from perception_engine.schemas import Document, LabeledDocument

TERM_COLUMNS = ("stem", "count")


def term_frequencies(docs: Iterable[Document | LabeledDocument]) -> list[tuple[str, int]]:
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update((doc.doc if isinstance(doc, LabeledDocument) else doc).stems())
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))
