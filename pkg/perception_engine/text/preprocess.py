"""
Text preprocessing
- Expands contractions, strips URLs, numbers, punctuation, special characters and stopwords
- Splits sentences on terminal punctuation before it is stripped
- Stems with Porter's reference implementation (nltk MARTIN_EXTENSIONS: bli->ble, logi->log)
- Picks out qualifier words by adjective-lexicon membership
"""
import re
from functools import lru_cache
from typing import Iterable

from nltk.stem.porter import PorterStemmer
from nltk.tokenize import RegexpTokenizer

from perception_engine.logging_config import get_logger
from perception_engine.schemas import Document, LexiconBundle, RawRecord, Sentence

logger = get_logger(__name__)

URL_PATTERN = re.compile(r"(?:https?://|ftp://|www\.)\S+", re.IGNORECASE)
SENTENCE_BOUNDARY = re.compile(r"[.!?;]+")
MIN_TOKEN_LENGTH = 2

_tokenizer = RegexpTokenizer(r"[\w']+")
_stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    """Porter stem of a lowercase alphabetic token."""
    return _stemmer.stem(word)


@lru_cache(maxsize=256)
def _contraction_pattern(keys: frozenset[str]) -> re.Pattern | None:
    if not keys:
        return None
    alternatives = "|".join(re.escape(k) for k in sorted(keys, key=len, reverse=True))
    return re.compile(rf"(?<![\w'])(?:{alternatives})(?![\w'])")


def _expand_contractions(text: str, lex: LexiconBundle) -> str:
    pattern = _contraction_pattern(frozenset(lex.contractions))
    if pattern is None:
        return text
    return pattern.sub(lambda match: lex.contractions[match.group(0)], text)


def _clean_token(token: str) -> str:
    # possessive 's and stray apostrophes
    if token.endswith("'s"):
        token = token[:-2]
    return token.replace("'", "")


def normalize(text: str, lex: LexiconBundle) -> list[Sentence]:
    """
    Turn raw text into stemmed sentences.
    Empty sentences (everything removed) are dropped, so "" gives [].
    """
    text = URL_PATTERN.sub(" ", text.lower())
    text = _expand_contractions(text.replace("’", "'"), lex)

    sentences = []
    for chunk in SENTENCE_BOUNDARY.split(text):
        surfaces, stems = [], []
        for raw in _tokenizer.tokenize(chunk):
            if any(ch.isdigit() for ch in raw):
                continue
            token = _clean_token(raw)
            if len(token) < MIN_TOKEN_LENGTH or not token.isalpha() or token in lex.stopwords:
                continue
            token_stem = stem(token)
            if not token_stem or token_stem in lex.stopwords:
                continue
            surfaces.append(token)
            stems.append(token_stem)
        if surfaces:
            sentences.append(Sentence(stems=tuple(stems), surfaces=tuple(surfaces)))
    return sentences


def preprocess_record(record: RawRecord, lex: LexiconBundle) -> Document:
    geo = (record.lat, record.lon) if record.has_geo else None
    return Document(id=record.id, sentences=tuple(normalize(record.text, lex)), timestamp=record.timestamp, geo=geo)


def preprocess_corpus(records: Iterable[RawRecord], lex: LexiconBundle) -> list[Document]:
    documents = [preprocess_record(r, lex) for r in records]
    n_sentences = sum(len(d.sentences) for d in documents)
    logger.info(f"Preprocessed {len(documents)} documents into {n_sentences} sentences")
    return documents


def extract_qualifiers(corpus: Iterable[Document], lex: LexiconBundle) -> set[str]:
    """Surface words found in the adjective lexicon; the lexicon is the only tagger."""
    surfaces = {w for doc in corpus for w in doc.surfaces()}
    qualifiers = surfaces & set(lex.adjectives)
    logger.info(f"Extracted {len(qualifiers)} qualifiers from {len(surfaces)} distinct surface words")
    return qualifiers
