"""Corpus, lexicon and report I/O."""
