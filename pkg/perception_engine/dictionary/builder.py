"""
Defining the dictionary build pipeline
review documents -> embeddings -> qualifiers -> word graph -> pruned graph -> k-clique communities -> UOP-dictionary
"""
from dataclasses import dataclass, field
from typing import Any

from perception_engine.config import PipelineConfig
from perception_engine.dictionary.communities import assemble_dictionary, k_clique_communities
from perception_engine.dictionary.word_graph import build_graph, prune
from perception_engine.embedding_model.embeddings import EmbeddingModel, TrainingConfig, train
from perception_engine.exceptions import NoCommunitiesError
from perception_engine.logging_config import get_logger
from perception_engine.schemas import Document, LexiconBundle, UopDictionary
from perception_engine.text.preprocess import extract_qualifiers
from perception_engine.text.sentiment import SentimentLexicon

logger = get_logger(__name__)


@dataclass
class DictionaryBuild:
    dictionary: UopDictionary
    model: EmbeddingModel
    report: dict[str, Any] = field(default_factory=dict)


def build_dictionary(documents: list[Document], lex: LexiconBundle, config: PipelineConfig) -> DictionaryBuild:
    sentences = [s for doc in documents for s in doc.sentences]
    report: dict[str, Any] = {"documents": len(documents), "sentences": len(sentences)}
    try:
        # ── 1. Embeddings ─────────────────────────────────────────────────────
        model = train(sentences, TrainingConfig.from_pipeline(config))
        report["vocabulary"] = model.n

        # ── 2. Qualifiers ─────────────────────────────────────────────────────
        qualifiers = extract_qualifiers(documents, lex)
        report["qualifiers"] = len(qualifiers)

        # ── 3. Graph and pruning ──────────────────────────────────────────────
        sentiment = SentimentLexicon.from_bundle(lex)
        built = build_graph(qualifiers, model, sentiment, config.alpha, min_vertices=max(config.k, 3))
        report["dropped_qualifiers"] = built.dropped
        report["V"] = built.graph.number_of_nodes()
        report["E"] = built.graph.number_of_edges()
        pruned = prune(built.graph, config.beta, mode=config.prune_mode)
        report["V_pruned"] = pruned.number_of_nodes()
        report["E_pruned"] = pruned.number_of_edges()
        report["isolated_removed"] = report["V"] - report["V_pruned"]

        # ── 4. Communities ────────────────────────────────────────────────────
        communities = k_clique_communities(pruned, config.k)
        if not communities:
            raise NoCommunitiesError(f"no communities found (k={config.k}, |V'|={report['V_pruned']})")
        dictionary, assembly = assemble_dictionary(
            communities, sentiment, model,
            alpha=config.alpha, beta=config.beta, k=config.k, label_overrides=config.label_overrides,
        )
        report["communities"] = len(dictionary.communities)
        report["overlap_words"] = assembly.overlap_words
        report["fallback_labels"] = assembly.fallback_labels
    except Exception as e:
        logger.error(f"Error building dictionary: {str(e)}")
        raise

    logger.info(f"Dictionary build finished: {report['communities']} communities from {report['qualifiers']} qualifiers")
    return DictionaryBuild(dictionary=dictionary, model=model, report=report)
