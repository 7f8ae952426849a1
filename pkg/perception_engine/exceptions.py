"""
Error hierarchy for the perception engine.
Pure functions raise these directly; orchestration code logs and re-raises them.
"""


class PerceptionEngineError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(PerceptionEngineError):
    pass


class CorpusLoadError(PerceptionEngineError):
    pass


class LexiconLoadError(PerceptionEngineError):
    pass


class VocabularyError(PerceptionEngineError):
    """Empty vocabulary after minCount filtering, or an out-of-vocabulary lookup."""


class ModelFormatError(PerceptionEngineError):
    pass


class GraphError(PerceptionEngineError):
    pass


class NoCommunitiesError(PerceptionEngineError):
    def __init__(self, message: str = "no communities found"):
        super().__init__(message)


class UnknownLabelError(PerceptionEngineError):
    pass


class AnalysisError(PerceptionEngineError):
    pass


class StageError(PerceptionEngineError):
    """A pipeline stage failed; carries the stage name and the original cause."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
