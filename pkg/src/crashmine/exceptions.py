"""Exception hierarchy shared by every stage of the pipeline."""


class CrashMineError(Exception):
    """Base class for all errors raised by crashmine."""


class DataError(CrashMineError):
    """Input data cannot be processed (bad file, bad record, empty corpus)."""


class IngestError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StopwordError(DataError):
    pass


class EmptyCorpusError(DataError):
    pass


class VocabularyError(CrashMineError, KeyError):
    """A word was looked up that is not part of the corpus vocabulary."""

    def __str__(self):
        return Exception.__str__(self)


class ConfigError(CrashMineError, ValueError):
    """A configuration value violates its documented constraints."""
