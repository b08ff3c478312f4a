"""Exception hierarchy shared across the pipeline."""


class VulnlabError(Exception):
    """Base class for all domain errors raised by this package."""


class ConfigError(VulnlabError):
    """Invalid or incomplete pipeline configuration."""


class AuthError(VulnlabError):
    """Missing or rejected API credentials in live mining mode."""


class NetworkError(VulnlabError):
    """Transport failure after retries were exhausted."""


class NotFound(VulnlabError):
    """A requested commit or resource does not exist."""


class FixtureError(VulnlabError):
    """A recorded fixture file is malformed."""


class DiffParseError(VulnlabError):
    """Malformed unified diff. Carries the 1-based line number of the offender."""

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class BlockExtractionError(VulnlabError):
    """Hunk line numbers are inconsistent with the file they claim to describe."""


class LexError(VulnlabError):
    """Strict-mode lexing failure. Carries 1-based line and 0-based column."""

    def __init__(self, message, line, column):
        super().__init__(f"line {line}, col {column}: {message}")
        self.line = line
        self.column = column


class EmptyVocabulary(VulnlabError):
    """No token survived the vocabulary min-count threshold."""


class VectorFileError(VulnlabError):
    """Malformed vector file. Carries the 1-based line number of the offender."""

    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class DimensionMismatch(VulnlabError):
    """Vector or matrix shapes disagree."""


class ShapeMismatch(VulnlabError):
    """Model parameter shapes disagree with the sample being processed."""


class InsufficientData(VulnlabError):
    """Not enough samples to perform the requested split or fold assignment."""


class DivergenceError(VulnlabError):
    """Training loss became non-finite."""


class LengthMismatch(VulnlabError):
    """Prediction and truth sequences have different lengths."""


class EmptyEvaluation(VulnlabError):
    """No samples available to compute metrics over."""


class ModelFileError(VulnlabError):
    """Malformed or incompatible classifier model file."""


class IoError(VulnlabError):
    """Report emission failed."""
