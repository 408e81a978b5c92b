"""Exception hierarchy shared across the pipeline.

The CLI maps these onto its exit-code contract: anything under ``TcgenError``
is a user/config/input problem (exit 1) except ``PartialFailure`` (exit 2).
"""


class TcgenError(Exception):
    """Base class for all pipeline errors."""


class ParseError(TcgenError):
    """Irrecoverably malformed source structure."""

    def __init__(self, message: str, path: str = "", line: int = 0):
        self.path = path
        self.line = line
        loc = f"{path}:{line}: " if path or line else ""
        super().__init__(f"{loc}{message}")


class DuplicateClassError(TcgenError):
    """The same fully-qualified class name was declared in two files."""


class GraphFormatError(TcgenError):
    """Corrupt, truncated, or version-incompatible graph/index file."""


class NotFoundError(TcgenError):
    """A block, node, or file key is absent from the loaded artifacts."""


class EmbeddingError(TcgenError):
    """External embedding service failed or returned malformed vectors."""


class PromptBudgetError(TcgenError):
    """The prompt cannot fit the budget without truncating protected parts."""


class TransportError(TcgenError):
    """HTTP transport failed after exhausting retries."""

    def __init__(self, message: str, status: int | None = None):
        self.status = status
        super().__init__(message)


class AuthError(TransportError):
    """Authentication rejected (401/403); never retried."""


class ConfigError(TcgenError):
    """Invalid or unresolvable pipeline configuration."""


class PartialFailure(TcgenError):
    """A pipeline stage aborted mid-way; partial results were saved."""

    def __init__(self, message: str, partial_path: str | None = None):
        self.partial_path = partial_path
        super().__init__(message)
