"""Exception hierarchy shared by the engine and the command line driver."""
from typing import Any, Dict, Optional


class DabruError(Exception):
    """Base class for every error raised on purpose by this package."""


class ConfigError(DabruError, ValueError):
    """Unsupported Cartan label, bad flag value or bad environment variable."""


class ParseError(DabruError, ValueError):
    """Element or root text that does not follow the grammar."""


class UsageError(DabruError, ValueError):
    """A caller broke the precondition of an operation."""


class DomainError(DabruError, ValueError):
    """Input outside the mathematical domain (non-root, element outside W_T, ...)."""


class InvariantError(DabruError, AssertionError):
    """A proven identity failed or an internal cap was exceeded.

    `diagnostics` is dumped verbatim into campaign reports.
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ChainError(InvariantError):
    """No shortening chain could be built for an edge that is not a cover."""
