"""Exception hierarchy for the BWT/LCP engine.

Library code raises these; only the cli turns them into exit statuses.
"""


class BwtLcpError(Exception):
    """Base class for every error raised by the engine."""


class ConfigError(BwtLcpError, ValueError):
    """Invalid run configuration or width request."""


class ContractError(BwtLcpError, ValueError):
    """A caller broke a precondition (length, width or mode mismatch)."""


class EncodingError(BwtLcpError, ValueError):
    """A value does not fit the fixed width of its list."""


class MalformedEncodingError(BwtLcpError, ValueError):
    """An interleave encoding disagrees with its component lists."""


class ListIOError(BwtLcpError, OSError):
    """File-system failure on a disk-backed list."""


class IngestError(BwtLcpError, ValueError):
    """Input collection failed validation."""


class AlphabetError(IngestError):
    """Character outside the configured alphabet."""


class LengthError(IngestError):
    """Record length differs from the collection's common length."""


class EmptyInputError(IngestError):
    """Input contained no records."""


class MemoryBudgetError(BwtLcpError, RuntimeError):
    """Resident element count exceeded the configured budget."""


class OracleSizeError(BwtLcpError, ValueError):
    """Collection too large for the in-memory reference sort."""
