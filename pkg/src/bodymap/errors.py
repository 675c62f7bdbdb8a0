"""Exception hierarchy shared across the toolkit.

Every error carries a short machine-parseable ``category`` used by the
CLI to print one-line diagnostics and pick exit codes.
"""


class BodymapError(Exception):
    """Base class for all toolkit errors."""

    category = "error"


class ParseError(BodymapError):
    """A data file could not be parsed."""

    category = "parse"


class ValidationError(BodymapError):
    """A value violates a documented invariant."""

    category = "validation"


class ConfigError(BodymapError):
    """Bad run configuration (paths, flags, env)."""

    category = "config"


class TransportError(BodymapError):
    """The backend could not be reached or answered with a failure status."""

    category = "transport"


class ConstraintError(BodymapError):
    """No schema-conforming completion after exhausting the repair budget."""

    category = "constraint"

    def __init__(self, message: str, rejected: list[str] | None = None):
        super().__init__(message)
        self.rejected = rejected or []
