"""Exception hierarchy shared by every CSM-H-R module."""

from typing import Optional


class CSMError(Exception):
    """Base class of all engine errors."""


class ConfigError(CSMError):
    """Invalid settings or generator configuration."""


class FormatError(CSMError):
    """Malformed input record or category path."""

    def __init__(self, message: str, line_no: Optional[int] = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class NotFoundError(CSMError, KeyError):
    """Unknown index, URI, object or attribute."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "not found"


class ArityError(CSMError, ValueError):
    """State path of the wrong length for a tensor."""


class RangeError(CSMError, ValueError):
    """Value outside its permitted range (e.g. closeness outside 0..100)."""


class InvalidRelationError(CSMError, ValueError):
    """Relation an entity cannot hold, such as one with itself."""


class ConflictError(CSMError):
    """Duplicate identifier, e.g. a threshold rule id already registered."""


class InternalError(CSMError):
    """Broken engine invariant."""


class ClosedChannelError(CSMError):
    """Publish on a closed broker channel."""


class PolicyViolationError(CSMError):
    """Identity or mapping data offered to the model channel."""


class MissingInputError(CSMError, FileNotFoundError):
    """Input file for a report does not exist."""


class LoadError(CSMError):
    """Model files could not be turned back into a domain."""


class VersionMismatchError(LoadError):
    pass


class TruncatedFileError(LoadError):
    pass


class ChecksumError(LoadError):
    pass


class DanglingIndexError(LoadError):
    pass
