"""Exception types raised across the package.

Every error derives from :class:`GranularError` so the command-line front end
can map it to an exit code and a one-line record.
"""


class GranularError(Exception):
    """Base class for all package errors."""

    kind = "error"


class SchemaError(GranularError, KeyError):
    """An attribute, table or column name does not exist."""

    kind = "schema_error"

    def __str__(self) -> str:
        # KeyError would repr() the message
        return str(self.args[0]) if self.args else ""


class KindError(GranularError, TypeError):
    """A value or operation does not fit the kind of its column."""

    kind = "type_error"


class ParameterError(GranularError, ValueError):
    """Invalid parameter such as ``k = 0`` or a threshold outside ``(0, 1]``."""

    kind = "parameter_error"


class DomainError(GranularError, ValueError):
    """An operation is undefined for its input (empty universe, empty RH, ...)."""

    kind = "domain_error"


class OutOfRangeError(GranularError, IndexError):
    """An index or value lies outside the range it must fall in."""

    kind = "out_of_range"


class DataError(GranularError, ValueError):
    """Malformed input data: duplicate ids, unparsable tokens, bad rows."""

    kind = "data_error"

    def __init__(self, message: str, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)


class ReferentialError(DataError):
    """A relation row references an id missing from its entity table."""

    kind = "referential_error"
