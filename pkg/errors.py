"""
Exception types shared by the toolkit.

Everything derives from ValueError so callers that only care about
"bad input vs. bug" can keep catching ValueError.
"""


class InvalidInputError(ValueError):
    """Arguments violate an operation's precondition."""


class OutOfRangeError(InvalidInputError):
    """An index or code value lies outside its permitted range."""


class RankDeficientError(InvalidInputError):
    """Lattice rows are linearly dependent."""


class DimensionError(InvalidInputError):
    """Matrix shape does not fit the operation."""


class CorruptCiphertextError(ValueError):
    """A ciphertext block does not decode under the supplied key."""


class KeyMismatchError(ValueError):
    """The supplied key cannot decode the selected weights."""


class FormatError(ValueError):
    """A key, ciphertext, matrix or report file is malformed."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
