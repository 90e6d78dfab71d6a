class EahnError(Exception):
    """Base class for codec errors."""


class FormatError(EahnError):
    """Bad magic, unknown version, or an otherwise unrecognised container."""


class CorruptStreamError(EahnError):
    """The bit stream cannot be decoded (truncated, trailing bits, bad codeword)."""


class MissingCodewordError(EahnError, KeyError):
    """A (symbol, context) pair has no codeword in an adaptive code table."""

    def __init__(self, symbol, context):
        self.symbol = symbol
        self.context = tuple(context)
        super().__init__(f"no codeword for symbol {symbol!r} in context {self.context!r}")

    def __str__(self) -> str:
        return self.args[0]
