"""
Exception hierarchy for the respelling toolkit.
"""


class RespellError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigError(RespellError, ValueError):
    """Unknown configuration key or value out of range."""


class EmptyInput(RespellError, ValueError):
    """A written form was empty after trimming."""

    def __init__(self, raw=""):
        super().__init__(f"Empty written form: {raw!r}")
        self.raw = raw


class UnsupportedCharacter(RespellError, ValueError):
    """A character has no representation in the grapheme alphabet."""

    def __init__(self, char, position, text=None):
        where = f" in {text!r}" if text is not None else ""
        super().__init__(f"Unsupported character {char!r} at position {position}{where}")
        self.char = char
        self.position = position
        self.text = text


class EmptyCorpus(RespellError, ValueError):
    """Training was asked to run on no data."""


class InvalidOrder(RespellError, ValueError):
    """An n-gram order below 1."""

    def __init__(self, order):
        super().__init__(f"N-gram order must be >= 1, got {order}")
        self.order = order


class InvalidPhone(RespellError, ValueError):
    """A phone symbol outside the configured inventory."""

    def __init__(self, symbol, line_no=None):
        where = f" (line {line_no})" if line_no is not None else ""
        super().__init__(f"Phone {symbol!r} is not in the phone inventory{where}")
        self.symbol = symbol
        self.line_no = line_no


class InsufficientMembers(RespellError, ValueError):
    """A homophone cluster needs at least two distinct members."""


class ParseError(RespellError, ValueError):
    """A malformed line in an input file."""

    def __init__(self, path, line_no, reason):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason


class ArtifactIOError(RespellError, OSError):
    """Reading or writing an artifact failed."""


class ModelFormatError(RespellError, ValueError):
    """An artifact is truncated or structurally malformed."""


class FormatVersionMismatch(ModelFormatError):
    """An artifact is of a different kind or format version."""

    def __init__(self, expected, found):
        super().__init__(f"Expected {expected}, found {found}")
        self.expected = expected
        self.found = found


class NoValidAlignment(RespellError, ValueError):
    """No segmentation of a pair into joint units exists."""

    def __init__(self, pair):
        source, target = pair
        super().__init__(f"No valid alignment for {''.join(source)!r} -> {''.join(target)!r}")
        self.pair = pair


class OovGrapheme(RespellError, ValueError):
    """An input grapheme the model never saw as a source symbol."""

    def __init__(self, char, position):
        super().__init__(f"Grapheme {char!r} at position {position} is unknown to the model")
        self.char = char
        self.position = position


class NoHypothesis(RespellError, ValueError):
    """The search finished without a complete hypothesis."""

    def __init__(self, text):
        super().__init__(f"No complete hypothesis for {text!r}")
        self.text = text
