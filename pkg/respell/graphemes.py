"""
Written-form normalization, grapheme decomposition, position tags and
acoustic-model units.

A word is decomposed into one grapheme per character. The first and last
graphemes of a multi-character word carry the B and E tags, a one-letter
word carries S. Tagged graphemes map to acoustic-model (AM) units, where
B, E and S all collapse onto the word-boundary unit rendered ``x_WB``.
"""

import enum
import functools
import logging
import unicodedata
from dataclasses import dataclass

from unidecode import unidecode

from .config import CFG
from .errors import EmptyInput, ParseError, UnsupportedCharacter
from .utils import read_lines

logger = logging.getLogger(__name__)

WB_SUFFIX = "_WB"


# ============================================================================
# DATA FILES
# ============================================================================

def load_alphabet(path=None):
    """
    Load the grapheme alphabet.

    Args:
        path: UTF-8 file with one symbol per line (default: bundled file)

    Returns:
        frozenset of single-character symbols
    """
    return _read_alphabet(path or CFG.GRAPHEME_ALPHABET_FILE)


@functools.lru_cache(maxsize=None)
def _read_alphabet(path):
    symbols = set()
    for line_no, line in read_lines(path):
        symbol = line.strip()
        if not symbol or symbol.startswith("#"):
            continue
        if len(symbol) != 1 or symbol.isspace():
            raise ParseError(path, line_no, f"grapheme must be a single character, got {symbol!r}")
        symbols.add(symbol)
    return frozenset(symbols)


def load_transliteration(path=None):
    """
    Load the transliteration table.

    Args:
        path: TSV file of ``source<TAB>replacement`` (default: bundled file)

    Returns:
        dict mapping a source character to its ASCII replacement
    """
    return _read_transliteration(path or CFG.TRANSLITERATION_FILE)


@functools.lru_cache(maxsize=None)
def _read_transliteration(path):
    table = {}
    for line_no, line in read_lines(path):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or len(fields[0]) != 1:
            raise ParseError(path, line_no, "expected 'character<TAB>replacement'")
        table[fields[0]] = fields[1]
    return table


# ============================================================================
# DOMAIN TYPES
# ============================================================================

@dataclass(frozen=True, order=True)
class WrittenForm:
    """A normalized surface word: case-preserved, ASCII, no whitespace."""

    text: str

    def __post_init__(self):
        if not self.text:
            raise EmptyInput(self.text)
        for position, char in enumerate(self.text):
            if char.isspace():
                raise UnsupportedCharacter(char, position, self.text)

    def __str__(self):
        return self.text

    def __len__(self):
        return len(self.text)

    def lower(self):
        return WrittenForm(self.text.lower())


class Tag(enum.Enum):
    BEGIN = "B"
    END = "E"
    SINGLETON = "S"
    INTERIOR = ""


@dataclass(frozen=True)
class TaggedGrapheme:
    symbol: str
    tag: Tag = Tag.INTERIOR

    def __str__(self):
        if self.tag is Tag.INTERIOR:
            return self.symbol
        return f"{self.symbol}_{self.tag.value}"


@dataclass(frozen=True)
class AMUnit:
    symbol: str
    boundary: bool = False

    def __str__(self):
        return self.symbol + WB_SUFFIX if self.boundary else self.symbol


# ============================================================================
# OPERATIONS
# ============================================================================

def _transliterate_char(char, table):
    if char in table:
        return table[char]
    try:
        name = unicodedata.name(char)
    except ValueError:
        return None
    if name.startswith("LATIN"):
        return unidecode(char)
    return None


def normalize_written(raw, alphabet=None, table=None):
    """
    Normalize a raw word into a WrittenForm.

    Casing is preserved. Accented Latin characters are replaced by ASCII
    equivalents, first through the transliteration table and then through
    unidecode for the remaining Latin script. Anything that still falls
    outside the alphabet is rejected.

    Args:
        raw: The raw word
        alphabet: Grapheme alphabet (default: configured alphabet)
        table: Transliteration table (default: configured table)

    Returns:
        WrittenForm

    Raises:
        EmptyInput: raw is empty after trimming
        UnsupportedCharacter: a character cannot be represented
    """
    alphabet = load_alphabet() if alphabet is None else alphabet
    table = load_transliteration() if table is None else table

    text = unicodedata.normalize("NFC", raw.strip())
    if not text:
        raise EmptyInput(raw)

    pieces = []
    for position, char in enumerate(text):
        if char in alphabet:
            pieces.append(char)
            continue
        replacement = _transliterate_char(char, table)
        if not replacement or any(c not in alphabet for c in replacement):
            raise UnsupportedCharacter(char, position, text)
        pieces.append(replacement)
    return WrittenForm("".join(pieces))


def decompose(written):
    """
    Split a word into position-tagged graphemes.

    Args:
        written: WrittenForm (or plain string)

    Returns:
        Tuple of TaggedGrapheme, one per character

    Example:
        decompose(WrittenForm("blue"))  ->  b_B l u e_E
    """
    text = str(written)
    if len(text) == 1:
        return (TaggedGrapheme(text, Tag.SINGLETON),)
    last = len(text) - 1
    return tuple(
        TaggedGrapheme(char, Tag.BEGIN if i == 0 else Tag.END if i == last else Tag.INTERIOR)
        for i, char in enumerate(text)
    )


def map_to_am_units(seq):
    """Map tagged graphemes to AM units; B, E and S become boundary units."""
    return tuple(AMUnit(g.symbol, g.tag is not Tag.INTERIOR) for g in seq)


def am_units(written):
    """Shortcut for map_to_am_units(decompose(written))"""
    return map_to_am_units(decompose(written))


def default_pronunciations(written):
    """
    Default graphemic pronunciations of a word.

    The decomposed word itself, followed by its lower-cased form when that
    differs.

    Returns:
        List of one or two AM-unit sequences, original first
    """
    variants = [am_units(written)]
    lowered = written.lower()
    if lowered != written:
        variants.append(am_units(lowered))
    return variants


# ============================================================================
# RENDERING
# ============================================================================

def render_tagged(seq):
    """'i_B n t ... g_E'"""
    return " ".join(str(g) for g in seq)


def render_units(seq):
    """'i_WB n t ... g_WB'"""
    return " ".join(str(u) for u in seq)

