"""
Position-tagged character-level language model.

Words are decomposed into tagged graphemes (``i_B n t ... g_E``) and
modelled with a Witten-Bell backoff n-gram. The model scores how closely a
spelling follows the conventions of its training words; homophone-root
selection uses the length-normalized score.
"""

import logging
from dataclasses import dataclass

from .artifacts import header_int, open_artifact, write_header
from .config import CFG
from .errors import EmptyCorpus, EmptyInput, InvalidOrder, UnsupportedCharacter
from .graphemes import decompose, normalize_written
from .ngram import read_arpa, train_ngram, write_arpa
from .utils import atomic_write, read_lines

logger = logging.getLogger(__name__)

CHAR_LM_KIND = "char-lm"
CHAR_LM_VERSION = 1


@dataclass(frozen=True)
class WordScore:
    total_logprob: float
    token_count: int

    @property
    def normalized(self):
        """Average log10 probability per predicted event"""
        return self.total_logprob / self.token_count


class CharLM:
    """
    Character n-gram model over position-tagged graphemes.

    Usage:
        lm = train_char_lm([WrittenForm("Michael"), WrittenForm("Mike")], order=10)
        score(lm, WrittenForm("Mykol")).normalized
    """

    def __init__(self, ngram_model):
        self.ngram = ngram_model

    @property
    def order(self):
        return self.ngram.order

    @property
    def vocabulary(self):
        return self.ngram.vocabulary

    def tokens(self, written):
        """The tagged token stream the model sees for a word"""
        return [str(g) for g in decompose(written)]

    def __eq__(self, other):
        return isinstance(other, CharLM) and self.ngram == other.ngram

    def __repr__(self):
        return f"CharLM(order={self.order}, vocabulary={len(self.vocabulary)})"


def train_char_lm(words, order=None):
    """
    Train a character LM on single words.

    Args:
        words: List of WrittenForm
        order: n-gram order (default: CHAR_LM_ORDER)

    Returns:
        CharLM
    """
    order = CFG.CHAR_LM_ORDER if order is None else order
    if order < 1:
        raise InvalidOrder(order)
    words = list(words)
    if not words:
        raise EmptyCorpus("Character LM needs at least one training word")

    model = CharLM(train_ngram(([str(g) for g in decompose(w)] for w in words), order))
    logger.info(
        "Trained %d-gram character LM on %d words (%d token types)",
        order, len(words), len(model.vocabulary),
    )
    return model


def score(lm, written):
    """
    Score a word, including its end-of-word event.

    Graphemes the model never saw are scored as <unk>.

    Returns:
        WordScore
    """
    total, count = lm.ngram.sequence_logprob(lm.tokens(written))
    return WordScore(total, count)


def save_lm(lm, path):
    """Write a character LM atomically."""
    with atomic_write(path) as f:
        write_header(f, CHAR_LM_KIND, CHAR_LM_VERSION, [("order", lm.order)])
        write_arpa(f, lm.ngram)
    logger.debug("Saved character LM to %s", path)


def load_lm(path):
    """
    Read a character LM.

    Raises:
        ArtifactIOError: missing or unreadable file
        FormatVersionMismatch: not a character LM of this version
        ModelFormatError: truncated or malformed body
    """
    header, lines = open_artifact(path, CHAR_LM_KIND, CHAR_LM_VERSION)
    order = header_int(header, "order", path)
    return CharLM(read_arpa(lines, order, source=str(path)))


def read_word_list(path):
    """
    Read training words, one per line; repeats count as extra evidence.

    Lines that cannot be normalized are skipped with a warning.
    """
    words = []
    for line_no, line in read_lines(path):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            words.append(normalize_written(line))
        except (UnsupportedCharacter, EmptyInput) as e:
            logger.warning("%s:%d: skipping word: %s", path, line_no, e)
    return words
