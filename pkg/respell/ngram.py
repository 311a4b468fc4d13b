"""
Backoff n-gram models with Witten-Bell smoothing, and their ARPA-style
text format.

Both the character LM and the graphone LM are instances of NGramModel;
only the token inventory differs.

Smoothing is interpolated Witten-Bell:

    P(w | h) = (c(h, w) + T(h) * P(w | h')) / (c(h) + T(h))

where c(h) counts events seen after context h, T(h) counts distinct
tokens seen after h, and h' drops the oldest token of h. The recursion
ends in a uniform distribution over the vocabulary (which includes
``<unk>``). Every such model is exactly representable in backoff form:
stored n-grams keep their interpolated probability, and the backoff
weight of a context is T(h) / (c(h) + T(h)).
"""

import logging
import math
from collections import Counter, defaultdict

from .errors import EmptyCorpus, InvalidOrder, ModelFormatError
from .utils import format_float

logger = logging.getLogger(__name__)

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

# ARPA placeholder probability for <s>, which is only ever a context
BOS_LOGPROB = -99.0


class NGramModel:
    """
    Immutable backoff n-gram model. All log-probabilities are base 10.

    Usage:
        lm = train_ngram([["a_B", "b_E"], ["a_S"]], order=3)
        lm.logprob("b_E", ["<s>", "a_B"])
        total, events = lm.sequence_logprob(["a_B", "b_E"])
    """

    def __init__(self, order, probs, backoffs):
        """
        Args:
            order: Maximum n-gram length
            probs: Mapping n-gram tuple -> log10 probability of its last
                token given the rest
            backoffs: Mapping context tuple -> log10 backoff weight
        """
        if order < 1:
            raise InvalidOrder(order)
        self.order = order
        self._probs = dict(probs)
        self._backoffs = dict(backoffs)
        self._vocabulary = frozenset(ngram[0] for ngram in self._probs if len(ngram) == 1)

    @property
    def vocabulary(self):
        """Predictable tokens, including </s> and <unk>"""
        return self._vocabulary

    @property
    def probs(self):
        return dict(self._probs)

    @property
    def backoffs(self):
        return dict(self._backoffs)

    def contexts(self):
        """Every context the model was trained with, empty context first"""
        return [()] + sorted(self._backoffs)

    def ngram_counts(self):
        """Number of stored n-grams per order, as written to the header"""
        counts = Counter(len(ngram) for ngram in self._probs)
        if self.order > 1 and (BOS,) in self._backoffs:
            counts[1] += 1
        return [counts.get(k, 0) for k in range(1, self.order + 1)]

    def logprob(self, token, context=()):
        """
        log10 P(token | context), backing off through shorter contexts.

        Tokens outside the vocabulary are scored as <unk>.
        """
        if token not in self._vocabulary:
            token = UNK
        context = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        penalty = 0.0
        while True:
            lp = self._probs.get(context + (token,))
            if lp is not None:
                return penalty + lp
            if not context:
                # Only reachable when <unk> itself is missing
                return penalty + BOS_LOGPROB
            penalty += self._backoffs.get(context, 0.0)
            context = context[1:]

    def sequence_logprob(self, tokens):
        """
        Score a token sequence framed by <s> and </s>.

        Returns:
            (total log10 probability, number of predicted events)
        """
        history = [BOS]
        total = 0.0
        for token in list(tokens) + [EOS]:
            total += self.logprob(token, history)
            history.append(token)
        return total, len(tokens) + 1

    def __eq__(self, other):
        if not isinstance(other, NGramModel):
            return NotImplemented
        return (
            self.order == other.order
            and self._probs == other._probs
            and self._backoffs == other._backoffs
        )

    def __repr__(self):
        return f"NGramModel(order={self.order}, ngrams={self.ngram_counts()})"


# ============================================================================
# TRAINING
# ============================================================================

def count_ngrams(sequences, order):
    """
    Count events per context.

    Each sequence is framed by <s> (context only) and </s> (predicted).

    Returns:
        dict context tuple -> Counter of next tokens
    """
    counts = defaultdict(Counter)
    for seq in sequences:
        history = [BOS]
        for token in list(seq) + [EOS]:
            longest = min(order - 1, len(history))
            for k in range(longest + 1):
                context = tuple(history[len(history) - k:]) if k else ()
                counts[context][token] += 1
            history.append(token)
    return counts


def train_ngram(sequences, order):
    """
    Train a Witten-Bell backoff model.

    Args:
        sequences: Iterable of token sequences
        order: Maximum n-gram length (>= 1)

    Returns:
        NGramModel
    """
    if order < 1:
        raise InvalidOrder(order)
    sequences = [list(seq) for seq in sequences]
    if not sequences:
        raise EmptyCorpus("Cannot train an n-gram model on an empty corpus")

    counts = count_ngrams(sequences, order)
    vocabulary = sorted(set(counts[()]) | {UNK})
    uniform = 1.0 / len(vocabulary)

    totals = {context: sum(c.values()) for context, c in counts.items()}
    types = {context: len(c) for context, c in counts.items()}
    cache = {}

    def prob(token, context):
        key = (context, token)
        if key in cache:
            return cache[key]
        lower = prob(token, context[1:]) if context else uniform
        follow = counts.get(context)
        if follow:
            n, t = totals[context], types[context]
            value = (follow[token] + t * lower) / (n + t)
        else:
            value = lower
        cache[key] = value
        return value

    probs = {}
    backoffs = {}
    for context in sorted(counts, key=lambda c: (len(c), c)):
        for token in counts[context]:
            probs[context + (token,)] = math.log10(prob(token, context))
        if context:
            n, t = totals[context], types[context]
            backoffs[context] = math.log10(t / (n + t))
    probs[(UNK,)] = math.log10(prob(UNK, ()))

    model = NGramModel(order, probs, backoffs)
    logger.debug(
        "Trained %d-gram model: %d sequences, %d vocabulary, %s n-grams",
        order, len(sequences), len(vocabulary), model.ngram_counts(),
    )
    return model


# ============================================================================
# ARPA-STYLE TEXT FORMAT
# ============================================================================

def write_arpa(f, model):
    """
    Write the ``\\data\\`` block of a model, ending with ``\\end\\``.

    Rows are ``logprob<TAB>tokens<TAB>backoff``, sorted within each order,
    so identical models produce identical bytes.
    """
    f.write("\\data\\\n")
    for k, count in enumerate(model.ngram_counts(), start=1):
        f.write(f"ngram {k}={count}\n")

    probs = model.probs
    backoffs = model.backoffs
    rows_by_order = defaultdict(list)
    for ngram, lp in probs.items():
        rows_by_order[len(ngram)].append((ngram, lp))
    if model.order > 1 and (BOS,) in backoffs:
        rows_by_order[1].append(((BOS,), BOS_LOGPROB))

    for k in range(1, model.order + 1):
        f.write(f"\n\\{k}-grams:\n")
        for ngram, lp in sorted(rows_by_order[k]):
            bow = backoffs.get(ngram, 0.0)
            f.write(f"{format_float(lp)}\t{' '.join(ngram)}\t{format_float(bow)}\n")
    f.write("\n\\end\\\n")


def read_arpa(lines, order, source="<model>"):
    """
    Parse a ``\\data\\`` block.

    Args:
        lines: Iterator of (line_no, text) positioned at or before ``\\data\\``
        order: Expected model order
        source: Name used in error messages

    Returns:
        NGramModel

    Raises:
        ModelFormatError: missing sections, bad rows, count mismatch or
            missing ``\\end\\``
    """
    def fail(line_no, reason):
        raise ModelFormatError(f"{source}:{line_no}: {reason}")

    expected = {}
    probs = {}
    backoffs = {}
    section = None
    seen = Counter()
    started = ended = False
    last_line = 0

    for line_no, line in lines:
        last_line = line_no
        text = line.strip()
        if not text:
            continue
        if not started:
            if text != "\\data\\":
                fail(line_no, f"expected \\data\\, found {text!r}")
            started = True
            continue
        if text == "\\end\\":
            ended = True
            break
        if text.startswith("ngram ") and section is None:
            key, _, value = text[len("ngram "):].partition("=")
            try:
                expected[int(key)] = int(value)
            except ValueError:
                fail(line_no, f"bad count line {text!r}")
            continue
        if text.startswith("\\") and text.endswith("-grams:"):
            try:
                section = int(text[1:-len("-grams:")])
            except ValueError:
                fail(line_no, f"bad section header {text!r}")
            if section < 1 or section > order:
                fail(line_no, f"section {section} outside order {order}")
            continue
        if section is None:
            fail(line_no, f"row outside any section: {text!r}")

        fields = line.split("\t")
        if len(fields) != 3:
            fail(line_no, "expected 'logprob<TAB>tokens<TAB>backoff'")
        try:
            lp = float(fields[0])
            bow = float(fields[2])
        except ValueError:
            fail(line_no, "non-numeric probability or backoff")
        ngram = tuple(fields[1].split(" "))
        if len(ngram) != section:
            fail(line_no, f"{len(ngram)} tokens in the {section}-grams section")
        seen[section] += 1
        if ngram == (BOS,):
            backoffs[ngram] = bow
            continue
        probs[ngram] = lp
        if bow != 0.0:
            backoffs[ngram] = bow

    if not started:
        fail(last_line, "missing \\data\\ block")
    if not ended:
        fail(last_line, "truncated model: missing \\end\\")
    for k in range(1, order + 1):
        if expected.get(k, 0) != seen.get(k, 0):
            fail(last_line, f"{k}-grams: header says {expected.get(k, 0)}, found {seen.get(k, 0)}")
    return NGramModel(order, probs, backoffs)
