"""
Joint-sequence (graphone) transduction.

A pair of symbol sequences is segmented into joint units, each pairing a
short source segment with a short target segment (either side may be empty,
not both). Training runs in three stages:

1. align_em: expectation-maximization over every segmentation of every
   training pair estimates a unigram distribution over joint units.
2. viterbi_align: each pair is cut along its single best segmentation.
3. train_graphone_lm: a Witten-Bell n-gram is trained over the resulting
   unit sequences.

decode_topn then searches for the unit sequences whose source sides spell
the input, ranking the distinct target strings by graphone-LM probability.
The same engine trains grapheme-to-grapheme and grapheme-to-phoneme models;
only the target symbols differ.
"""

import logging
import math
from collections import Counter, namedtuple
from dataclasses import dataclass, field
from functools import cached_property

from .artifacts import header_float, header_int, open_artifact, write_header
from .config import CFG
from .errors import EmptyCorpus, ModelFormatError, NoHypothesis, NoValidAlignment, OovGrapheme
from .nbest import NBestList
from .ngram import BOS, EOS, UNK, read_arpa, train_ngram, write_arpa
from .utils import atomic_write, format_float

logger = logging.getLogger(__name__)

MODEL_KIND = "g2g-model"
MODEL_VERSION = 1
MODEL_TYPES = ("g2g", "g2p")

EPSILON = "_"
SEGMENT_JOIN = ","
UNIT_SEPARATOR = "|"

# Floor for the likelihood comparison that decides whether pruning is kept
LIKELIHOOD_SLACK = 1e-12


# ============================================================================
# TYPES
# ============================================================================

def _render_segment(segment):
    return SEGMENT_JOIN.join(segment) if segment else EPSILON


def _parse_segment(text):
    return () if text == EPSILON else tuple(text.split(SEGMENT_JOIN))


@dataclass(frozen=True, order=True)
class JointUnit:
    """A (source segment, target segment) pair; rendered ``a,b|x``."""

    source: tuple
    target: tuple

    def __post_init__(self):
        if not self.source and not self.target:
            raise ValueError("A joint unit cannot be empty on both sides")

    @property
    def key(self):
        return f"{_render_segment(self.source)}{UNIT_SEPARATOR}{_render_segment(self.target)}"

    @property
    def distortion(self):
        """Distance from a one-to-one unit"""
        return abs(len(self.source) - 1) + abs(len(self.target) - 1)

    @classmethod
    def from_key(cls, key):
        source, sep, target = key.partition(UNIT_SEPARATOR)
        if not sep:
            raise ValueError(f"Not a joint unit: {key!r}")
        return cls(_parse_segment(source), _parse_segment(target))

    def __str__(self):
        return self.key


@dataclass(frozen=True)
class AlignmentConfig:
    source_cap: int = 2
    target_cap: int = 2
    max_iters: int = 50
    tolerance: float = 1e-6
    prune_threshold: float = 1e-4
    unit_penalty: float = 0.1

    def __post_init__(self):
        if self.source_cap < 1 or self.target_cap < 1:
            raise ValueError("Segment caps must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0.0 < self.unit_penalty <= 1.0:
            raise ValueError("unit_penalty must be in (0, 1]")

    def prior(self, unit):
        """Fixed weight of a unit; one-to-one units weigh 1"""
        return self.unit_penalty ** unit.distortion


@dataclass(frozen=True, eq=False)
class AlignmentModel:
    """Unigram distribution over joint units, as estimated by EM"""

    probabilities: dict
    config: AlignmentConfig = field(default_factory=AlignmentConfig)
    log_likelihoods: tuple = ()

    def probability(self, unit):
        return self.probabilities.get(unit, 0.0)

    def weight(self, unit):
        """Probability times the unit prior"""
        p = self.probabilities.get(unit, 0.0)
        return p * self.config.prior(unit) if p > 0.0 else 0.0


DecodeHypothesis = namedtuple("DecodeHypothesis", ["output", "tokens", "logprob", "rank", "units"])


# ============================================================================
# ALIGNMENT
# ============================================================================

def _symbols(side):
    """A side of a pair as a symbol tuple; strings split into characters"""
    return side if isinstance(side, tuple) else tuple(str(side))


def _as_pair(pair):
    source, target = pair
    return _symbols(source), _symbols(target)


def lattice_edges(source, target, config):
    """
    Every joint unit that can cover a span of the pair.

    Nodes are (i, j) positions, numbered i * (len(target) + 1) + j.

    Returns:
        List of (from_node, to_node, JointUnit), grouped by ascending
        from_node, which is a topological order
    """
    width = len(target) + 1
    edges = []
    for i in range(len(source) + 1):
        for j in range(len(target) + 1):
            for a in range(min(config.source_cap, len(source) - i) + 1):
                for b in range(min(config.target_cap, len(target) - j) + 1):
                    if a == 0 and b == 0:
                        continue
                    unit = JointUnit(source[i:i + a], target[j:j + b])
                    edges.append((i * width + j, (i + a) * width + (j + b), unit))
    return edges


class _AlignmentCorpus:
    """Training pairs compiled to lattices over integer unit ids"""

    def __init__(self, pairs, config):
        self.config = config
        self.units = []
        self._index = {}
        self.lattices = []

        multiplicity = Counter(_as_pair(p) for p in pairs)
        for pair in sorted(multiplicity):
            source, target = pair
            if not source or not target:
                raise NoValidAlignment(pair)
            edges = [
                (u, v, self._unit_id(unit))
                for u, v, unit in lattice_edges(source, target, config)
            ]
            n_nodes = (len(source) + 1) * (len(target) + 1)
            self.lattices.append((pair, multiplicity[pair], n_nodes, edges))
        self.priors = [config.prior(unit) for unit in self.units]

    def _unit_id(self, unit):
        if unit not in self._index:
            self._index[unit] = len(self.units)
            self.units.append(unit)
        return self._index[unit]

    def expectation(self, probs):
        """
        Forward-backward over every lattice.

        Returns:
            (corpus log-likelihood, expected count per unit id); the
            likelihood is -inf if some pair has no path left
        """
        weights = [p * prior for p, prior in zip(probs, self.priors)]
        expected = [0.0] * len(self.units)
        loglik = 0.0
        for _, multiplicity, n_nodes, edges in self.lattices:
            alpha = [0.0] * n_nodes
            alpha[0] = 1.0
            for u, v, k in edges:
                w = weights[k]
                if w and alpha[u]:
                    alpha[v] += alpha[u] * w
            z = alpha[-1]
            if z <= 0.0:
                return -math.inf, None

            beta = [0.0] * n_nodes
            beta[-1] = 1.0
            for u, v, k in reversed(edges):
                w = weights[k]
                if w and beta[v]:
                    beta[u] += w * beta[v]

            scale = multiplicity / z
            for u, v, k in edges:
                w = weights[k]
                if w:
                    expected[k] += alpha[u] * w * beta[v] * scale
            loglik += multiplicity * math.log(z)
        return loglik, expected


def _normalize(counts, keep=None):
    kept = [c if (keep is None or keep[i]) else 0.0 for i, c in enumerate(counts)]
    total = sum(kept)
    return [c / total for c in kept]


def align_em(pairs, config=None):
    """
    Estimate joint-unit probabilities by EM.

    Starts from a uniform distribution over every unit that occurs in any
    lattice. Units whose expected count falls below the prune threshold are
    dropped between iterations, unless dropping them would lower the
    likelihood, in which case pruning is switched off. Stops after
    max_iters or once the likelihood gain falls below the tolerance.

    Args:
        pairs: List of (source, target); strings or symbol tuples
        config: AlignmentConfig (default: from CFG)

    Returns:
        AlignmentModel with the per-iteration log-likelihoods (natural log)

    Raises:
        EmptyCorpus: no pairs
        NoValidAlignment: a pair with an empty side
    """
    config = config or CFG.alignment()
    pairs = list(pairs)
    if not pairs:
        raise EmptyCorpus("No training pairs for alignment")

    corpus = _AlignmentCorpus(pairs, config)
    probs = [1.0 / len(corpus.units)] * len(corpus.units)
    unpruned = None
    pruning = config.prune_threshold > 0.0
    history = []

    for iteration in range(1, config.max_iters + 1):
        loglik, expected = corpus.expectation(probs)
        if unpruned is not None and (not history or loglik < history[-1] - LIKELIHOOD_SLACK):
            logger.debug("Pruning lowered the likelihood at iteration %d; restoring units", iteration)
            probs = unpruned
            pruning = False
            loglik, expected = corpus.expectation(probs)

        history.append(loglik)
        active = sum(1 for p in probs if p > 0.0)
        logger.info("EM iteration %d: log-likelihood %.6f (%d units)", iteration, loglik, active)
        if len(history) > 1 and history[-1] - history[-2] < config.tolerance:
            break

        probs = _normalize(expected)
        unpruned = None
        if pruning:
            keep = [c >= config.prune_threshold for c in expected]
            if any(keep) and not all(keep[k] for k, p in enumerate(probs) if p > 0.0):
                unpruned = probs
                probs = _normalize(expected, keep)
    else:
        # The last M-step was never scored; keep it only if pruning did no harm
        if unpruned is not None and corpus.expectation(probs)[0] < history[-1] - LIKELIHOOD_SLACK:
            probs = unpruned

    probabilities = {unit: p for unit, p in zip(corpus.units, probs) if p > 0.0}
    logger.info("EM finished after %d iterations with %d units", len(history), len(probabilities))
    return AlignmentModel(probabilities, config, tuple(history))


def viterbi_align(pair, model):
    """
    Best segmentation of one pair under the unit probabilities.

    Ties go to fewer units, then to the lexicographically smallest
    sequence of unit keys.

    Returns:
        Tuple of JointUnit whose sources concatenate to the source and
        whose targets concatenate to the target

    Raises:
        NoValidAlignment: no segmentation uses only known units
    """
    source, target = _as_pair(pair)
    if not source or not target:
        raise NoValidAlignment((source, target))

    n_nodes = (len(source) + 1) * (len(target) + 1)
    best = [None] * n_nodes
    best[0] = (0.0, 0, (), ())
    for u, v, unit in lattice_edges(source, target, model.config):
        if best[u] is None:
            continue
        w = model.weight(unit)
        if w <= 0.0:
            continue
        score, count, keys, path = best[u]
        candidate = (score + math.log(w), count + 1, keys + (unit.key,), path + (unit,))
        incumbent = best[v]
        if incumbent is None or (-candidate[0], candidate[1], candidate[2]) < (-incumbent[0], incumbent[1], incumbent[2]):
            best[v] = candidate

    if best[-1] is None:
        raise NoValidAlignment((source, target))
    return best[-1][3]


def train_graphone_lm(aligned, order=None):
    """
    Train the n-gram model over joint-unit sequences.

    Args:
        aligned: Iterable of JointUnit sequences
        order: n-gram order (default: GRAPHONE_LM_ORDER)
    """
    order = CFG.GRAPHONE_LM_ORDER if order is None else order
    sequences = [[unit.key for unit in seq] for seq in aligned]
    if not sequences:
        raise EmptyCorpus("No aligned sequences for the graphone LM")
    return train_ngram(sequences, order)


# ============================================================================
# MODEL
# ============================================================================

class G2GModel:
    """
    Trained joint-sequence model.

    Usage:
        model = train_joint_model([("Kaity", "Katie"), ("Sera", "Sarah")])
        for hyp in decode_topn(model, "Kaity", n=3):
            print(hyp.rank, hyp.output, hyp.logprob)
    """

    def __init__(self, alignment, graphone_lm, model_type="g2g", eps_chain_cap=None,
                 version=MODEL_VERSION):
        if model_type not in MODEL_TYPES:
            raise ValueError(f"Unknown model type: {model_type}")
        self.alignment = alignment
        self.graphone_lm = graphone_lm
        self.model_type = model_type
        self.eps_chain_cap = CFG.EPS_CHAIN_CAP if eps_chain_cap is None else eps_chain_cap
        self.version = version

    @cached_property
    def units(self):
        """Joint units the graphone LM can emit"""
        return sorted(
            JointUnit.from_key(token)
            for token in self.graphone_lm.vocabulary
            if token not in (EOS, UNK)
        )

    @cached_property
    def units_by_source(self):
        index = {}
        for unit in self.units:
            index.setdefault(unit.source, []).append(unit)
        return index

    @cached_property
    def source_alphabet(self):
        return frozenset(s for unit in self.units for s in unit.source)

    @cached_property
    def target_alphabet(self):
        return frozenset(s for unit in self.units for s in unit.target)

    @property
    def max_source_length(self):
        return max((len(u.source) for u in self.units), default=0)

    def join_output(self, tokens):
        """Spell a target token sequence"""
        return "".join(tokens) if self.model_type == "g2g" else " ".join(tokens)

    def __repr__(self):
        return (
            f"G2GModel(type={self.model_type}, units={len(self.units)}, "
            f"order={self.graphone_lm.order})"
        )


def train_joint_model(pairs, config=None, order=None, model_type="g2g", eps_chain_cap=None):
    """
    Run the whole training recipe on (source, target) pairs.

    Returns:
        G2GModel
    """
    pairs = [_as_pair(p) for p in pairs]
    alignment = align_em(pairs, config)
    aligned = [viterbi_align(pair, alignment) for pair in pairs]
    lm = train_graphone_lm(aligned, order)
    model = G2GModel(alignment, lm, model_type, eps_chain_cap)
    logger.info("Trained %r from %d pairs", model, len(pairs))
    return model


# ============================================================================
# DECODING
# ============================================================================

_Partial = namedtuple("_Partial", ["score", "keys", "units"])

# Marker for "use the configured beam"; None already means exhaustive
DEFAULT_BEAM = "default"


def _extend(model, hyp, unit):
    lp = model.graphone_lm.logprob(unit.key, (BOS,) + hyp.keys)
    return _Partial(hyp.score + lp, hyp.keys + (unit.key,), hyp.units + (unit,))


def _prune(hyps, beam):
    if beam is None or len(hyps) <= beam:
        return hyps
    return sorted(hyps, key=lambda h: (-h.score, h.keys))[:beam]


def decode_topn(model, written, n=5, beam=DEFAULT_BEAM):
    """
    Rewrite an input into its n most probable distinct outputs.

    Hypotheses grow left to right over the input; a position is expanded
    once every hypothesis reaching it is known. At most eps_chain_cap
    consecutive units may consume no input. Each position keeps the
    ``beam`` best partial hypotheses; beam=None searches exhaustively.
    An output's score is its best path's graphone-LM log10 probability,
    including the end-of-sequence event.

    Args:
        model: G2GModel
        written: Input spelling (WrittenForm, string or symbol tuple)
        n: Number of distinct outputs to return
        beam: Partial hypotheses kept per position (default: BEAM)

    Returns:
        List of DecodeHypothesis, best first, ranks from 1

    Raises:
        OovGrapheme: an input symbol the model cannot consume
        NoHypothesis: no complete path survived
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    beam = CFG.BEAM if beam == DEFAULT_BEAM else beam
    if beam is not None and beam < n:
        raise ValueError(f"beam ({beam}) must be >= n ({n})")

    symbols = written if isinstance(written, tuple) else tuple(str(written))
    for position, symbol in enumerate(symbols):
        if symbol not in model.source_alphabet:
            raise OovGrapheme(symbol, position)

    by_source = model.units_by_source
    insertions = by_source.get((), [])
    max_len = model.max_source_length
    agenda = [[] for _ in range(len(symbols) + 1)]
    agenda[0].append(_Partial(0.0, (), ()))
    finished = NBestList(n)

    for position in range(len(symbols) + 1):
        frontier = agenda[position]
        layer = frontier
        for _ in range(model.eps_chain_cap):
            layer = [_extend(model, hyp, unit) for hyp in layer for unit in insertions]
            if not layer:
                break
            frontier = frontier + layer
        frontier = _prune(frontier, beam)

        if position == len(symbols):
            for hyp in frontier:
                total = hyp.score + model.graphone_lm.logprob(EOS, (BOS,) + hyp.keys)
                tokens = tuple(s for unit in hyp.units for s in unit.target)
                finished.add(model.join_output(tokens), total, hyp.keys)
            break

        for hyp in frontier:
            for length in range(1, min(max_len, len(symbols) - position) + 1):
                for unit in by_source.get(symbols[position:position + length], ()):
                    agenda[position + length].append(_extend(model, hyp, unit))
        agenda[position] = []

    results = []
    units_by_key = {unit.key: unit for unit in model.units}
    for rank, (output, logprob, keys) in enumerate(finished.get_top(n), start=1):
        units = tuple(units_by_key[k] for k in keys)
        tokens = tuple(s for unit in units for s in unit.target)
        results.append(DecodeHypothesis(output, tokens, logprob, rank, units))
    if not results:
        raise NoHypothesis("".join(symbols) if model.model_type == "g2g" else " ".join(symbols))
    return results


# ============================================================================
# MODEL FILES
# ============================================================================

def save_model(model, path):
    """Write a model atomically: header, unit inventory, graphone LM."""
    config = model.alignment.config
    fields = [
        ("type", model.model_type),
        ("order", model.graphone_lm.order),
        ("source_cap", config.source_cap),
        ("target_cap", config.target_cap),
        ("max_iters", config.max_iters),
        ("tolerance", format_float(config.tolerance)),
        ("prune_threshold", format_float(config.prune_threshold)),
        ("unit_penalty", format_float(config.unit_penalty)),
        ("eps_chain_cap", model.eps_chain_cap),
    ]
    with atomic_write(path) as f:
        write_header(f, MODEL_KIND, MODEL_VERSION, fields)
        f.write("\\units:\n")
        for unit, p in sorted(model.alignment.probabilities.items()):
            f.write(f"{unit.key}\t{format_float(math.log10(p))}\n")
        f.write("\n")
        write_arpa(f, model.graphone_lm)
    logger.debug("Saved %r to %s", model, path)


def load_model(path):
    """
    Read a model written by save_model.

    Raises:
        ArtifactIOError: missing or unreadable file
        FormatVersionMismatch: another kind of file, or another version
        ModelFormatError: truncated or malformed content
    """
    header, lines = open_artifact(path, MODEL_KIND, MODEL_VERSION)
    model_type = header.get("type")
    if model_type not in MODEL_TYPES:
        raise ModelFormatError(f"{path}: unknown model type {model_type!r}")
    try:
        config = AlignmentConfig(
            source_cap=header_int(header, "source_cap", path),
            target_cap=header_int(header, "target_cap", path),
            max_iters=header_int(header, "max_iters", path),
            tolerance=header_float(header, "tolerance", path),
            prune_threshold=header_float(header, "prune_threshold", path),
            unit_penalty=header_float(header, "unit_penalty", path),
        )
    except ValueError as e:
        raise ModelFormatError(f"{path}: {e}") from e

    line_no, text = next(lines, (None, None))
    if text != "\\units:":
        raise ModelFormatError(f"{path}:{line_no}: expected \\units: section")
    probabilities = {}
    for line_no, text in lines:
        if not text.strip():
            break
        key, _, value = text.partition("\t")
        try:
            probabilities[JointUnit.from_key(key)] = 10.0 ** float(value)
        except ValueError as e:
            raise ModelFormatError(f"{path}:{line_no}: bad unit row {text!r}") from e

    lm = read_arpa(lines, header_int(header, "order", path), source=str(path))
    return G2GModel(
        AlignmentModel(probabilities, config),
        lm,
        model_type,
        header_int(header, "eps_chain_cap", path),
    )
