"""
End-to-end G2G recipes: training from homophones or from respelling pairs,
and decoding-lexicon generation under a variant budget.
"""

import logging
import multiprocessing as mp
from collections import namedtuple
from dataclasses import dataclass, field

from .config import CFG, MODES
from .errors import EmptyCorpus, EmptyInput, ModelFormatError, NoHypothesis, OovGrapheme, UnsupportedCharacter
from .graphemes import am_units, default_pronunciations, normalize_written, render_units
from .homophones import (
    assign_roots,
    build_clusters,
    emit_pairs,
    load_phone_inventory,
    read_clusters,
    read_lexicon,
    read_pairs,
    write_clusters,
    write_pairs,
)
from .joint_sequence import decode_topn, train_joint_model
from .utils import atomic_write, format_float, read_lines

logger = logging.getLogger(__name__)

FALLBACK_OOV = "oov"
FALLBACK_NO_HYPOTHESIS = "no-hypothesis"

# Slots held by the graphemic defaults in mixed mode, used or not
BASELINE_SLOTS = 2


# ============================================================================
# TYPES
# ============================================================================

@dataclass(frozen=True)
class VariantBudget:
    """Maximum number of pronunciation variants per name"""

    n_max: int = 2

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")


@dataclass(frozen=True)
class VariantResult:
    """
    Pronunciation variants of one name.

    scores holds the G2G log10 score of each variant, None for defaults.
    fallback is None, or the reason G2G contributed nothing.
    """

    name: object
    variants: tuple
    scores: tuple
    fallback: str = None

    @property
    def oov(self):
        return self.fallback == FALLBACK_OOV

    def rendered(self):
        return [render_units(v) for v in self.variants]


LexiconSummary = namedtuple("LexiconSummary", ["names", "variants", "oov_fallbacks", "skipped"])

RecoveryResult = namedtuple("RecoveryResult", ["hits", "total", "rate"])


@dataclass
class DecodingLexicon:
    """Variants per unique name, in name order"""

    budget: VariantBudget
    mode: str
    entries: dict = field(default_factory=dict)
    skipped: list = field(default_factory=list)

    def variants(self, name):
        return list(self.entries[name].variants)

    @property
    def summary(self):
        return LexiconSummary(
            names=len(self.entries),
            variants=sum(len(r.variants) for r in self.entries.values()),
            oov_fallbacks=sum(1 for r in self.entries.values() if r.oov),
            skipped=len(self.skipped),
        )

    def __len__(self):
        return len(self.entries)


# ============================================================================
# TRAINING
# ============================================================================

def _text_pairs(pairs):
    return [(str(source), str(target)) for source, target in pairs]


def train_g2g_hom(lexicon_path, charlm, config=None, order=None, clusters_out=None,
                  pairs_out=None, inventory=None):
    """
    Train a G2G model from the homophones of a phonetic lexicon.

    Clusters the lexicon, picks each cluster's root with the character LM,
    maps every member to its root and trains on those pairs.

    Args:
        lexicon_path: ``written<TAB>phones`` lexicon
        charlm: Trained CharLM for root selection
        config: AlignmentConfig (default: from CFG)
        order: Graphone LM order (default: GRAPHONE_LM_ORDER)
        clusters_out: Optional path for the cluster file
        pairs_out: Optional path for the training pair file

    Returns:
        G2GModel

    Raises:
        EmptyCorpus: the lexicon has no homophone cluster
    """
    lexicon = read_lexicon(lexicon_path, inventory)
    if not lexicon:
        raise EmptyCorpus(f"No lexicon entries in {lexicon_path}")
    clusters = assign_roots(build_clusters(lexicon), charlm)
    if not clusters:
        raise EmptyCorpus(f"No homophone clusters in {lexicon_path}")
    pairs = emit_pairs(clusters)
    logger.info("%d clusters, %d training pairs", len(clusters), len(pairs))

    if clusters_out:
        write_clusters(clusters_out, clusters)
    if pairs_out:
        write_pairs(pairs_out, pairs)
    return train_joint_model(_text_pairs(pairs), config, order, "g2g")


def train_g2g_from_pairs(pairs_path, config=None, order=None):
    """
    Train a G2G model on ``written<TAB>respelling`` pairs, such as the
    output of a TTS and lexicon-free recognition round trip.

    Raises:
        ParseError: a malformed line
        EmptyCorpus: no pairs
    """
    pairs = read_pairs(pairs_path)
    if not pairs:
        raise EmptyCorpus(f"No respelling pairs in {pairs_path}")
    logger.info("Read %d training pairs from %s", len(pairs), pairs_path)
    return train_joint_model(_text_pairs(pairs), config, order, "g2g")


def train_g2g_from_clusters(clusters_path, config=None, order=None):
    """
    Train a G2G model on a cluster file written by ``cluster``, keeping the
    roots recorded there.

    Raises:
        ParseError: a malformed line
        EmptyCorpus: no clusters
    """
    clusters = read_clusters(clusters_path)
    if not clusters:
        raise EmptyCorpus(f"No homophone clusters in {clusters_path}")
    pairs = emit_pairs(clusters)
    logger.info("%d clusters, %d training pairs", len(clusters), len(pairs))
    return train_joint_model(_text_pairs(pairs), config, order, "g2g")


def train_g2p(lexicon_path, config=None, order=None, inventory=None):
    """
    Train a grapheme-to-phoneme model with the G2G recipe.

    Targets are phone sequences; decoded outputs are space-separated phones.
    """
    inventory = load_phone_inventory() if inventory is None else inventory
    lexicon = sorted(set(read_lexicon(lexicon_path, inventory)))
    if not lexicon:
        raise EmptyCorpus(f"No lexicon entries in {lexicon_path}")
    pairs = [(tuple(entry.written.text), entry.phones) for entry in lexicon]
    return train_joint_model(pairs, config, order, "g2p")


# ============================================================================
# VARIANT GENERATION
# ============================================================================

def _decode_with_retry(model, name, n, beam):
    """Decode the name as written, then lower-cased if that yields nothing"""
    candidates = [name.text]
    if name.text.lower() != name.text:
        candidates.append(name.text.lower())

    error = None
    for text in candidates:
        try:
            return decode_topn(model, text, n=n, beam=beam), None
        except OovGrapheme as e:
            error = error or FALLBACK_OOV
            logger.debug("%s: %s", text, e)
        except NoHypothesis as e:
            error = FALLBACK_NO_HYPOTHESIS
            logger.debug("%s: %s", text, e)
    return [], error


def _require_g2g(model):
    if model is not None and model.model_type != "g2g":
        raise ModelFormatError(f"Pronunciation variants need a g2g model, got a {model.model_type} model")


def generate_variants(model, name, budget, mode=None, beam=None):
    """
    Pronunciation variants of a name under a budget.

    In ``mixed`` mode the default pronunciations come first and hold the
    first BASELINE_SLOTS slots, even when a name has a single default.
    G2G decodes fill the slots after those in score order, skipping any
    that duplicate a variant already present. ``defaults-only`` skips G2G,
    ``g2g-only`` skips the defaults. When G2G produces nothing the
    defaults are used and the result records why.

    Args:
        model: G2GModel (may be None in defaults-only mode)
        name: WrittenForm
        budget: VariantBudget
        mode: One of MODES (default: MODE)
        beam: Decoder beam (default: max(BEAM, budget))

    Returns:
        VariantResult

    Raises:
        ModelFormatError: the model is not a G2G model
    """
    mode = mode or CFG.MODE
    if mode not in MODES:
        raise ValueError(f"Unknown mode: {mode}")
    n_max = budget.n_max
    defaults = default_pronunciations(name)

    if mode == "defaults-only":
        kept = defaults[:n_max]
        return VariantResult(name, tuple(kept), (None,) * len(kept))

    _require_g2g(model)
    if mode == "g2g-only":
        variants, slots = [], n_max
    else:
        variants, slots = defaults[:n_max], n_max - BASELINE_SLOTS
    scores = [None] * len(variants)
    if slots <= 0:
        return VariantResult(name, tuple(variants), tuple(scores))
    # Enough decodes to fill the slots even if some repeat a default
    n_decode = slots + len(defaults)
    beam = max(CFG.BEAM, n_decode) if beam is None else max(beam, n_decode)
    hypotheses, fallback = _decode_with_retry(model, name, n_decode, beam)

    seen = {render_units(v) for v in defaults}
    added = 0
    for hyp in hypotheses:
        if added >= slots:
            break
        if not hyp.output:
            continue
        units = am_units(hyp.output)
        rendered = render_units(units)
        if rendered in seen:
            continue
        seen.add(rendered)
        variants.append(units)
        scores.append(hyp.logprob)
        added += 1

    if not variants:
        kept = defaults[:n_max]
        return VariantResult(name, tuple(kept), (None,) * len(kept), fallback or FALLBACK_NO_HYPOTHESIS)
    return VariantResult(name, tuple(variants), tuple(scores), fallback)


def read_names(path):
    """
    Read a names file, one name per line.

    Returns:
        (sorted unique WrittenForms, list of (line_no, raw) that were skipped)
    """
    names = set()
    skipped = []
    for line_no, line in read_lines(path):
        if not line.strip():
            continue
        try:
            names.add(normalize_written(line))
        except (UnsupportedCharacter, EmptyInput) as e:
            logger.warning("%s:%d: skipping name: %s", path, line_no, e)
            skipped.append((line_no, line))
    return sorted(names), skipped


_worker_state = {}


def _init_worker(model, budget, mode, beam):
    _worker_state.update(model=model, budget=budget, mode=mode, beam=beam)


def _generate_in_worker(name):
    s = _worker_state
    return generate_variants(s["model"], name, s["budget"], s["mode"], s["beam"])


def build_decoding_lexicon(names_path, model, budget, mode=None, jobs=None, beam=None):
    """
    Generate the decoding lexicon for a names file.

    Args:
        names_path: UTF-8 file, one name per line
        model: G2GModel (None allowed in defaults-only mode)
        budget: VariantBudget
        mode: One of MODES (default: MODE)
        jobs: Worker processes (default: JOBS); results keep name order

    Returns:
        DecodingLexicon

    Raises:
        EmptyCorpus: no usable name in the file
    """
    mode = mode or CFG.MODE
    jobs = jobs or CFG.JOBS
    beam = CFG.BEAM if beam is None else beam
    if model is None and mode != "defaults-only":
        raise ValueError(f"Mode {mode!r} needs a G2G model")
    _require_g2g(model)

    names, skipped = read_names(names_path)
    if not names:
        raise EmptyCorpus(f"No usable names in {names_path}")

    if jobs > 1 and len(names) > 1:
        with mp.Pool(jobs, initializer=_init_worker, initargs=(model, budget, mode, beam)) as pool:
            results = list(pool.imap(_generate_in_worker, names, chunksize=16))
    else:
        results = [generate_variants(model, name, budget, mode, beam) for name in names]

    lexicon = DecodingLexicon(budget, mode, {r.name: r for r in results}, skipped)
    summary = lexicon.summary
    logger.info(
        "Lexicon: %d names, %d variants, %d OOV fallbacks, %d skipped lines",
        summary.names, summary.variants, summary.oov_fallbacks, summary.skipped,
    )
    return lexicon


def write_lexicon(path, lexicon, scores=False):
    """
    Write ``name<TAB>variant-index<TAB>units`` rows, indices from 1.

    With scores=True a fourth column holds the G2G log10 score, ``-`` for
    default variants.
    """
    with atomic_write(path) as f:
        for name, result in lexicon.entries.items():
            for index, (units, score) in enumerate(zip(result.variants, result.scores), start=1):
                row = f"{name}\t{index}\t{render_units(units)}"
                if scores:
                    row += "\t" + ("-" if score is None else format_float(score))
                f.write(row + "\n")


# ============================================================================
# EVALUATION
# ============================================================================

def evaluate_homophone_recovery(model, held_out, roots, n=5, beam=None):
    """
    Fraction of held-out spellings whose cluster root is among the top-n
    decodes.

    Args:
        held_out: List of WrittenForm
        roots: Matching list of root WrittenForms

    Returns:
        RecoveryResult(hits, total, rate)
    """
    if len(held_out) != len(roots):
        raise ValueError("held_out and roots must have the same length")
    beam = max(CFG.BEAM, n) if beam is None else beam
    hits = 0
    for written, root in zip(held_out, roots):
        try:
            outputs = [h.output for h in decode_topn(model, str(written), n=n, beam=beam)]
        except (OovGrapheme, NoHypothesis) as e:
            logger.debug("%s: %s", written, e)
            continue
        if str(root) in outputs:
            hits += 1
    total = len(held_out)
    rate = hits / total if total else 0.0
    logger.info("Recovered %d of %d roots in the top %d (%.3f)", hits, total, n, rate)
    return RecoveryResult(hits, total, rate)
