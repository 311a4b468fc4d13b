"""
Command-line interface.

    python -m respell [--config FILE] [--log-level LEVEL] [--jobs N] <command> ...

Exit codes: 0 success, 1 data or I/O error, 2 usage error.
"""

import argparse
import logging
import os
import sys

from . import __version__
from .char_lm import CHAR_LM_VERSION, load_lm, read_word_list, save_lm, train_char_lm
from .config import CFG, MODES, load_config
from .errors import ConfigError, NoHypothesis, OovGrapheme, RespellError
from .graphemes import am_units, normalize_written, render_units
from .homophones import assign_roots, build_clusters, emit_pairs, read_lexicon, write_clusters, write_pairs
from .joint_sequence import MODEL_VERSION, decode_topn, load_model, save_model
from .pipeline import (
    VariantBudget,
    build_decoding_lexicon,
    train_g2g_from_clusters,
    train_g2g_from_pairs,
    train_g2g_hom,
    train_g2p,
    write_lexicon,
)
from .synthetic import generate_homophone_lexicon, write_lexicon_entries
from .utils import atomic_write, check_readable, format_float, parse_int_list, read_lines

logger = logging.getLogger(__name__)

LOGGING_FMT = "%(levelname)s: %(name)s: %(message)s"

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad flag combination, found after parsing"""


# ============================================================================
# ARGUMENT TYPES
# ============================================================================

def _caps(text):
    """'2:2' -> (2, 2)"""
    try:
        source, target = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"caps must look like 2:2, got {text!r}")
    return source, target


def _budgets(text):
    try:
        values = parse_int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("at least one budget is required")
    return values


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_train_charlm(args):
    check_readable(args.words)
    words = read_word_list(args.words)
    lm = train_char_lm(words, CFG.CHAR_LM_ORDER)
    save_lm(lm, args.out)
    print(f"words\t{len(words)}")
    print(f"vocabulary\t{len(lm.vocabulary)}")
    print(f"model\t{args.out}")
    return EXIT_OK


def cmd_cluster(args):
    check_readable(args.lexicon)
    check_readable(args.charlm)
    lm = load_lm(args.charlm)
    clusters = assign_roots(build_clusters(read_lexicon(args.lexicon)), lm)
    pairs = emit_pairs(clusters)
    write_clusters(args.out_clusters, clusters)
    if args.out_pairs:
        write_pairs(args.out_pairs, pairs)
    print(f"clusters\t{len(clusters)}")
    print(f"pairs\t{len(pairs)}")
    return EXIT_OK


def cmd_train_g2g(args):
    if args.lexicon and not args.charlm:
        raise UsageError("--lexicon needs --charlm")
    if args.charlm and not args.lexicon:
        raise UsageError("--charlm only applies with --lexicon")

    config = CFG.alignment()
    if args.pairs:
        check_readable(args.pairs)
        model = train_g2g_from_pairs(args.pairs, config, CFG.GRAPHONE_LM_ORDER)
    elif args.clusters:
        check_readable(args.clusters)
        model = train_g2g_from_clusters(args.clusters, config, CFG.GRAPHONE_LM_ORDER)
    else:
        check_readable(args.lexicon)
        check_readable(args.charlm)
        model = train_g2g_hom(
            args.lexicon,
            load_lm(args.charlm),
            config,
            CFG.GRAPHONE_LM_ORDER,
            clusters_out=args.out_clusters,
            pairs_out=args.out_pairs,
        )
    save_model(model, args.out)
    print(f"units\t{len(model.units)}")
    print(f"model\t{args.out}")
    return EXIT_OK


def cmd_train_g2p(args):
    check_readable(args.lexicon)
    model = train_g2p(args.lexicon, CFG.alignment(), CFG.GRAPHONE_LM_ORDER)
    save_model(model, args.out)
    print(f"units\t{len(model.units)}")
    print(f"model\t{args.out}")
    return EXIT_OK


def _apply_inputs(value):
    """A file of words, one per line, or a single word"""
    if os.path.isfile(value):
        return [line.strip() for _, line in read_lines(value) if line.strip()]
    return [value]


def cmd_apply(args):
    if args.n < 1:
        raise UsageError("-n must be >= 1")
    if args.n > CFG.BEAM:
        raise UsageError(f"-n ({args.n}) must not exceed the beam ({CFG.BEAM})")
    check_readable(args.model)
    model = load_model(args.model)

    succeeded = failed = 0
    for raw in _apply_inputs(args.input):
        try:
            written = normalize_written(raw)
            hypotheses = decode_topn(model, written, n=args.n, beam=CFG.BEAM)
        except (OovGrapheme, NoHypothesis, ValueError) as e:
            logger.error("%s: %s", raw, e)
            failed += 1
            continue
        for hyp in hypotheses:
            rendered = render_units(am_units(hyp.output)) if model.model_type == "g2g" else hyp.output
            print(f"{written}\t{hyp.rank}\t{rendered}\t{format_float(hyp.logprob)}")
        succeeded += 1

    if failed:
        logger.warning("%d of %d inputs failed", failed, succeeded + failed)
    return EXIT_OK if succeeded else EXIT_DATA


def _budget_path(out, n, several):
    if not several:
        return out
    stem, suffix = os.path.splitext(out)
    return f"{stem}.n{n}{suffix}"


def cmd_build_lexicon(args):
    budgets = sorted(set(args.n or [CFG.MAX_VARIANTS]))
    if any(n < 1 for n in budgets):
        raise UsageError("every -n value must be >= 1")
    if CFG.MODE != "defaults-only" and not args.model:
        raise UsageError(f"--mode {CFG.MODE} needs --model")
    check_readable(args.names)
    model = None
    if args.model:
        check_readable(args.model)
        model = load_model(args.model)

    for n in budgets:
        lexicon = build_decoding_lexicon(args.names, model, VariantBudget(n), CFG.MODE, CFG.JOBS)
        path = _budget_path(args.out, n, len(budgets) > 1)
        write_lexicon(path, lexicon, scores=args.scores)
        s = lexicon.summary
        print(f"{path}\tnames={s.names}\tvariants={s.variants}\toov={s.oov_fallbacks}\tskipped={s.skipped}")
    return EXIT_OK


def cmd_synth_lexicon(args):
    synth = generate_homophone_lexicon()
    write_lexicon_entries(args.out, synth.training if args.held_out else synth.entries)
    if args.held_out:
        with atomic_write(args.held_out) as f:
            for member, root in zip(synth.held_out, synth.roots):
                f.write(f"{member}\t{root}\n")
    if args.out_roots:
        with atomic_write(args.out_roots) as f:
            for root in synth.roots:
                f.write(f"{root}\n")
    print(f"clusters\t{len(synth.roots)}")
    print(f"words\t{len(synth.entries)}")
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def build_parser():
    parser = argparse.ArgumentParser(
        prog="respell",
        description="Grapheme-to-grapheme respelling models and pronunciation lexicons",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"respell {__version__} (char-lm format {CHAR_LM_VERSION}, model format {MODEL_VERSION})",
    )
    parser.add_argument("--config", help="key = value settings file")
    parser.add_argument("--log-level", help=f"logging level (default: {CFG.LOG_LEVEL})")
    parser.add_argument("--jobs", type=int, help="worker processes for lexicon generation")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("train-charlm", help="train the character LM on a word list")
    p.add_argument("words", help="word list, one word per line")
    p.add_argument("--order", type=int, help=f"n-gram order (default: {CFG.CHAR_LM_ORDER})")
    p.add_argument("--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train_charlm, overrides=lambda a: {"CHAR_LM_ORDER": a.order})

    p = commands.add_parser("cluster", help="homophone clusters and root pairs from a lexicon")
    p.add_argument("lexicon", help="written<TAB>phones lexicon")
    p.add_argument("--charlm", required=True, help="character LM for root selection")
    p.add_argument("--out-clusters", required=True)
    p.add_argument("--out-pairs")
    p.set_defaults(func=cmd_cluster)

    p = commands.add_parser("train-g2g", help="train a G2G model")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--pairs", help="written<TAB>respelling pairs")
    source.add_argument("--lexicon", help="phonetic lexicon for homophone training")
    source.add_argument("--clusters", help="cluster file written by cluster")
    p.add_argument("--charlm", help="character LM (with --lexicon)")
    p.add_argument("--out-clusters")
    p.add_argument("--out-pairs")
    _add_training_flags(p)
    p.set_defaults(func=cmd_train_g2g, overrides=_training_overrides)

    p = commands.add_parser("train-g2p", help="train a grapheme-to-phoneme model")
    p.add_argument("--lexicon", required=True)
    _add_training_flags(p)
    p.set_defaults(func=cmd_train_g2p, overrides=_training_overrides)

    p = commands.add_parser("apply", help="decode words with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="a word, or a file of words")
    p.add_argument("-n", type=int, default=5, help="hypotheses per word (default: 5)")
    p.add_argument("--beam", type=int, help=f"partial hypotheses per position (default: {CFG.BEAM})")
    p.set_defaults(func=cmd_apply, overrides=lambda a: {"BEAM": a.beam})

    p = commands.add_parser("build-lexicon", help="pronunciation-variant lexicon for a names list")
    p.add_argument("--model", help="G2G model (not needed with --mode defaults-only)")
    p.add_argument("--names", required=True, help="names file, one per line")
    p.add_argument("-n", type=_budgets, default=None,
                   help=f"max variants per name, or a sweep like 2,3,4,5 (default: {CFG.MAX_VARIANTS})")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--scores", action="store_true", help="add a score column")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_lexicon, overrides=lambda a: {"MODE": a.mode})

    p = commands.add_parser("synth-lexicon", help="write the synthetic homophone lexicon")
    p.add_argument("--out", required=True, help="lexicon file to write")
    p.add_argument("--held-out", help="hold one member per cluster out and write member<TAB>root here")
    p.add_argument("--out-roots", help="write the cluster roots, one per line")
    p.set_defaults(func=cmd_synth_lexicon)
    return parser


def _add_training_flags(p):
    p.add_argument("--order", type=int, help=f"graphone LM order (default: {CFG.GRAPHONE_LM_ORDER})")
    p.add_argument("--caps", type=_caps, help="source:target segment caps (default: 2:2)")
    p.add_argument("--max-iters", type=int, help=f"EM iterations (default: {CFG.EM_MAX_ITERS})")
    p.add_argument("--out", required=True)


def _training_overrides(args):
    source_cap, target_cap = args.caps or (None, None)
    return {
        "GRAPHONE_LM_ORDER": args.order,
        "SOURCE_CAP": source_cap,
        "TARGET_CAP": target_cap,
        "EM_MAX_ITERS": args.max_iters,
    }


def _configure(args):
    """Layer config file and flags into CFG, then set up logging"""
    overrides = {"LOG_LEVEL": args.log_level, "JOBS": args.jobs}
    if hasattr(args, "overrides"):
        overrides.update(args.overrides(args))
    config = load_config(args.config, overrides)
    CFG.update(config.as_dict(), source="resolved config")

    level = getattr(logging, CFG.LOG_LEVEL.upper(), None)
    if not isinstance(level, int):
        raise ConfigError(f"Unknown log level: {CFG.LOG_LEVEL}")
    logging.basicConfig(format=LOGGING_FMT, level=level, stream=sys.stderr, force=True)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE

    try:
        _configure(args)
        return args.func(args)
    except (ConfigError, UsageError) as e:
        parser.print_usage(sys.stderr)
        print(f"respell: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RespellError as e:
        logger.error("%s", e)
        return EXIT_DATA
