"""
Respelling toolkit
Learns grapheme-to-grapheme respelling models from homophones or respelling
pairs and builds pronunciation-variant lexicons for name recognition.
"""

__version__ = "0.1.0"

from .config import CFG, Config, load_config
from .errors import (
    RespellError, ConfigError, EmptyInput, UnsupportedCharacter, EmptyCorpus, InvalidOrder,
    InvalidPhone, InsufficientMembers, ParseError, ArtifactIOError, ModelFormatError,
    FormatVersionMismatch, NoValidAlignment, OovGrapheme, NoHypothesis,
)
from .graphemes import (
    WrittenForm, Tag, TaggedGrapheme, AMUnit, normalize_written, decompose, map_to_am_units,
    am_units, default_pronunciations, render_tagged, render_units,
)
from .ngram import NGramModel, train_ngram
from .char_lm import CharLM, WordScore, train_char_lm, score, save_lm, load_lm
from .homophones import (
    LexiconEntry, HomophoneCluster, build_clusters, select_root, assign_roots, emit_pairs,
    read_lexicon, read_pairs,
)
from .nbest import NBestList
from .joint_sequence import (
    JointUnit, AlignmentConfig, AlignmentModel, G2GModel, DecodeHypothesis, align_em,
    viterbi_align, train_graphone_lm, train_joint_model, decode_topn, save_model, load_model,
)
from .pipeline import (
    VariantBudget, VariantResult, DecodingLexicon, LexiconSummary, train_g2g_hom,
    train_g2g_from_pairs, train_g2g_from_clusters, train_g2p, generate_variants,
    build_decoding_lexicon, write_lexicon, evaluate_homophone_recovery,
)
from .synthetic import generate_homophone_lexicon

__all__ = [
    # Config
    'CFG', 'Config', 'load_config',
    # Errors
    'RespellError', 'ConfigError', 'EmptyInput', 'UnsupportedCharacter', 'EmptyCorpus',
    'InvalidOrder', 'InvalidPhone', 'InsufficientMembers', 'ParseError', 'ArtifactIOError',
    'ModelFormatError', 'FormatVersionMismatch', 'NoValidAlignment', 'OovGrapheme', 'NoHypothesis',
    # Graphemes
    'WrittenForm', 'Tag', 'TaggedGrapheme', 'AMUnit', 'normalize_written', 'decompose',
    'map_to_am_units', 'am_units', 'default_pronunciations', 'render_tagged', 'render_units',
    # N-gram models
    'NGramModel', 'train_ngram',
    'CharLM', 'WordScore', 'train_char_lm', 'score', 'save_lm', 'load_lm',
    # Homophones
    'LexiconEntry', 'HomophoneCluster', 'build_clusters', 'select_root', 'assign_roots',
    'emit_pairs', 'read_lexicon', 'read_pairs',
    # Joint-sequence models
    'NBestList', 'JointUnit', 'AlignmentConfig', 'AlignmentModel', 'G2GModel', 'DecodeHypothesis',
    'align_em', 'viterbi_align', 'train_graphone_lm', 'train_joint_model', 'decode_topn',
    'save_model', 'load_model',
    # Pipeline
    'VariantBudget', 'VariantResult', 'DecodingLexicon', 'LexiconSummary', 'train_g2g_hom',
    'train_g2g_from_pairs', 'train_g2g_from_clusters', 'train_g2p', 'generate_variants',
    'build_decoding_lexicon', 'write_lexicon', 'evaluate_homophone_recovery',
    # Synthetic data
    'generate_homophone_lexicon',
]
