"""
Rule-generated homophone lexicon for recovery checks.

Every cluster is an onset, a vowel and a coda. The vowel is spelled three
ways; the first spelling is the conventional one and becomes the root.
One alternate spelling per cluster is held out of training.
"""

from collections import namedtuple

from .graphemes import WrittenForm
from .homophones import LexiconEntry
from .utils import atomic_write

# (spelling, phones)
ONSETS = [
    ("B", ("b",)), ("D", ("d",)), ("K", ("k",)), ("L", ("l",)), ("M", ("m",)),
    ("N", ("n",)), ("R", ("r",)), ("T", ("t",)), ("Br", ("b", "r")), ("Tr", ("t", "r")),
]
CODAS = [("n", ("n",)), ("l", ("l",)), ("m", ("m",)), ("d", ("d",)), ("t", ("t",))]

# phone -> spellings, conventional first
VOWELS = [
    ("i:", ("ee", "ea", "ie")),
    ("eI", ("ai", "ay", "ey")),
    ("@U", ("oa", "ow", "oh")),
    ("u:", ("oo", "ue", "ew")),
]

SyntheticLexicon = namedtuple("SyntheticLexicon", ["entries", "training", "held_out", "roots"])


def generate_homophone_lexicon():
    """
    Build the synthetic lexicon: 200 clusters of three spellings.

    Returns:
        SyntheticLexicon with
          entries: every LexiconEntry
          training: entries minus the held-out spellings
          held_out: one WrittenForm per cluster
          roots: the matching conventional spellings
    """
    entries, training, held_out, roots = [], [], [], []
    cluster = 0
    for onset, onset_phones in ONSETS:
        for vowel, spellings in VOWELS:
            for coda, coda_phones in CODAS:
                phones = onset_phones + (vowel,) + coda_phones
                words = [WrittenForm(onset + s + coda) for s in spellings]
                hidden = cluster % 2 + 1
                for i, word in enumerate(words):
                    entry = LexiconEntry(word, phones)
                    entries.append(entry)
                    if i != hidden:
                        training.append(entry)
                held_out.append(words[hidden])
                roots.append(words[0])
                cluster += 1
    return SyntheticLexicon(entries, training, held_out, roots)


def write_lexicon_entries(path, entries):
    """``written<TAB>phones`` rows"""
    with atomic_write(path) as f:
        for entry in entries:
            f.write(f"{entry.written}\t{' '.join(entry.phones)}\n")
