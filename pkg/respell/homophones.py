"""
Homophone clusters from a phonetic lexicon.

Written forms that share an exact phone sequence form a cluster. Each
cluster gets a root, the member whose spelling the character LM finds most
conventional, and every member is paired with that root as G2G training
data.
"""

import functools
import logging
from collections import defaultdict
from dataclasses import dataclass

from .char_lm import score
from .config import CFG
from .errors import EmptyInput, InsufficientMembers, InvalidPhone, ParseError, UnsupportedCharacter
from .graphemes import WrittenForm, normalize_written
from .utils import atomic_write, read_lines

logger = logging.getLogger(__name__)


def load_phone_inventory(path=None):
    """
    Load the X-SAMPA phone inventory.

    Args:
        path: UTF-8 file, one phone per line (anything after the first
            whitespace-separated field is ignored; '#' lines are comments)

    Returns:
        frozenset of phone symbols
    """
    return _read_phone_inventory(path or CFG.PHONE_INVENTORY_FILE)


@functools.lru_cache(maxsize=None)
def _read_phone_inventory(path):
    phones = set()
    for line_no, line in read_lines(path):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        symbol = line.split()[0]
        if any(c in symbol for c in ("|", ",", " ", "\t")):
            raise ParseError(path, line_no, f"phone symbol {symbol!r} contains a reserved character")
        phones.add(symbol)
    return frozenset(phones)


@dataclass(frozen=True, order=True)
class LexiconEntry:
    written: WrittenForm
    phones: tuple

    def __post_init__(self):
        if not self.phones:
            raise InvalidPhone("", None)


@dataclass(frozen=True)
class ClusterCandidate:
    """Homophones sharing one phone sequence, before a root is chosen"""
    key: tuple
    members: tuple


@dataclass(frozen=True)
class HomophoneCluster:
    key: tuple
    members: tuple
    root: WrittenForm


# ============================================================================
# LEXICON FILES
# ============================================================================

def validate_entry(written, phones, inventory, line_no=None):
    """Build a LexiconEntry, checking every phone against the inventory"""
    for phone in phones:
        if phone not in inventory:
            raise InvalidPhone(phone, line_no)
    return LexiconEntry(written, tuple(phones))


def read_lexicon(path, inventory=None):
    """
    Read a ``written<TAB>phone phone ...`` lexicon.

    Lines whose written form cannot be normalized are skipped with a
    warning; structural problems are errors.

    Returns:
        List of LexiconEntry in file order
    """
    inventory = load_phone_inventory() if inventory is None else inventory
    entries = []
    skipped = 0
    for line_no, line in read_lines(path):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[1].split():
            raise ParseError(path, line_no, "expected 'written<TAB>phones'")
        try:
            written = normalize_written(fields[0])
        except (UnsupportedCharacter, EmptyInput) as e:
            logger.warning("%s:%d: skipping entry: %s", path, line_no, e)
            skipped += 1
            continue
        entries.append(validate_entry(written, fields[1].split(), inventory, line_no))
    logger.info("Read %d lexicon entries from %s (%d skipped)", len(entries), path, skipped)
    return entries


# ============================================================================
# CLUSTERING
# ============================================================================

def build_clusters(lexicon, inventory=None):
    """
    Group written forms by exact phone sequence.

    A word with several pronunciations can land in several clusters;
    members that differ only in case stay distinct.

    Args:
        lexicon: Iterable of LexiconEntry
        inventory: Optional phone inventory to validate against

    Returns:
        List of ClusterCandidate with at least two members, sorted by key
    """
    by_key = defaultdict(set)
    for entry in lexicon:
        if inventory is not None:
            for phone in entry.phones:
                if phone not in inventory:
                    raise InvalidPhone(phone)
        by_key[entry.phones].add(entry.written)

    candidates = [
        ClusterCandidate(key, tuple(sorted(members)))
        for key, members in sorted(by_key.items())
        if len(members) >= 2
    ]
    logger.info("Found %d homophone clusters among %d pronunciations", len(candidates), len(by_key))
    return candidates


def root_sort_key(written, lm):
    """Best root sorts first: normalized score, raw score, then spelling"""
    s = score(lm, written)
    return (-s.normalized, -s.total_logprob, written.text)


def select_root(members, lm):
    """
    Pick the member with the highest normalized character-LM score.

    Ties go to the higher total log-probability, then to the
    lexicographically smallest spelling.

    Raises:
        InsufficientMembers: fewer than two distinct members
    """
    distinct = set(members)
    if len(distinct) < 2:
        raise InsufficientMembers(f"A cluster needs two distinct members, got {sorted(map(str, distinct))}")
    return min(distinct, key=lambda w: root_sort_key(w, lm))


def assign_roots(candidates, lm):
    """Choose a root for every candidate cluster"""
    return [HomophoneCluster(c.key, c.members, select_root(c.members, lm)) for c in candidates]


def emit_pairs(clusters):
    """
    Map every cluster member to its root, the root included.

    Returns:
        Sorted, de-duplicated list of (source, target) WrittenForm pairs
    """
    pairs = {(member, cluster.root) for cluster in clusters for member in cluster.members}
    return sorted(pairs)


# ============================================================================
# CLUSTER AND PAIR FILES
# ============================================================================

def write_clusters(path, clusters):
    """``key-phones<TAB>root<TAB>member1,member2,...``"""
    with atomic_write(path) as f:
        for cluster in clusters:
            members = ",".join(m.text for m in cluster.members)
            f.write(f"{' '.join(cluster.key)}\t{cluster.root.text}\t{members}\n")


def read_clusters(path):
    clusters = []
    for line_no, line in read_lines(path):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(path, line_no, "expected 'phones<TAB>root<TAB>members'")
        members = tuple(WrittenForm(m) for m in fields[2].split(","))
        root = WrittenForm(fields[1])
        if root not in members:
            raise ParseError(path, line_no, f"root {root.text!r} is not a member")
        clusters.append(HomophoneCluster(tuple(fields[0].split()), members, root))
    return clusters


def write_pairs(path, pairs):
    """``source<TAB>target``"""
    with atomic_write(path) as f:
        for source, target in pairs:
            f.write(f"{source}\t{target}\n")


def read_pairs(path):
    """
    Read a respelling pair file.

    Returns:
        List of (source, target) WrittenForm pairs in file order

    Raises:
        ParseError: a line without exactly two non-empty columns, or a
            spelling that cannot be normalized
    """
    pairs = []
    for line_no, line in read_lines(path):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
            raise ParseError(path, line_no, "expected 'source<TAB>target'")
        try:
            pairs.append((normalize_written(fields[0]), normalize_written(fields[1])))
        except (UnsupportedCharacter, EmptyInput) as e:
            raise ParseError(path, line_no, str(e)) from e
    return pairs
