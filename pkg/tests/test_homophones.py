import random

import pytest

from respell.char_lm import score, train_char_lm
from respell.errors import InsufficientMembers, InvalidPhone, ParseError
from respell.graphemes import WrittenForm
from respell.homophones import (
    HomophoneCluster,
    LexiconEntry,
    assign_roots,
    build_clusters,
    emit_pairs,
    load_phone_inventory,
    read_clusters,
    read_lexicon,
    read_pairs,
    select_root,
    write_clusters,
    write_pairs,
)

W = WrittenForm
MICHAEL = ("m", "aI", "k", "@", "l")


def entry(text, phones):
    return LexiconEntry(W(text), tuple(phones.split()) if isinstance(phones, str) else phones)


def test_bundled_inventory():
    inventory = load_phone_inventory()
    assert len(inventory) == 47
    assert {"m", "aI", "@U", "i:", "tS", "{"} <= inventory


def test_inventory_rejects_reserved_characters(tmp_path):
    path = tmp_path / "phones.txt"
    path.write_text("a\nb|c\n")
    with pytest.raises(ParseError) as info:
        load_phone_inventory(str(path))
    assert info.value.line_no == 2


class TestClusters:
    def test_michael_cluster(self):
        lexicon = [entry(t, MICHAEL) for t in ("Mykol", "Michael", "Mikall")]
        [cluster] = build_clusters(lexicon)
        assert cluster.key == MICHAEL
        assert cluster.members == (W("Michael"), W("Mikall"), W("Mykol"))

    def test_distinct_pronunciations(self):
        lexicon = [entry("blue", "b l u:"), entry("night", "n aI t")]
        assert build_clusters(lexicon) == []

    def test_two_shared_keys(self):
        lexicon = [
            entry("blue", "b l u:"), entry("blew", "b l u:"),
            entry("night", "n aI t"), entry("knight", "n aI t"),
            entry("phoneme", "f @U n i: m"),
        ]
        clusters = build_clusters(lexicon)
        assert [len(c.members) for c in clusters] == [2, 2]
        assert [c.key for c in clusters] == sorted(c.key for c in clusters)

    def test_duplicates_and_multiple_pronunciations(self):
        lexicon = [
            entry("read", "r i: d"), entry("read", "r e d"), entry("read", "r e d"),
            entry("reed", "r i: d"), entry("red", "r e d"),
        ]
        clusters = build_clusters(lexicon)
        members = {c.key: c.members for c in clusters}
        assert members[("r", "e", "d")] == (W("read"), W("red"))
        assert members[("r", "i:", "d")] == (W("read"), W("reed"))

    def test_case_variants_stay_distinct(self):
        clusters = build_clusters([entry("Bill", "b I l"), entry("bill", "b I l")])
        assert clusters[0].members == (W("Bill"), W("bill"))

    def test_inventory_check(self):
        with pytest.raises(InvalidPhone):
            build_clusters([entry("x", "Q!"), entry("y", "Q!")], inventory=load_phone_inventory())

    def test_permutation_invariance(self, english_lm):
        lexicon = [entry(t, MICHAEL) for t in ("Michael", "Mikall", "Mykol")] + [
            entry("Katie", "k eI t i"), entry("Kaity", "k eI t i"), entry("Katy", "k eI t i"),
        ]
        expected = emit_pairs(assign_roots(build_clusters(lexicon), english_lm))
        rng = random.Random(7)
        for _ in range(5):
            shuffled = lexicon[:]
            rng.shuffle(shuffled)
            assert emit_pairs(assign_roots(build_clusters(shuffled), english_lm)) == expected


class TestRoots:
    def test_michael_is_root(self, english_lm):
        assert select_root([W("Mykol"), W("Mikall"), W("Michael")], english_lm) == W("Michael")

    def test_single_distinct_member(self, english_lm):
        with pytest.raises(InsufficientMembers):
            select_root([W("x"), W("x")], english_lm)

    def test_matches_exhaustive_scoring(self):
        lm = train_char_lm([W(t) for t in ("ab", "ab", "ba", "aab", "b")], order=3)
        members = [W(t) for t in ("ab", "ba", "abb", "bab", "a")]
        best = max(members, key=lambda w: (score(lm, w).normalized, score(lm, w).total_logprob))
        assert select_root(members, lm) == best

    def test_order_independent(self, english_lm):
        members = [W("Sarah"), W("Sara"), W("Sera")]
        assert select_root(members, english_lm) == select_root(list(reversed(members)), english_lm)


class TestPairs:
    def test_emit_pairs(self):
        cluster = HomophoneCluster(MICHAEL, (W("Michael"), W("Mikall"), W("Mykol")), W("Michael"))
        assert emit_pairs([cluster]) == [
            (W("Michael"), W("Michael")),
            (W("Mikall"), W("Michael")),
            (W("Mykol"), W("Michael")),
        ]

    def test_empty(self):
        assert emit_pairs([]) == []

    def test_pair_count_identity(self, english_lm, data_path):
        clusters = assign_roots(build_clusters(read_lexicon(data_path("demo_lexicon.tsv"))), english_lm)
        assert len(emit_pairs(clusters)) == sum(len(c.members) for c in clusters)


class TestFiles:
    def test_read_demo_lexicon(self, data_path):
        lexicon = read_lexicon(data_path("demo_lexicon.tsv"))
        assert LexiconEntry(W("Michael"), MICHAEL) in lexicon

    def test_lexicon_bad_phone(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("blue\tb l u:\nbad\tb ZZ\n")
        with pytest.raises(InvalidPhone) as info:
            read_lexicon(str(path))
        assert info.value.line_no == 2

    def test_lexicon_missing_column(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("blue\n")
        with pytest.raises(ParseError):
            read_lexicon(str(path))

    def test_lexicon_skips_unnormalizable(self, tmp_path):
        path = tmp_path / "lex.tsv"
        path.write_text("blue\tb l u:\n猫\tn\n", encoding="utf-8")
        assert [e.written for e in read_lexicon(str(path))] == [W("blue")]

    def test_cluster_round_trip(self, tmp_path, english_lm):
        lexicon = [entry(t, MICHAEL) for t in ("Michael", "Mikall", "Mykol")]
        clusters = assign_roots(build_clusters(lexicon), english_lm)
        path = tmp_path / "clusters.tsv"
        write_clusters(str(path), clusters)
        assert path.read_text() == "m aI k @ l\tMichael\tMichael,Mikall,Mykol\n"
        assert read_clusters(str(path)) == clusters

    def test_pair_round_trip(self, tmp_path):
        pairs = [(W("Kaity"), W("Katie")), (W("Sera"), W("Sarah"))]
        path = tmp_path / "pairs.tsv"
        write_pairs(str(path), pairs)
        assert read_pairs(str(path)) == pairs

    def test_malformed_pair_line(self, tmp_path):
        path = tmp_path / "pairs.tsv"
        path.write_text("Kaity\tKatie\nSera\n")
        with pytest.raises(ParseError) as info:
            read_pairs(str(path))
        assert info.value.line_no == 2
