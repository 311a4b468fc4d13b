import logging
import random
import re
import string

import pytest

from respell.errors import EmptyCorpus, ModelFormatError, ParseError
from respell.graphemes import WrittenForm, default_pronunciations, render_units
from respell.joint_sequence import align_em, decode_topn, train_joint_model
from respell.pipeline import (
    BASELINE_SLOTS,
    FALLBACK_OOV,
    VariantBudget,
    build_decoding_lexicon,
    generate_variants,
    read_names,
    train_g2g_from_clusters,
    train_g2g_from_pairs,
    train_g2g_hom,
    train_g2p,
    write_lexicon,
)

W = WrittenForm


def rendered(result):
    return [render_units(v) for v in result.variants]


# ============================================================================
# VARIANT GENERATION
# ============================================================================

class TestGenerateVariants:
    def test_budget_of_one(self, name_model):
        result = generate_variants(name_model, W("Kaity"), VariantBudget(1))
        assert rendered(result) == ["K_WB a i t y_WB"]
        assert result.fallback is None

    def test_defaults_come_first(self, name_model):
        result = generate_variants(name_model, W("Kaity"), VariantBudget(2))
        assert rendered(result) == ["K_WB a i t y_WB", "k_WB a i t y_WB"]
        assert result.scores == (None, None)

    def test_g2g_fills_remaining_slots(self, name_model):
        result = generate_variants(name_model, W("Kaity"), VariantBudget(5))
        variants = rendered(result)
        assert variants[:3] == ["K_WB a i t y_WB", "k_WB a i t y_WB", "K_WB a t i e_WB"]
        assert len(variants) <= 5
        assert len(variants) == len(set(variants))
        assert result.scores[:2] == (None, None)
        assert all(s is not None for s in result.scores[2:])

    def test_g2g_only(self, name_model):
        result = generate_variants(name_model, W("Kaity"), VariantBudget(1), mode="g2g-only")
        assert rendered(result) == ["K_WB a t i e_WB"]

    def test_defaults_only_needs_no_model(self):
        result = generate_variants(None, W("Kaity"), VariantBudget(5), mode="defaults-only")
        assert rendered(result) == ["K_WB a i t y_WB", "k_WB a i t y_WB"]

    def test_oov_falls_back_to_defaults(self, name_model):
        result = generate_variants(name_model, W("Kaitz"), VariantBudget(3))
        assert rendered(result) == ["K_WB a i t z_WB", "k_WB a i t z_WB"]
        assert result.fallback == FALLBACK_OOV
        assert result.oov

        result = generate_variants(name_model, W("Kaitz"), VariantBudget(1), mode="g2g-only")
        assert rendered(result) == ["K_WB a i t z_WB"]
        assert result.oov

    def test_lower_case_retry(self, identity_model):
        result = generate_variants(identity_model, W("AB"), VariantBudget(1), mode="g2g-only")
        assert rendered(result) == ["a_WB b_WB"]
        assert result.fallback is None

    def test_unknown_mode(self, name_model):
        with pytest.raises(ValueError):
            generate_variants(name_model, W("Kaity"), VariantBudget(2), mode="best")

    def test_budget_must_be_positive(self):
        with pytest.raises(ValueError):
            VariantBudget(0)

    def test_single_default_still_holds_two_slots(self):
        model = train_joint_model([("ly", "lee"), ("lee", "lee")])
        result = generate_variants(model, W("ly"), VariantBudget(2))
        assert rendered(result) == ["l_WB y_WB"]
        result = generate_variants(model, W("ly"), VariantBudget(3))
        assert rendered(result) == ["l_WB y_WB", "l_WB e e_WB"]

    def test_g2p_model_rejected(self, data_path):
        model = train_g2p(data_path("demo_lexicon.tsv"))
        with pytest.raises(ModelFormatError):
            generate_variants(model, W("Michael"), VariantBudget(3))
        with pytest.raises(ModelFormatError):
            generate_variants(model, W("Michael"), VariantBudget(1), mode="g2g-only")


# ============================================================================
# DECODING LEXICON
# ============================================================================

@pytest.fixture(scope="module")
def alphabet_model(name_pairs):
    letters = string.ascii_letters
    return train_joint_model(name_pairs + [(c, c) for c in letters], order=3)


@pytest.fixture(scope="module")
def names_file(tmp_path_factory):
    rng = random.Random(7)
    names = set()
    while len(names) < 100:
        length = rng.randint(2, 6)
        name = rng.choice(string.ascii_uppercase)
        name += "".join(rng.choice("aeiouyklmnrst") for _ in range(length))
        # Some lower-case names, which have a single default
        names.add(name.lower() if len(names) % 10 == 0 else name)
    path = tmp_path_factory.mktemp("names") / "names.txt"
    path.write_text("\n".join(sorted(names)) + "\n")
    return str(path)


def test_budget_sweep(alphabet_model, names_file):
    lexicons = {
        n: build_decoding_lexicon(names_file, alphabet_model, VariantBudget(n), mode="mixed")
        for n in (2, 3, 4, 5)
    }
    for n, lexicon in lexicons.items():
        assert len(lexicon) == 100
        for name, result in lexicon.entries.items():
            variants = rendered(result)
            defaults = [render_units(v) for v in default_pronunciations(name)]
            assert variants[: len(defaults)] == defaults
            assert len(variants) == len(set(variants))
            if n == BASELINE_SLOTS:
                assert variants == defaults
            else:
                assert len(variants) <= n - (BASELINE_SLOTS - len(defaults))
            assert variants[0].startswith(name.text[0] + "_WB")
    for smaller, larger in ((2, 3), (3, 4), (4, 5)):
        for name in lexicons[smaller].entries:
            few = lexicons[smaller].variants(name)
            more = lexicons[larger].variants(name)
            assert more[: len(few)] == few


def test_two_variants_equal_defaults_only(tmp_path, alphabet_model, names_file):
    mixed = build_decoding_lexicon(names_file, alphabet_model, VariantBudget(2))
    defaults = build_decoding_lexicon(names_file, None, VariantBudget(2), mode="defaults-only")
    write_lexicon(tmp_path / "mixed.tsv", mixed)
    write_lexicon(tmp_path / "defaults.tsv", defaults)
    assert (tmp_path / "mixed.tsv").read_bytes() == (tmp_path / "defaults.tsv").read_bytes()
    assert mixed.summary == defaults.summary
    assert mixed.summary.variants < 200


def test_parallel_matches_serial(alphabet_model, names_file):
    serial = build_decoding_lexicon(names_file, alphabet_model, VariantBudget(4), jobs=1)
    parallel = build_decoding_lexicon(names_file, alphabet_model, VariantBudget(4), jobs=2)
    assert list(serial.entries) == list(parallel.entries)
    assert serial.entries == parallel.entries


def test_input_order_does_not_matter(tmp_path, alphabet_model, names_file):
    lines = open(names_file).read().split()
    random.Random(3).shuffle(lines)
    shuffled = tmp_path / "shuffled.txt"
    shuffled.write_text("\n".join(lines + lines[:10]) + "\n")
    a = build_decoding_lexicon(names_file, alphabet_model, VariantBudget(3))
    b = build_decoding_lexicon(str(shuffled), alphabet_model, VariantBudget(3))
    write_lexicon(tmp_path / "a.tsv", a, scores=True)
    write_lexicon(tmp_path / "b.tsv", b, scores=True)
    assert (tmp_path / "a.tsv").read_bytes() == (tmp_path / "b.tsv").read_bytes()


def test_lexicon_rows(tmp_path, name_model):
    names = tmp_path / "names.txt"
    names.write_text("Kaity\nKaity\n\nKaitz\n")
    lexicon = build_decoding_lexicon(str(names), name_model, VariantBudget(3))
    assert lexicon.summary == (2, 5, 1, 0)
    write_lexicon(tmp_path / "lex.tsv", lexicon, scores=True)
    rows = [line.split("\t") for line in (tmp_path / "lex.tsv").read_text().splitlines()]
    assert [r[:2] for r in rows] == [
        ["Kaity", "1"], ["Kaity", "2"], ["Kaity", "3"], ["Kaitz", "1"], ["Kaitz", "2"],
    ]
    assert rows[2][2] == "K_WB a t i e_WB"
    assert rows[0][3] == "-" and float(rows[2][3]) < 0.0


def test_skipped_names(tmp_path):
    names = tmp_path / "names.txt"
    names.write_text("Lee\nLee Ann\n李\n", encoding="utf-8")
    [name], skipped = read_names(str(names))
    assert name == W("Lee")
    assert [line_no for line_no, _ in skipped] == [2, 3]


def test_empty_names_file(tmp_path):
    names = tmp_path / "names.txt"
    names.write_text("\n\n")
    with pytest.raises(EmptyCorpus):
        build_decoding_lexicon(str(names), None, VariantBudget(2), mode="defaults-only")


def test_mixed_mode_needs_a_model(data_path):
    with pytest.raises(ValueError):
        build_decoding_lexicon(data_path("demo_names.txt"), None, VariantBudget(2), mode="mixed")


def test_g2p_model_rejected_before_reading_names(tmp_path, data_path):
    model = train_g2p(data_path("demo_lexicon.tsv"))
    with pytest.raises(ModelFormatError):
        build_decoding_lexicon(str(tmp_path / "missing.txt"), model, VariantBudget(2))


# ============================================================================
# TRAINING RECIPES
# ============================================================================

def test_homophone_training_recovers_root(tmp_path, data_path, english_lm):
    clusters = tmp_path / "clusters.tsv"
    pairs = tmp_path / "pairs.tsv"
    model = train_g2g_hom(
        data_path("demo_lexicon.tsv"), english_lm, clusters_out=str(clusters), pairs_out=str(pairs)
    )
    assert "m aI k @ l\tMichael\tMichael,Mikall,Mykol" in clusters.read_text().splitlines()
    assert "Mykol\tMichael" in pairs.read_text().splitlines()
    outputs = [h.output for h in decode_topn(model, "Mykol", n=5)]
    assert "Michael" in outputs


def test_training_from_cluster_file(tmp_path, data_path, english_lm):
    clusters = tmp_path / "clusters.tsv"
    model = train_g2g_hom(data_path("demo_lexicon.tsv"), english_lm, clusters_out=str(clusters))
    reused = train_g2g_from_clusters(str(clusters))
    assert reused.units == model.units
    assert decode_topn(reused, "Mykol", n=5) == decode_topn(model, "Mykol", n=5)


def test_empty_cluster_file(tmp_path):
    clusters = tmp_path / "clusters.tsv"
    clusters.write_text("")
    with pytest.raises(EmptyCorpus):
        train_g2g_from_clusters(str(clusters))


def test_homophone_training_without_clusters(tmp_path, english_lm):
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text("blue\tb l u:\nnight\tn aI t\n")
    with pytest.raises(EmptyCorpus):
        train_g2g_hom(str(lexicon), english_lm)


def test_pair_training(tmp_path):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("Ly\tLee\nLee\tLee\n")
    model = train_g2g_from_pairs(str(pairs))
    assert decode_topn(model, "Ly", n=1)[0].output == "Lee"


def test_single_identity_pair(tmp_path):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("Lee\tLee\n")
    model = train_g2g_from_pairs(str(pairs))
    assert decode_topn(model, "Lee", n=1)[0].output == "Lee"


def test_malformed_pair_line(tmp_path):
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("Ly\tLee\nLee\tLee\nKaity\n")
    with pytest.raises(ParseError) as info:
        train_g2g_from_pairs(str(pairs))
    assert info.value.line_no == 3


def test_em_progress_is_logged(caplog, name_pairs):
    caplog.set_level(logging.INFO, logger="respell.joint_sequence")
    model = align_em(name_pairs)
    logged = [
        float(m.group(1))
        for m in (re.search(r"log-likelihood (\S+)", r.getMessage()) for r in caplog.records)
        if m
    ]
    assert len(logged) == len(model.log_likelihoods)
    assert all(after >= before - 1e-6 for before, after in zip(logged, logged[1:]))
