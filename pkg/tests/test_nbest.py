import pytest

from respell.nbest import NBestList


def test_keeps_best_score_per_key():
    nbest = NBestList(5)
    nbest.add("Katie", -3.0)
    nbest.add("Katie", -1.0)
    nbest.add("Katie", -2.0)
    assert nbest.get_top() == [("Katie", -1.0, ())]


def test_bounded_and_ranked():
    nbest = NBestList(2)
    nbest.add("a", -2.0)
    nbest.add("b", -1.0)
    nbest.add("c", -3.0)
    assert [k for k, _, _ in nbest.get_top()] == ["b", "a"]
    assert len(nbest) == 2


def test_evicted_key_can_return_with_better_score():
    nbest = NBestList(1)
    nbest.add("a", -2.0)
    nbest.add("b", -1.0)
    nbest.add("a", -0.5)
    assert nbest.get_top() == [("a", -0.5, ())]


def test_ties_break_on_key_then_payload():
    nbest = NBestList(None)
    nbest.add("b", -1.0)
    nbest.add("a", -1.0)
    nbest.add("a", -1.0, payload=("z",))
    nbest.add("a", -1.0, payload=("y",))
    assert nbest.get_top() == [("a", -1.0, ()), ("b", -1.0, ())]
    assert nbest.get_top(1) == [("a", -1.0, ())]


def test_invalid_size():
    with pytest.raises(ValueError):
        NBestList(0)
