import random

import pytest
from hypothesis import given, settings

from dlreduce import corpus
from dlreduce.model_finder import (
    ConsistentWitness, DeadlineExceeded, NoModelUpTo, SearchOptions, find_model, is_consistent,
)
from dlreduce.semantics import Interpretation, first_model_by_enumeration, is_model
from dlreduce.syntax import (
    TOP, Atomic, AtLeast, CardRestriction, Gci, Nominal, RoleExpr, Signature, TcBox, TiBox, at_most,
    exists, parse_tbox,
)
from strategies import tcboxes, tiboxes

A = Atomic("A")
R = RoleExpr("R")


def una_box(k):
    return TiBox([Gci(Nominal("o"), at_most(k, R, TOP)), Gci(TOP, exists(R.inverse(), Nominal("o")))])


def test_contradiction_has_no_model():
    t = parse_tbox("card atleast 1 : A\ncard atmost 0 : A\n")
    assert find_model(t, SearchOptions(max_domain_size=3)) == NoModelUpTo(3)


def test_minimal_witness_is_forced():
    v = find_model(parse_tbox("card atleast 2 : A\n"), SearchOptions(max_domain_size=2))
    assert isinstance(v, ConsistentWitness)
    assert v.interpretation == Interpretation(2, {"A": {0, 1}})


def test_unique_names_example():
    extra = Signature(individuals=frozenset({"p"}))
    una = SearchOptions(max_domain_size=6, una=True, extra_signature=extra)
    assert find_model(una_box(1), una) == NoModelUpTo(6)
    assert isinstance(find_model(una_box(2), una), ConsistentWitness)
    plain = SearchOptions(max_domain_size=6, extra_signature=extra)
    assert isinstance(find_model(una_box(1), plain), ConsistentWitness)


def test_una_witness_separates_names():
    extra = Signature(individuals=frozenset({"p", "q"}))
    v = find_model(una_box(3), SearchOptions(max_domain_size=4, una=True, extra_signature=extra))
    noms = v.interpretation.nominals
    assert len(set(noms.values())) == 3


def test_options_validated():
    with pytest.raises(ValueError):
        SearchOptions(max_domain_size=0)
    with pytest.raises(ValueError):
        SearchOptions(min_domain_size=0)


def test_min_domain_size_skips_small_models():
    v = find_model(parse_tbox("card atleast 1 : A\n"), SearchOptions(min_domain_size=3, max_domain_size=3))
    assert v.size == 3


def test_deadline_reports_progress():
    with pytest.raises(DeadlineExceeded) as info:
        find_model(parse_tbox("card atleast 1 : A\n"), SearchOptions(deadline=0.0))
    assert info.value.reached == 0
    assert isinstance(info.value, TimeoutError)


def test_generous_deadline_is_harmless():
    v = find_model(parse_tbox("card atleast 2 : A\n"), SearchOptions(max_domain_size=3, deadline=60))
    assert v.size == 2


@settings(max_examples=60, deadline=None)
@given(tiboxes())
def test_witnesses_are_models(t):
    v = find_model(t, SearchOptions(max_domain_size=3))
    if isinstance(v, ConsistentWitness):
        assert v.size <= 3
        assert is_model(v.interpretation, t)


@pytest.mark.parametrize("seed", range(4))
def test_canonical_witness_is_first_by_enumeration(seed):
    # brute force over every interpretation of the signature, in the same order
    rng = random.Random(seed)
    for _ in range(15):
        t = corpus.random_tcbox(rng, names=("A",), depth=2)
        v = find_model(t, SearchOptions(max_domain_size=2))
        brute = first_model_by_enumeration(t, 2)
        if brute is None:
            assert v == NoModelUpTo(2)
        else:
            assert v.interpretation == brute


@pytest.mark.parametrize("seed", range(3))
def test_canonical_witness_with_nominals(seed):
    rng = random.Random(100 + seed)
    for _ in range(10):
        t = corpus.random_tibox(rng, names=("A",), depth=2)
        v = find_model(t, SearchOptions(max_domain_size=2))
        brute = first_model_by_enumeration(t, 2)
        assert (v.interpretation if isinstance(v, ConsistentWitness) else None) == brute


@settings(max_examples=60, deadline=None)
@given(tcboxes())
def test_bounded_completeness_against_brute_force(t):
    sig = Signature(frozenset({"A", "B"}), frozenset({"R", "S"}))
    brute = first_model_by_enumeration(t, 2, signature=sig)
    assert is_consistent(t, 2) == (brute is not None)


@settings(max_examples=60, deadline=None)
@given(tiboxes())
def test_una_only_removes_models(t):
    if is_consistent(t, 3, una=True):
        assert is_consistent(t, 3)


def test_una_brute_force_agreement():
    rng = random.Random(7)
    for _ in range(30):
        t = corpus.random_tibox(rng, names=("A",), nominals=("o", "p"), depth=2)
        brute = first_model_by_enumeration(t, 2, una=True)
        assert is_consistent(t, 2, una=True) == (brute is not None)


def test_verdicts_are_deterministic():
    rng = random.Random(3)
    boxes = [corpus.random_tcbox(rng) for _ in range(20)]
    first = [find_model(t, SearchOptions(max_domain_size=3)) for t in boxes]
    second = [find_model(t, SearchOptions(max_domain_size=3)) for t in boxes]
    assert first == second


def test_non_canonical_mode_says_so():
    v = find_model(parse_tbox("card atleast 1 : A\n"), SearchOptions(canonical=False))
    assert v.canonical is False
    assert is_model(v.interpretation, parse_tbox("card atleast 1 : A\n"))


def test_counting_gadget_needs_enough_elements():
    t = TcBox([CardRestriction(">=", 1, AtLeast(3, R, A))])
    assert find_model(t, SearchOptions(max_domain_size=2)) == NoModelUpTo(2)
    assert find_model(t, SearchOptions(max_domain_size=3)).size == 3
