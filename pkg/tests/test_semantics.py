import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlreduce.generators import torus_interpretation, torus_tcbox
from dlreduce.semantics import (
    Interpretation, InterpretationBatch, UninterpretedNominal, batch_extension, batch_is_model,
    enumerate_interpretations, extension, first_model_by_enumeration, is_model, parse_interpretation,
    render_interpretation, restrict, satisfies_card, satisfies_gci,
)
from dlreduce.syntax import (
    TOP, And, Atomic, AtLeast, CardRestriction, Gci, Nominal, Not, RoleExpr, Signature, TcBox, TiBox,
    parse_concept, parse_tbox,
)
from strategies import concepts, interpretations, tcboxes, tiboxes

A, B = Atomic("A"), Atomic("B")
R = RoleExpr("R")
R_INV = RoleExpr("R", True)


def test_complement():
    i = Interpretation(2, {"A": {0}})
    assert extension(i, Not(A)) == {1}


def test_successors_and_predecessors():
    i = Interpretation(2, {"A": {1}}, {"R": {(0, 1)}})
    assert extension(i, AtLeast(1, R, A)) == {0}
    assert extension(i, AtLeast(1, R_INV, A)) == frozenset()


def test_counting_successors():
    i = Interpretation(3, {"A": {1, 2}}, {"R": {(0, 1), (0, 2)}})
    assert extension(i, AtLeast(2, R, A)) == {0}
    assert extension(i, AtLeast(3, R, A)) == frozenset()


def test_missing_names_default_to_empty():
    i = Interpretation(2)
    assert extension(i, A) == frozenset()
    assert extension(i, AtLeast(0, R, A)) == {0, 1}


def test_missing_nominal_is_an_error():
    with pytest.raises(UninterpretedNominal):
        extension(Interpretation(2), Nominal("o"))


@pytest.mark.parametrize("kwargs", [
    dict(domain_size=0),
    dict(domain_size=2, concepts={"A": {2}}),
    dict(domain_size=2, roles={"R": {(0, 5)}}),
    dict(domain_size=2, nominals={"o": 2}),
])
def test_out_of_range_rejected(kwargs):
    with pytest.raises(ValueError):
        Interpretation(**kwargs)


def test_satisfies_card_examples():
    i = Interpretation(2, {"A": {0, 1}})
    assert satisfies_card(i, CardRestriction(">=", 0, parse_concept("(A & not A)")))
    assert satisfies_card(Interpretation(1), CardRestriction("<=", 0, A))
    assert not satisfies_card(i, CardRestriction(">=", 3, A))


def test_satisfies_gci_examples():
    i = Interpretation(1, {"A": {0}})
    assert satisfies_gci(i, Gci(A, A))
    assert not satisfies_gci(i, Gci(A, B))


def test_is_model_examples():
    assert is_model(Interpretation(3), TcBox())
    assert is_model(Interpretation(3), TiBox())
    t = TcBox([CardRestriction(">=", 1, A), CardRestriction("<=", 1, A)])
    for i in enumerate_interpretations(Signature(frozenset({"A"})), 3):
        assert is_model(i, t) == (len(i.concept("A")) == 1)


def test_hand_built_torus_is_a_model():
    assert is_model(torus_interpretation(1), torus_tcbox(1))


@settings(max_examples=200, deadline=None)
@given(concepts(), concepts(), interpretations())
def test_boolean_clauses(c, d, i):
    dom = frozenset(i.domain)
    assert extension(i, TOP) == dom
    assert extension(i, Not(c)) == dom - extension(i, c)
    assert extension(i, And(c, d)) == extension(i, c) & extension(i, d)


@settings(max_examples=200, deadline=None)
@given(concepts(), interpretations(), st.integers(0, 3), st.integers(0, 3), st.booleans())
def test_at_least_is_antitone_in_n(c, i, n, k, inv):
    role = RoleExpr("R", inv)
    assert extension(i, AtLeast(n + k, role, c)) <= extension(i, AtLeast(n, role, c))


@settings(max_examples=100, deadline=None)
@given(interpretations(max_size=3, individuals=()))
def test_inverse_duality(i):
    for a, b in itertools.product(i.domain, repeat=2):
        j = i.replace(nominals={"oa": a, "ob": b})
        there = a in extension(j, AtLeast(1, R, Nominal("ob")))
        back = b in extension(j, AtLeast(1, R_INV, Nominal("oa")))
        assert there == back


def test_gci_as_cardinality_exhaustive():
    sig = Signature(frozenset({"A"}), frozenset({"R"}))
    pairs = [
        (A, AtLeast(1, R, A)),
        (AtLeast(1, R_INV, TOP), Not(A)),
        (TOP, AtLeast(2, R, TOP)),
        (Not(A), Not(AtLeast(1, R, Not(A)))),
    ]
    for m in (1, 2, 3):
        for i in enumerate_interpretations(sig, m):
            for c, d in pairs:
                assert satisfies_gci(i, Gci(c, d)) == satisfies_card(i, CardRestriction("<=", 0, And(c, Not(d))))


@settings(max_examples=150, deadline=None)
@given(concepts(), concepts(), interpretations())
def test_gci_as_cardinality_random(c, d, i):
    assert satisfies_gci(i, Gci(c, d)) == satisfies_card(i, CardRestriction("<=", 0, And(c, Not(d))))


# -- text format ------------------------------------------------------------


def test_text_round_trip():
    i = Interpretation(3, {"A": {0, 2}}, {"R": {(0, 1), (2, 2)}}, {"o": 1})
    text = render_interpretation(i)
    assert text == "domain 3\nconcept A = {0,2}\nrole R = {(0,1),(2,2)}\nnominal o = 1\n"
    assert parse_interpretation(text) == i


@settings(max_examples=100, deadline=None)
@given(interpretations())
def test_text_round_trip_random(i):
    assert parse_interpretation(render_interpretation(i)) == i


@pytest.mark.parametrize("text", [
    "domain 2\nconcept A = {2}\n",
    "domain 2\nrole R = {(0,3)}\n",
    "domain 2\nnominal o = 7\n",
    "concept A = {0}\n",
    "domain 2\nfrobnicate\n",
])
def test_text_rejects_bad_input(text):
    with pytest.raises(ValueError):
        parse_interpretation(text)


def test_equality_ignores_empty_extensions():
    assert Interpretation(2, {"A": set()}) == Interpretation(2)
    assert hash(Interpretation(2, {"A": set()})) == hash(Interpretation(2))


def test_restrict_renumbers():
    i = Interpretation(3, {"A": {0, 2}}, {"R": {(0, 2), (1, 2)}}, {"o": 2})
    j = restrict(i, {0, 2})
    assert j == Interpretation(2, {"A": {0, 1}}, {"R": {(0, 1)}}, {"o": 1})


# -- enumeration and batches ---------------------------------------------------


def test_enumeration_counts():
    sig = Signature(frozenset({"A"}), frozenset({"R"}), frozenset({"o"}))
    for m in (1, 2):
        items = list(enumerate_interpretations(sig, m))
        assert len(items) == InterpretationBatch.count(sig, m) == 2 ** (m + m * m) * m
        assert len(set(items)) == len(items)


def test_batch_decodes_in_enumeration_order():
    sig = Signature(frozenset({"A", "B"}), frozenset({"R"}), frozenset({"o", "p"}))
    items = list(enumerate_interpretations(sig, 2))
    batch = InterpretationBatch.from_codes(sig, 2, np.arange(len(items)))
    assert [batch.interpretation(b) for b in range(batch.size)] == items


@settings(max_examples=60, deadline=None)
@given(concepts(), st.lists(interpretations(max_size=3), min_size=1, max_size=8))
def test_batch_extension_matches_reference(c, items):
    m = items[0].domain_size
    items = [i for i in items if i.domain_size == m]
    batch = InterpretationBatch.from_interpretations(items)
    got = batch_extension(batch, c)
    for b, i in enumerate(items):
        assert frozenset(np.flatnonzero(got[b]).tolist()) == extension(i, c)


@settings(max_examples=60, deadline=None)
@given(st.one_of(tcboxes(nominals=True), tiboxes()), st.lists(interpretations(max_size=3), min_size=1, max_size=8))
def test_batch_is_model_matches_reference(t, items):
    m = items[0].domain_size
    items = [i for i in items if i.domain_size == m]
    batch = InterpretationBatch.from_interpretations(items)
    assert batch_is_model(batch, t).tolist() == [is_model(i, t) for i in items]


def test_first_model_by_enumeration():
    t = parse_tbox("card atleast 2 : A\n")
    assert first_model_by_enumeration(t, 3) == Interpretation(2, {"A": {0, 1}})
    assert first_model_by_enumeration(parse_tbox("card atleast 1 : A\ncard atmost 0 : A\n"), 3) is None
