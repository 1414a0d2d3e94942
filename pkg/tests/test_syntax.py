import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlreduce.semantics import extension
from dlreduce.syntax import (
    BOTTOM, TOP, AllRestriction, And, Atomic, AtLeast, AtMost, Bottom, CardRestriction, Exactly,
    Exists, Forall, Gci, Implies, Nominal, Not, Or, ParseError, RoleExpr, Signature, TcBox, TiBox,
    conjunction, disjunction, expand_abbreviations, node_count, parse_concept, parse_role,
    parse_surface, parse_tbox, render, signature_of, subconcepts, tbox_size,
)
from strategies import INDIVIDUALS, concepts, interpretations, roles, tcboxes, tiboxes

A, B = Atomic("A"), Atomic("B")
R = RoleExpr("R")


# -- parsing ---------------------------------------------------------------


def test_parse_qualified_at_least():
    assert parse_concept("atleast 2 hasChild . Female") == AtLeast(2, RoleExpr("hasChild"), Atomic("Female"))


def test_parse_exists_inverse():
    assert parse_concept("exists inv(R) . A") == AtLeast(1, RoleExpr("R", True), A)


def test_parse_forall_goes_through_at_most():
    assert parse_concept("forall R . A") == Not(AtLeast(1, R, Not(A)))


@pytest.mark.parametrize("text, expected", [
    ("top", TOP),
    ("bot", Not(TOP)),
    ("{o}", Nominal("o")),
    ("not not A", Not(Not(A))),
    ("(A & B)", And(A, B)),
    ("(A | B)", Not(And(Not(A), Not(B)))),
    ("(A -> B)", Not(And(Not(Not(A)), Not(B)))),
    ("atmost 1 R . A", Not(AtLeast(2, R, A))),
    ("exactly 0 R . top", And(Not(AtLeast(1, R, TOP)), AtLeast(0, R, TOP))),
    ("  ( A&B )  ", And(A, B)),
])
def test_parse_table(text, expected):
    assert parse_concept(text) == expected


@pytest.mark.parametrize("text, column", [
    ("(A & B", 7),
    ("atleast -1 R . A", 9),
    ("(A ^ B)", 4),
    ("(A B)", 4),
    ("atleast 1 R A", 13),
    ("not", 4),
    ("A & B", 3),
    ("exists inv(not) . A", 12),
])
def test_parse_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_concept(text)
    assert info.value.line == 1
    assert info.value.column == column


def test_negative_count_is_rejected_by_message():
    with pytest.raises(ParseError, match="negative"):
        parse_concept("atleast -1 R . A")


def test_unknown_operator_message():
    with pytest.raises(ParseError, match="operator"):
        parse_concept("(A B)")


def test_parse_role():
    assert parse_role("inv(R)") == RoleExpr("R", True)
    assert parse_role("R") == R
    assert RoleExpr("R", True).inverse() == R


def test_bad_identifiers_rejected():
    with pytest.raises(ValueError):
        Atomic("a b")
    with pytest.raises(ValueError):
        AtLeast(-1, R, A)
    with pytest.raises(ValueError):
        CardRestriction(">=", -2, A)


def test_signature_spaces_disjoint():
    with pytest.raises(ValueError):
        Signature(frozenset({"A"}), frozenset({"A"}))
    with pytest.raises(ValueError):
        signature_of(parse_concept("(A & atleast 1 A . top)"))


# -- TBox files ------------------------------------------------------------


def test_tbox_file_card():
    t = parse_tbox("# header\ncard atleast 1 : A\n\ncard atmost 0 : (A & B)  # trailing\ncard all : A\n")
    assert isinstance(t, TcBox)
    assert set(t) == {
        CardRestriction(">=", 1, A),
        CardRestriction("<=", 0, And(A, B)),
        CardRestriction("<=", 0, Not(A)),
    }


def test_tbox_file_gci():
    t = parse_tbox("gci {o} => A\ngci A => exists R . B\n")
    assert isinstance(t, TiBox)
    assert Gci(Nominal("o"), A) in set(t)


def test_tbox_file_rejects_mixing():
    with pytest.raises(ParseError) as info:
        parse_tbox("card atleast 1 : A\ngci A => B\n")
    assert info.value.line == 2


def test_tbox_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_tbox("card atleast 1 : A\ncard atleast 1 : (A &)\n")
    assert info.value.line == 2


def test_empty_file_is_empty_tcbox():
    assert parse_tbox("# nothing\n") == TcBox()


def test_tboxes_are_sets():
    r = CardRestriction(">=", 1, A)
    assert TcBox([r, r]) == TcBox([r])
    assert len(TcBox([r, r])) == 1
    assert TiBox([Gci(A, B), Gci(A, B)]) == TiBox([Gci(A, B)])


# -- expansion ---------------------------------------------------------------


def test_or_expansion():
    assert expand_abbreviations(Or(A, B)) == Not(And(Not(A), Not(B)))


def test_exactly_expansion():
    assert expand_abbreviations(Exactly(2, R, A)) == And(Not(AtLeast(3, R, A)), AtLeast(2, R, A))


def test_all_restriction_expansion():
    assert expand_abbreviations(AllRestriction(Or(A, B))) == CardRestriction("<=", 0, Not(Not(And(Not(A), Not(B)))))


def test_bottom_and_exists():
    assert expand_abbreviations(Bottom()) == BOTTOM
    assert expand_abbreviations(Exists(R, Bottom())) == AtLeast(1, R, Not(TOP))


def test_empty_junctions():
    assert conjunction([]) == TOP
    assert disjunction([]) == Not(TOP)
    assert disjunction([A]) == A
    assert conjunction([A, B, A]) == And(And(A, B), A)


# -- rendering ---------------------------------------------------------------


def test_render_examples():
    assert render(AtLeast(2, RoleExpr("hasChild"), Atomic("Female"))) == "atleast 2 hasChild . Female"
    assert render(Not(TOP)) == "not top"
    assert render(AtLeast(1, RoleExpr("R", True), Nominal("o"))) == "atleast 1 inv(R) . {o}"


def test_render_tbox_is_sorted():
    t = TcBox([CardRestriction(">=", 1, B), CardRestriction(">=", 1, A)])
    assert render(t) == "card atleast 1 : A\ncard atleast 1 : B\n"


@settings(max_examples=300, deadline=None)
@given(concepts())
def test_render_parse_round_trip(c):
    assert parse_concept(render(c)) == c


@settings(max_examples=100, deadline=None)
@given(st.one_of(tcboxes(nominals=True), tiboxes()))
def test_tbox_round_trip(t):
    assert parse_tbox(render(t)) == t


@settings(max_examples=200, deadline=None)
@given(concepts())
def test_expansion_idempotent_on_core(c):
    assert expand_abbreviations(c) == c


# -- surface semantics oracle -------------------------------------------------


def surface_ext(i, s):
    """Set semantics written directly for each surface constructor."""
    dom = frozenset(i.domain)

    def succ(a, r):
        if r.inverted:
            return {x for (x, y) in i.role(r.base) if y == a}
        return {y for (x, y) in i.role(r.base) if x == a}

    if isinstance(s, Atomic):
        return i.concept(s.name)
    if isinstance(s, Nominal):
        return frozenset({i.nominal(s.name)})
    if s == TOP:
        return dom
    if isinstance(s, Bottom):
        return frozenset()
    if isinstance(s, Not):
        return dom - surface_ext(i, s.arg)
    if isinstance(s, And):
        return surface_ext(i, s.left) & surface_ext(i, s.right)
    if isinstance(s, Or):
        return surface_ext(i, s.left) | surface_ext(i, s.right)
    if isinstance(s, Implies):
        return (dom - surface_ext(i, s.left)) | surface_ext(i, s.right)
    if isinstance(s, Exists):
        f = surface_ext(i, s.filler)
        return frozenset(a for a in dom if succ(a, s.role) & f)
    if isinstance(s, Forall):
        f = surface_ext(i, s.filler)
        return frozenset(a for a in dom if succ(a, s.role) <= f)
    f = surface_ext(i, s.filler)
    count = {a: len(succ(a, s.role) & f) for a in dom}
    if isinstance(s, AtLeast):
        return frozenset(a for a in dom if count[a] >= s.n)
    if isinstance(s, AtMost):
        return frozenset(a for a in dom if count[a] <= s.n)
    if isinstance(s, Exactly):
        return frozenset(a for a in dom if count[a] == s.n)
    raise TypeError(s)


surface = st.recursive(
    st.one_of(
        st.sampled_from([A, B, TOP, Bottom()]),
        st.sampled_from([Nominal(o) for o in INDIVIDUALS]),
    ),
    lambda sub: st.one_of(
        st.builds(Not, sub),
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Exists, roles, sub),
        st.builds(Forall, roles, sub),
        st.builds(AtLeast, st.integers(0, 3), roles, sub),
        st.builds(AtMost, st.integers(0, 3), roles, sub),
        st.builds(Exactly, st.integers(0, 3), roles, sub),
    ),
    max_leaves=8,
)


@settings(max_examples=400, deadline=None)
@given(surface, interpretations(max_size=4))
def test_expansion_preserves_surface_semantics(s, i):
    assert extension(i, expand_abbreviations(s)) == surface_ext(i, s)


@settings(max_examples=100, deadline=None)
@given(surface)
def test_expansion_idempotent(s):
    once = expand_abbreviations(s)
    assert expand_abbreviations(once) == once


@settings(max_examples=100, deadline=None)
@given(surface)
def test_surface_text_round_trip(s):
    # surface rendering goes through the core form; parsing the render gives the expansion
    core = expand_abbreviations(s)
    assert parse_concept(render(core)) == core


def test_parse_surface_keeps_sugar():
    assert parse_surface("(A | B)") == Or(A, B)
    assert parse_surface("forall R . bot") == Forall(R, Bottom())


# -- sizes ---------------------------------------------------------------------


def test_size_of_trivial_restriction():
    assert tbox_size(TcBox([CardRestriction(">=", 0, A)]), "unary") == 3


def test_binary_coding_is_smaller():
    c = AtLeast(4, R, A)
    assert tbox_size(c, "binary") == 1 + 3 + 1 + 1
    assert tbox_size(c, "unary") == 1 + 4 + 1 + 1
    assert tbox_size(c, "binary") < tbox_size(c, "unary")


def test_node_count_counts_every_node_once():
    assert node_count(TcBox([CardRestriction(">=", 7, AtLeast(5, R, And(A, B)))])) == 2 + 3 + 3


@settings(max_examples=200, deadline=None)
@given(st.one_of(tcboxes(nominals=True), tiboxes()))
def test_binary_never_exceeds_unary(t):
    assert tbox_size(t, "binary") <= tbox_size(t, "unary")


def test_subconcepts_post_order():
    c = And(A, Not(B))
    assert list(subconcepts(c)) == [A, B, Not(B), c]


def test_signature_of_tbox():
    t = parse_tbox("gci {o} => atleast 1 inv(R) . A\n")
    assert signature_of(t) == Signature(frozenset({"A"}), frozenset({"R"}), frozenset({"o"}))
