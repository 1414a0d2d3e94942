"""Hypothesis strategies for concepts, TBoxes and interpretations."""

from hypothesis import strategies as st

from dlreduce.semantics import Interpretation
from dlreduce.syntax import (
    TOP, And, Atomic, AtLeast, CardRestriction, Gci, Nominal, Not, RoleExpr, TcBox, TiBox,
)

CONCEPTS = ("A", "B")
ROLES = ("R", "S")
INDIVIDUALS = ("o", "p")

roles = st.builds(RoleExpr, st.sampled_from(ROLES), st.booleans())


def concepts(nominals=True, max_leaves=12, names=CONCEPTS, role_names=ROLES, max_n=3):
    leaves = [st.sampled_from([Atomic(a) for a in names]), st.just(TOP)]
    if nominals:
        leaves.append(st.sampled_from([Nominal(o) for o in INDIVIDUALS]))
    rs = st.builds(RoleExpr, st.sampled_from(role_names), st.booleans())
    return st.recursive(
        st.one_of(leaves),
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.builds(And, sub, sub),
            st.builds(AtLeast, st.integers(0, max_n), rs, sub),
        ),
        max_leaves=max_leaves,
    )


def tcboxes(nominals=False):
    r = st.builds(CardRestriction, st.sampled_from([">=", "<="]), st.integers(0, 3), concepts(nominals, 6))
    return st.lists(r, min_size=0, max_size=3).map(TcBox)


def tiboxes(nominals=True):
    g = st.builds(Gci, concepts(nominals, 6), concepts(nominals, 6))
    return st.lists(g, min_size=0, max_size=3).map(TiBox)


@st.composite
def interpretations(draw, max_size=3, names=CONCEPTS, role_names=ROLES, individuals=INDIVIDUALS):
    m = draw(st.integers(1, max_size))
    elems = st.integers(0, m - 1)
    cs = {a: draw(st.frozensets(elems)) for a in names}
    rs = {r: draw(st.frozensets(st.tuples(elems, elems))) for r in role_names}
    ns = {o: draw(elems) for o in individuals}
    return Interpretation(m, cs, rs, ns)
