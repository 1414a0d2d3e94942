"""Translations between cardinality restrictions, nominals and concepts.

* :func:`phi` turns a T_C Box into a T_I Box with fresh nominals.
* :func:`singleton_cardinalities` goes back: GCIs become ``(<= 0 C & not D)``
  and each nominal becomes a fresh concept forced to be a singleton.
* :func:`internalise` compiles a T_I Box into one concept using a spy point.

Fresh names follow fixed schemes (``_phi_<i>_<j>``, ``A_<o>``, ``_spy``,
``_i``); a trailing ``_`` is appended while a scheme name is already taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .semantics import Interpretation
from .syntax import (
    And, Atomic, AtLeast, CardRestriction, Concept, Gci, Nominal, Not, Or, RoleExpr, TcBox,
    TiBox, Top, conjunction, disjunction, exists, expand_abbreviations, forall, signature_of,
)

__all__ = [
    "NominalLedger", "FreshnessError", "phi", "singleton_cardinalities", "singleton_ledger",
    "spy_rewrite", "internalise", "normalise", "spy_extension", "spy_subconcepts_agree", "fresh_name",
]

SPY_ROLE = "_spy"
SPY_NOMINAL = "_i"


class FreshnessError(ValueError):
    pass


def fresh_name(base: str, taken) -> str:
    while base in taken:
        base += "_"
    return base


@dataclass(frozen=True, eq=False)
class NominalLedger:
    """Fresh nominals introduced per source restriction (1-based canonical index)."""

    entries: Mapping[int, tuple[str, ...]]
    sources: Mapping[int, CardRestriction]

    def all_nominals(self) -> list[str]:
        return [o for k in sorted(self.entries) for o in self.entries[k]]

    def comments(self) -> list[str]:
        from .syntax import render

        out = []
        for k in sorted(self.entries):
            noms = " ".join(self.entries[k]) or "-"
            out.append(f"# phi {k}: {render(self.sources[k])} -> {noms}")
        return out


def phi(t: TcBox) -> tuple[TiBox, NominalLedger]:
    """Replace each cardinality restriction by GCIs over fresh, distinct nominals."""
    taken = set(signature_of(t).names())
    axioms: list[Gci] = []
    entries: dict[int, tuple[str, ...]] = {}
    sources: dict[int, CardRestriction] = {}
    kept = [r for r in t.ordered() if not (r.kind == ">=" and r.bound == 0)]
    for i, r in enumerate(kept, start=1):
        names = []
        for j in range(1, r.bound + 1):
            name = fresh_name(f"_phi_{i}_{j}", taken)
            taken.add(name)
            names.append(name)
        entries[i] = tuple(names)
        sources[i] = r
        noms = [Nominal(o) for o in names]
        if r.kind == "<=":
            axioms.append(Gci(r.concept, disjunction(noms)))
        else:
            axioms += [Gci(o, r.concept) for o in noms]
            axioms += [Gci(noms[j], Not(noms[k])) for j in range(len(noms)) for k in range(j + 1, len(noms))]
    return TiBox(axioms), NominalLedger(MappingProxyType(entries), MappingProxyType(sources))


def _replace_nominals(c: Concept, mapping: Mapping[str, str]) -> Concept:
    if isinstance(c, Nominal):
        return Atomic(mapping[c.name])
    if isinstance(c, (Atomic, Top)):
        return c
    if isinstance(c, Not):
        return Not(_replace_nominals(c.arg, mapping))
    if isinstance(c, And):
        return And(_replace_nominals(c.left, mapping), _replace_nominals(c.right, mapping))
    if isinstance(c, AtLeast):
        return AtLeast(c.n, c.role, _replace_nominals(c.filler, mapping))
    raise TypeError(f"not a core concept: {c!r}")


def singleton_ledger(t: TiBox) -> dict[str, str]:
    """Nominal name -> the fresh concept name that replaces it."""
    sig = signature_of(t)
    taken = set(sig.names())
    out = {}
    for o in sorted(sig.individuals):
        out[o] = fresh_name(f"A_{o}", taken)
        taken.add(out[o])
    return out


def singleton_cardinalities(t: TiBox) -> TcBox:
    """Nominal-free T_C Box equiconsistent with ``t``."""
    mapping = singleton_ledger(t)
    out = []
    for g in t.ordered():
        lhs = _replace_nominals(g.lhs, mapping)
        rhs = _replace_nominals(g.rhs, mapping)
        out.append(CardRestriction("<=", 0, And(lhs, Not(rhs))))
    for name in mapping.values():
        out.append(CardRestriction("<=", 1, Atomic(name)))
        out.append(CardRestriction(">=", 1, Atomic(name)))
    return TcBox(out)


def spy_rewrite(c: Concept, spy_role: str = SPY_ROLE, spy_nominal: str = SPY_NOMINAL) -> Concept:
    """Relativise every qualified count in ``c`` to successors of the spy point."""
    sig = signature_of(c)
    if spy_role in sig.roles or spy_nominal in sig.individuals:
        raise FreshnessError(f"{spy_role!r} / {spy_nominal!r} already occur in the concept")
    seen = RoleExpr(spy_role, True)
    mark = AtLeast(1, seen, Nominal(spy_nominal))

    def go(c: Concept) -> Concept:
        if isinstance(c, (Atomic, Nominal, Top)):
            return c
        if isinstance(c, Not):
            return Not(go(c.arg))
        if isinstance(c, And):
            return And(go(c.left), go(c.right))
        if isinstance(c, AtLeast):
            return AtLeast(c.n, c.role, And(mark, go(c.filler)))
        raise TypeError(f"not a core concept: {c!r}")

    return go(c)


def normalise(t: TiBox) -> list[Concept]:
    """The concepts ``C_j`` of an equivalent ``{top <= C_j}`` form, in canonical order."""
    out = []
    for g in t.ordered():
        if isinstance(g.lhs, Top):
            out.append(g.rhs)
        else:
            out.append(expand_abbreviations(Or(Not(g.lhs), g.rhs)))
    return out


def internalise(t: TiBox, reach_nominals: bool = True) -> Concept:
    """A concept that is satisfiable iff ``t`` is consistent.

    The result is ``i & C_1' & ... & forall spy. C_1' & ...`` where ``C_j'``
    is the spy rewrite of the normalised axioms.  With ``reach_nominals``
    (the default) it also conjoins ``exists spy. {o}`` for every nominal
    ``o`` of ``t``: without it, a model may park a nominal outside the
    spy point's reach, and e.g. the inconsistent ``{o} => not {o}`` would
    yield a satisfiable concept.
    """
    sig = signature_of(t)
    spy = fresh_name(SPY_ROLE, sig.names())
    i = fresh_name(SPY_NOMINAL, sig.names() | {spy})
    body = [spy_rewrite(c, spy, i) for c in normalise(t)]
    role = RoleExpr(spy)
    parts: list[Concept] = [Nominal(i)]
    parts += body
    parts += [forall(role, c) for c in body]
    if reach_nominals:
        parts += [exists(role, Nominal(o)) for o in sorted(sig.individuals)]
    return conjunction(parts)


def spy_extension(i: Interpretation, point: int, spy_role: str = SPY_ROLE, spy_nominal: str = SPY_NOMINAL):
    """Extend ``i`` with ``spy_nominal -> point`` and spy edges from ``point`` to every element."""
    return i.replace(
        roles={spy_role: {(point, b) for b in i.domain}},
        nominals={spy_nominal: point},
    )


def spy_subconcepts_agree(i: Interpretation, c: Concept, spy_role: str = SPY_ROLE, spy_nominal: str = SPY_NOMINAL) -> bool:
    """Every subconcept of ``c`` has the same extension as its spy rewrite in ``i``."""
    from .semantics import extension
    from .syntax import subconcepts

    return all(
        extension(i, spy_rewrite(d, spy_role, spy_nominal)) == extension(i, d) for d in set(subconcepts(c))
    )

