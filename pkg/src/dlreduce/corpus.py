"""Seeded random terms and exhaustive enumerations for property checks."""

from __future__ import annotations

import itertools
import random
from typing import Iterator, Sequence

from .generators import DominoSystem
from .syntax import (
    TOP, And, Atomic, AtLeast, CardRestriction, Concept, Gci, Nominal, Not, RoleExpr, TcBox, TiBox,
)

__all__ = [
    "concept_levels", "concepts_of_depth", "random_concept", "random_tcbox", "random_tibox",
    "tcbox_corpus", "tibox_corpus", "domino_corpus",
]


def _role_exprs(roles: Sequence[str], inverse: bool) -> list[RoleExpr]:
    out = [RoleExpr(r) for r in roles]
    if inverse:
        out += [RoleExpr(r, True) for r in roles]
    return out


def _atoms(names, nominals, top) -> list[Concept]:
    out: list[Concept] = [Atomic(a) for a in names] + [Nominal(o) for o in nominals]
    if top:
        out.append(TOP)
    return out


def concepts_of_depth(
    below: Sequence[Concept],
    names: Sequence[str] = ("A",),
    roles: Sequence[str] = ("R",),
    bounds: Sequence[int] = (0, 1, 2),
    inverse: bool = True,
    nominals: Sequence[str] = (),
    top: bool = True,
) -> Iterator[Concept]:
    """Every core concept whose immediate subconcepts all come from ``below``.

    With ``below`` the concepts of depth at most ``d - 1`` this yields each
    concept of depth at most ``d`` exactly once (atoms first).
    """
    yield from _atoms(names, nominals, top)
    for c in below:
        yield Not(c)
    for c in below:
        for d in below:
            yield And(c, d)
    for n in bounds:
        for s in _role_exprs(roles, inverse):
            for c in below:
                yield AtLeast(n, s, c)


def concept_levels(depth: int, **kw) -> list[list[Concept]]:
    """``levels[d]`` lists every concept of depth at most ``d``."""
    levels = [list(_atoms(kw.get("names", ("A",)), kw.get("nominals", ()), kw.get("top", True)))]
    for _ in range(depth):
        levels.append(list(concepts_of_depth(levels[-1], **kw)))
    return levels


def random_concept(
    rng: random.Random,
    depth: int,
    names: Sequence[str] = ("A", "B"),
    roles: Sequence[str] = ("R",),
    nominals: Sequence[str] = (),
    max_bound: int = 2,
    inverse: bool = True,
) -> Concept:
    atoms = _atoms(names, nominals, True)
    rexprs = _role_exprs(roles, inverse)
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(atoms)
    k = rng.randrange(3 if rexprs else 2)
    sub = lambda: random_concept(rng, depth - 1, names, roles, nominals, max_bound, inverse)  # noqa: E731
    if k == 0:
        return Not(sub())
    if k == 1:
        return And(sub(), sub())
    return AtLeast(rng.randint(0, max_bound), rng.choice(rexprs), sub())


def random_tcbox(
    rng: random.Random,
    max_restrictions: int = 3,
    max_bound: int = 2,
    names: Sequence[str] = ("A", "B"),
    roles: Sequence[str] = ("R",),
    inverse: bool = True,
    depth: int = 2,
) -> TcBox:
    out = []
    for _ in range(rng.randint(1, max_restrictions)):
        c = random_concept(rng, depth, names, roles, (), max_bound, inverse)
        out.append(CardRestriction(rng.choice((">=", "<=")), rng.randint(0, max_bound), c))
    return TcBox(out)


def random_tibox(
    rng: random.Random,
    max_axioms: int = 2,
    names: Sequence[str] = ("A", "B"),
    roles: Sequence[str] = ("R",),
    nominals: Sequence[str] = ("o",),
    max_bound: int = 2,
    inverse: bool = True,
    depth: int = 2,
) -> TiBox:
    out = []
    for _ in range(rng.randint(1, max_axioms)):
        lhs = random_concept(rng, depth, names, roles, nominals, max_bound, inverse)
        rhs = random_concept(rng, depth, names, roles, nominals, max_bound, inverse)
        out.append(Gci(lhs, rhs))
    return TiBox(out)


def tcbox_corpus(seed: int, count: int) -> list[TcBox]:
    """Half the boxes may use the inverse role, half may not."""
    rng = random.Random(seed)
    return [random_tcbox(rng, inverse=bool(k % 2)) for k in range(count)]


def tibox_corpus(seed: int, count: int) -> list[TiBox]:
    """Nominal ``o`` is allowed in two thirds of the boxes."""
    rng = random.Random(seed)
    return [random_tibox(rng, nominals=("o",) if k % 3 else (), inverse=bool(k % 2)) for k in range(count)]


def domino_corpus(max_tiles: int = 2, word_length: int = 1) -> Iterator[tuple[DominoSystem, tuple[str, ...]]]:
    """Every domino system on tiles ``a, b, ...`` with every initial word of the given length."""
    for size in range(1, max_tiles + 1):
        tiles = [chr(ord("a") + k) for k in range(size)]
        pairs = list(itertools.product(tiles, repeat=2))
        subsets = [
            frozenset(p for p, keep in zip(pairs, mask) if keep)
            for mask in itertools.product((False, True), repeat=len(pairs))
        ]
        for h in subsets:
            for v in subsets:
                system = DominoSystem(tiles, h, v)
                for w in itertools.product(tiles, repeat=word_length):
                    yield system, w
