"""Two-variable first-order logic with counting quantifiers (C2).

Formulas use exactly the variables ``"x"`` and ``"y"``.  :func:`psi_concept`
and :func:`psi_tbox` translate nominal-free ALCQI concepts and T_C Boxes
into C2; :func:`eval_c2` is a plain Tarskian evaluator over finite
structures (exponential in quantifier depth; it is an oracle, not a
solver).
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Literal, Mapping, Union

import numpy as np

from . import kernels
from .semantics import Interpretation, InterpretationBatch
from .syntax import _cached_hash, _hash_slot, And, Atomic, AtLeast, CardRestriction, Concept, Nominal, Not, TcBox, Top, render

__all__ = [
    "UnaryAtom", "BinaryAtom", "CNot", "CAnd", "CountQuant", "FoStructure", "TOP_PREDICATE",
    "psi_concept", "psi_tbox", "swap_vars", "eval_c2", "structure_of", "render_c2",
    "free_vars", "c2_node_count", "batch_eval_c2", "UnassignedVariable",
]

Var = Literal["x", "y"]
VARS = ("x", "y")

# reserved unary predicate for the tautology that stands in for top
TOP_PREDICATE = "_top"


def _other(v: str) -> str:
    return "y" if v == "x" else "x"


def _check_var(v: str) -> None:
    if v not in VARS:
        raise ValueError(f"C2 has only the variables x and y, got {v!r}")


@dataclass(frozen=True, slots=True)
class UnaryAtom:
    pred: str
    var: Var

    def __post_init__(self) -> None:
        _check_var(self.var)


@dataclass(frozen=True, slots=True)
class BinaryAtom:
    pred: str
    first: Var
    second: Var

    def __post_init__(self) -> None:
        _check_var(self.first)
        _check_var(self.second)


@dataclass(frozen=True, slots=True)
class CNot:
    arg: Formula
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("arg")


@dataclass(frozen=True, slots=True)
class CAnd:
    left: Formula
    right: Formula
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("left", "right")


@dataclass(frozen=True, slots=True)
class CountQuant:
    kind: Literal[">=", "<="]
    n: int
    var: Var
    body: Formula
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("kind", "n", "var", "body")

    def __post_init__(self) -> None:
        _check_var(self.var)
        if self.kind not in (">=", "<="):
            raise ValueError(f"unknown quantifier kind {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError("counting quantifier bound must be a natural number")


Formula = Union[UnaryAtom, BinaryAtom, CNot, CAnd, CountQuant]


class UnassignedVariable(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class FoStructure:
    domain_size: int
    unary: Mapping[str, frozenset[int]]
    binary: Mapping[str, frozenset[tuple[int, int]]]

    def __init__(self, domain_size: int, unary=None, binary=None) -> None:
        if domain_size < 1:
            raise ValueError("structures are nonempty")
        u = {k: frozenset(v) for k, v in (unary or {}).items()}
        b = {k: frozenset(v) for k, v in (binary or {}).items()}
        for k, v in u.items():
            if any(not 0 <= a < domain_size for a in v):
                raise ValueError(f"relation {k} leaves the domain")
        for k, v in b.items():
            if any(not (0 <= a < domain_size and 0 <= c < domain_size) for a, c in v):
                raise ValueError(f"relation {k} leaves the domain")
        object.__setattr__(self, "domain_size", domain_size)
        object.__setattr__(self, "unary", MappingProxyType(u))
        object.__setattr__(self, "binary", MappingProxyType(b))


# ---------------------------------------------------------------------------
# translation


def swap_vars(f: Formula) -> Formula:
    """Exchange x and y everywhere, bound occurrences included."""
    if isinstance(f, UnaryAtom):
        return UnaryAtom(f.pred, _other(f.var))
    if isinstance(f, BinaryAtom):
        return BinaryAtom(f.pred, _other(f.first), _other(f.second))
    if isinstance(f, CNot):
        return CNot(swap_vars(f.arg))
    if isinstance(f, CAnd):
        return CAnd(swap_vars(f.left), swap_vars(f.right))
    if isinstance(f, CountQuant):
        return CountQuant(f.kind, f.n, _other(f.var), swap_vars(f.body))
    raise TypeError(f"not a C2 formula: {f!r}")


def _tautology(v: str) -> Formula:
    a = UnaryAtom(TOP_PREDICATE, v)
    return CNot(CAnd(a, CNot(a)))


def _psi_x(c: Concept) -> Formula:
    if isinstance(c, Atomic):
        if c.name == TOP_PREDICATE:
            raise ValueError(f"concept name {TOP_PREDICATE} is reserved for the translation")
        return UnaryAtom(c.name, "x")
    if isinstance(c, Top):
        return _tautology("x")
    if isinstance(c, Not):
        return CNot(_psi_x(c.arg))
    if isinstance(c, And):
        return CAnd(_psi_x(c.left), _psi_x(c.right))
    if isinstance(c, AtLeast):
        atom = BinaryAtom(c.role.base, "y", "x") if c.role.inverted else BinaryAtom(c.role.base, "x", "y")
        return CountQuant(">=", c.n, "y", CAnd(atom, psi_concept(c.filler, "y")))
    if isinstance(c, Nominal):
        raise ValueError("nominals have no C2 translation here (ALCQI only)")
    raise TypeError(f"not a core concept: {c!r}")


def psi_concept(c: Concept, v: str = "x") -> Formula:
    """Translate ``c`` into a C2 formula whose only free variable is ``v``."""
    _check_var(v)
    f = _psi_x(c)
    return f if v == "x" else swap_vars(f)


def psi_tbox(t: TcBox) -> Formula:
    """Translate a T_C Box into one C2 sentence (conjunction in canonical order)."""
    if not isinstance(t, TcBox):
        raise TypeError("psi_tbox takes a T_C Box")
    parts = [CountQuant(r.kind, r.bound, "x", psi_concept(r.concept, "x")) for r in t.ordered()]
    if not parts:
        return CountQuant(">=", 0, "x", _tautology("x"))
    out = parts[0]
    for p in parts[1:]:
        out = CAnd(out, p)
    return out


def psi_restriction(r: CardRestriction) -> Formula:
    return CountQuant(r.kind, r.bound, "x", psi_concept(r.concept, "x"))


# ---------------------------------------------------------------------------
# structures and evaluation


def structure_of(i: Interpretation) -> FoStructure:
    if i.nominals:
        raise ValueError("interpretation interprets nominals; C2 structures have none")
    return FoStructure(i.domain_size, dict(i.concepts), dict(i.roles))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, UnaryAtom):
        return frozenset({f.var})
    if isinstance(f, BinaryAtom):
        return frozenset({f.first, f.second})
    if isinstance(f, CNot):
        return free_vars(f.arg)
    if isinstance(f, CAnd):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, CountQuant):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a C2 formula: {f!r}")


def eval_c2(s: FoStructure, f: Formula, env: Mapping[str, int] | None = None) -> bool:
    env = dict(env or {})

    def look(v: str) -> int:
        try:
            return env[v]
        except KeyError:
            raise UnassignedVariable(f"free variable {v} has no value") from None

    def ev(f) -> bool:
        if isinstance(f, UnaryAtom):
            return look(f.var) in s.unary.get(f.pred, ())
        if isinstance(f, BinaryAtom):
            return (look(f.first), look(f.second)) in s.binary.get(f.pred, ())
        if isinstance(f, CNot):
            return not ev(f.arg)
        if isinstance(f, CAnd):
            return ev(f.left) and ev(f.right)
        if isinstance(f, CountQuant):
            saved = env.get(f.var)
            count = 0
            for e in range(s.domain_size):
                env[f.var] = e
                if ev(f.body):
                    count += 1
            if saved is None:
                env.pop(f.var, None)
            else:
                env[f.var] = saved
            return count >= f.n if f.kind == ">=" else count <= f.n
        raise TypeError(f"not a C2 formula: {f!r}")

    return ev(f)


def batch_eval_c2(batch: InterpretationBatch, f: Formula, memo: dict | None = None) -> np.ndarray:
    """Truth values over a batch as a ``(B, m, m)`` array indexed ``[b, x, y]``.

    The batch is read as a family of C2 structures: concept names are unary
    predicates and role names binary predicates.  A value that does not
    depend on a variable is constant along that axis.
    """
    if memo is None:
        memo = {}
    hit = memo.get(f)
    if hit is not None:
        return hit
    B, m = batch.size, batch.m
    if isinstance(f, UnaryAtom):
        u = batch.concept(f.pred)
        out = np.broadcast_to(u[:, :, None] if f.var == "x" else u[:, None, :], (B, m, m))
    elif isinstance(f, BinaryAtom):
        r = batch.role(f.pred)
        if (f.first, f.second) == ("x", "y"):
            out = r
        elif (f.first, f.second) == ("y", "x"):
            out = r.transpose(0, 2, 1)
        else:
            # R(x,x) or R(y,y): the diagonal along one axis
            d = np.diagonal(r, axis1=1, axis2=2)
            out = np.broadcast_to(d[:, :, None] if f.first == "x" else d[:, None, :], (B, m, m))
    elif isinstance(f, CNot):
        out = ~batch_eval_c2(batch, f.arg, memo)
    elif isinstance(f, CAnd):
        out = batch_eval_c2(batch, f.left, memo) & batch_eval_c2(batch, f.right, memo)
    elif isinstance(f, CountQuant):
        body = np.ascontiguousarray(batch_eval_c2(batch, f.body, memo))
        # quantifying y leaves a function of x and vice versa
        axis = 2 if f.var == "y" else 1
        res = kernels.quantify(body, axis, f.n, f.kind == ">=")
        out = np.broadcast_to(res[:, :, None] if f.var == "y" else res[:, None, :], (B, m, m))
    else:
        raise TypeError(f"not a C2 formula: {f!r}")
    memo[f] = out
    return out


# ---------------------------------------------------------------------------
# output


def render_c2(f: Formula) -> str:
    if isinstance(f, UnaryAtom):
        return f"{f.pred}({f.var})"
    if isinstance(f, BinaryAtom):
        return f"{f.pred}({f.first},{f.second})"
    if isinstance(f, CNot):
        return "~" + render_c2(f.arg)
    if isinstance(f, CAnd):
        return f"({render_c2(f.left)} & {render_c2(f.right)})"
    if isinstance(f, CountQuant):
        body = render_c2(f.body)
        if not isinstance(f.body, CAnd):
            body = f"({body})"
        return f"E{f.kind}{f.n} {f.var}. {body}"
    raise TypeError(f"not a C2 formula: {f!r}")


def c2_node_count(f: Formula) -> int:
    """Nodes of ``f``; a counting quantifier counts its bound as a separate node."""
    if isinstance(f, (UnaryAtom, BinaryAtom)):
        return 1
    if isinstance(f, CNot):
        return 1 + c2_node_count(f.arg)
    if isinstance(f, CAnd):
        return 1 + c2_node_count(f.left) + c2_node_count(f.right)
    if isinstance(f, CountQuant):
        return 2 + c2_node_count(f.body)
    raise TypeError(f"not a C2 formula: {f!r}")


def render_tbox_translation(t: TcBox) -> str:
    """One line per restriction (as a comment) followed by the C2 sentence."""
    lines = [f"# {render(r)}" for r in t.ordered()]
    lines.append(render_c2(psi_tbox(t)))
    return "\n".join(lines) + "\n"
