"""Concept and TBox syntax for ALCQIO: AST, parser, renderer and size accounting.

The core AST is deliberately small (atomic names, nominals, top, negation,
binary conjunction and qualified at-least restrictions).  Everything else the
concrete grammar offers (``|``, ``->``, ``exists``, ``forall``, ``atmost``,
``exactly``, ``bot``) is surface sugar that :func:`expand_abbreviations`
rewrites into core constructors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Literal, Union

__all__ = [
    "RoleExpr", "Atomic", "Nominal", "Top", "Not", "And", "AtLeast",
    "Or", "Implies", "Exists", "Forall", "AtMost", "Exactly", "Bottom", "AllRestriction",
    "CardRestriction", "TcBox", "Gci", "TiBox", "Signature", "ParseError",
    "parse_concept", "parse_surface", "parse_role", "parse_tbox", "expand_abbreviations",
    "render", "tbox_size", "node_count", "signature_of", "subconcepts",
    "conjunction", "disjunction", "implies", "forall", "exists", "exactly",
    "at_most", "BOTTOM", "TOP",
]

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


def _check_name(name: str, what: str) -> None:
    if not isinstance(name, str) or not _IDENT.match(name):
        raise ValueError(f"invalid {what} name {name!r}")


def _cached_hash(*names: str):
    """A ``__hash__`` that is computed once; nested terms would otherwise rehash their whole subtree."""

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, n) for n in names))
            object.__setattr__(self, "_hash", h)
        return h

    return __hash__


def _hash_slot():
    return field(default=None, init=False, repr=False, compare=False)


# ---------------------------------------------------------------------------
# core AST


@dataclass(frozen=True, slots=True)
class RoleExpr:
    base: str
    inverted: bool = False

    def __post_init__(self) -> None:
        _check_name(self.base, "role")

    def inverse(self) -> RoleExpr:
        return RoleExpr(self.base, not self.inverted)


@dataclass(frozen=True, slots=True)
class Atomic:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name, "concept")


@dataclass(frozen=True, slots=True)
class Nominal:
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name, "individual")


@dataclass(frozen=True, slots=True)
class Top:
    pass


@dataclass(frozen=True, slots=True)
class Not:
    arg: Concept
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("arg")


@dataclass(frozen=True, slots=True)
class And:
    left: Concept
    right: Concept
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("left", "right")


@dataclass(frozen=True, slots=True)
class AtLeast:
    n: int
    role: RoleExpr
    filler: Concept
    _hash: int | None = _hash_slot()

    __hash__ = _cached_hash("n", "role", "filler")

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"count must be a natural number, got {self.n!r}")


Concept = Union[Atomic, Nominal, Top, Not, And, AtLeast]
CORE_TYPES = (Atomic, Nominal, Top, Not, And, AtLeast)

TOP = Top()
BOTTOM = Not(TOP)


# ---------------------------------------------------------------------------
# surface sugar (never survives expand_abbreviations)


@dataclass(frozen=True, slots=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Exists:
    role: RoleExpr
    filler: object


@dataclass(frozen=True, slots=True)
class Forall:
    role: RoleExpr
    filler: object


@dataclass(frozen=True, slots=True)
class AtMost:
    n: int
    role: RoleExpr
    filler: object

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"count must be a natural number, got {self.n!r}")


@dataclass(frozen=True, slots=True)
class Exactly:
    n: int
    role: RoleExpr
    filler: object

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"count must be a natural number, got {self.n!r}")


@dataclass(frozen=True, slots=True)
class Bottom:
    pass


@dataclass(frozen=True, slots=True)
class AllRestriction:
    """The ``(forall C)`` cardinality restriction, i.e. every element is in C."""

    concept: object


# ---------------------------------------------------------------------------
# TBoxes


Kind = Literal[">=", "<="]


@dataclass(frozen=True, slots=True)
class CardRestriction:
    kind: Kind
    bound: int
    concept: Concept

    def __post_init__(self) -> None:
        if self.kind not in (">=", "<="):
            raise ValueError(f"unknown restriction kind {self.kind!r}")
        if not isinstance(self.bound, int) or self.bound < 0:
            raise ValueError(f"bound must be a natural number, got {self.bound!r}")


@dataclass(frozen=True, slots=True)
class TcBox:
    restrictions: frozenset[CardRestriction] = frozenset()

    def __init__(self, restrictions: Iterable[CardRestriction] = ()) -> None:
        object.__setattr__(self, "restrictions", frozenset(restrictions))

    def ordered(self) -> list[CardRestriction]:
        """Members in canonical order (lexicographic by rendered text)."""
        return sorted(self.restrictions, key=render)

    def __iter__(self) -> Iterator[CardRestriction]:
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self.restrictions)


@dataclass(frozen=True, slots=True)
class Gci:
    lhs: Concept
    rhs: Concept


@dataclass(frozen=True, slots=True)
class TiBox:
    axioms: frozenset[Gci] = frozenset()

    def __init__(self, axioms: Iterable[Gci] = ()) -> None:
        object.__setattr__(self, "axioms", frozenset(axioms))

    def ordered(self) -> list[Gci]:
        return sorted(self.axioms, key=render)

    def __iter__(self) -> Iterator[Gci]:
        return iter(self.ordered())

    def __len__(self) -> int:
        return len(self.axioms)


@dataclass(frozen=True, slots=True)
class Signature:
    concepts: frozenset[str] = frozenset()
    roles: frozenset[str] = frozenset()
    individuals: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for a, b, what in (
            (self.concepts, self.roles, "concept/role"),
            (self.concepts, self.individuals, "concept/individual"),
            (self.roles, self.individuals, "role/individual"),
        ):
            clash = a & b
            if clash:
                raise ValueError(f"{what} name spaces overlap on {sorted(clash)}")

    def __or__(self, other: Signature) -> Signature:
        return Signature(
            self.concepts | other.concepts,
            self.roles | other.roles,
            self.individuals | other.individuals,
        )

    def names(self) -> frozenset[str]:
        return self.concepts | self.roles | self.individuals


# ---------------------------------------------------------------------------
# convenience constructors (all return core concepts)


def conjunction(parts: Iterable[Concept]) -> Concept:
    """Left-folded conjunction; the empty conjunction is top."""
    out: Concept | None = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TOP if out is None else out


def disjunction(parts: Iterable[Concept]) -> Concept:
    """De Morgan disjunction ``not(not C1 & ... & not Ck)``; empty is ``not top``."""
    parts = list(parts)
    if not parts:
        return BOTTOM
    if len(parts) == 1:
        return parts[0]
    return Not(conjunction(Not(p) for p in parts))


def implies(a: Concept, b: Concept) -> Concept:
    return expand_abbreviations(Implies(a, b))


def exists(role: RoleExpr, filler: Concept) -> Concept:
    return AtLeast(1, role, filler)


def forall(role: RoleExpr, filler: Concept) -> Concept:
    return Not(AtLeast(1, role, Not(filler)))


def at_most(n: int, role: RoleExpr, filler: Concept) -> Concept:
    return Not(AtLeast(n + 1, role, filler))


def exactly(n: int, role: RoleExpr, filler: Concept) -> Concept:
    return And(at_most(n, role, filler), AtLeast(n, role, filler))


# ---------------------------------------------------------------------------
# abbreviation expansion


def expand_abbreviations(term):
    """Rewrite a surface concept (or ``(forall C)`` restriction) to core form.

    Each surface constructor is replaced by its defining core term; nothing
    else is simplified, so ``A -> B`` becomes ``not(not not A & not B)``.
    """
    if isinstance(term, (Atomic, Nominal, Top)):
        return term
    if isinstance(term, Not):
        return Not(expand_abbreviations(term.arg))
    if isinstance(term, And):
        return And(expand_abbreviations(term.left), expand_abbreviations(term.right))
    if isinstance(term, AtLeast):
        return AtLeast(term.n, term.role, expand_abbreviations(term.filler))
    if isinstance(term, Bottom):
        return BOTTOM
    if isinstance(term, Or):
        return Not(And(Not(expand_abbreviations(term.left)), Not(expand_abbreviations(term.right))))
    if isinstance(term, Implies):
        return expand_abbreviations(Or(Not(term.left), term.right))
    if isinstance(term, Exists):
        return AtLeast(1, term.role, expand_abbreviations(term.filler))
    if isinstance(term, Forall):
        return expand_abbreviations(AtMost(0, term.role, Not(term.filler)))
    if isinstance(term, AtMost):
        return Not(AtLeast(term.n + 1, term.role, expand_abbreviations(term.filler)))
    if isinstance(term, Exactly):
        return And(
            expand_abbreviations(AtMost(term.n, term.role, term.filler)),
            AtLeast(term.n, term.role, expand_abbreviations(term.filler)),
        )
    if isinstance(term, AllRestriction):
        return CardRestriction("<=", 0, Not(expand_abbreviations(term.concept)))
    if isinstance(term, CardRestriction):
        return CardRestriction(term.kind, term.bound, expand_abbreviations(term.concept))
    if isinstance(term, Gci):
        return Gci(expand_abbreviations(term.lhs), expand_abbreviations(term.rhs))
    if isinstance(term, TcBox):
        return TcBox(expand_abbreviations(r) for r in term.restrictions)
    if isinstance(term, TiBox):
        return TiBox(expand_abbreviations(g) for g in term.axioms)
    raise TypeError(f"not a concept term: {term!r}")


# ---------------------------------------------------------------------------
# rendering


def _render_role(r: RoleExpr) -> str:
    return f"inv({r.base})" if r.inverted else r.base


def render(item) -> str:
    """Canonical text for concepts, restrictions, axioms and TBoxes.

    The output uses only core constructors and re-parses to an equal value.
    """
    if isinstance(item, RoleExpr):
        return _render_role(item)
    if isinstance(item, Atomic):
        return item.name
    if isinstance(item, Nominal):
        return "{" + item.name + "}"
    if isinstance(item, Top):
        return "top"
    if isinstance(item, Not):
        return "not " + render(item.arg)
    if isinstance(item, And):
        return f"({render(item.left)} & {render(item.right)})"
    if isinstance(item, AtLeast):
        return f"atleast {item.n} {_render_role(item.role)} . {render(item.filler)}"
    if isinstance(item, CardRestriction):
        word = "atleast" if item.kind == ">=" else "atmost"
        return f"card {word} {item.bound} : {render(item.concept)}"
    if isinstance(item, Gci):
        return f"gci {render(item.lhs)} => {render(item.rhs)}"
    if isinstance(item, TcBox):
        return "".join(render(r) + "\n" for r in item.ordered())
    if isinstance(item, TiBox):
        if not item.axioms:
            return EMPTY_GCI_MARKER + "\n"
        return "".join(render(g) + "\n" for g in item.ordered())
    raise TypeError(f"cannot render {item!r}")


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


KEYWORDS = frozenset({"top", "bot", "not", "atleast", "atmost", "exactly", "exists", "forall", "inv"})

_TOKEN = re.compile(r"(?P<neg>-\d+)|(?P<word>[A-Za-z0-9_]+)|(?P<sym>->|=>|[(){}&|.:])")


@dataclass(frozen=True, slots=True)
class _Tok:
    kind: str  # "word", "sym" or "end"
    text: str
    line: int
    col: int


def _tokenize(text: str, line: int = 1, col0: int = 1) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            toks.append(_Tok("end", "", line, col0 + pos))
            return toks
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        if m.group("neg"):
            raise ParseError(f"negative count literal {m.group('neg')}", line, col0 + pos)
        kind = "word" if m.group("word") else "sym"
        toks.append(_Tok(kind, m.group(kind), line, col0 + pos))
        pos = m.end()


class _Parser:
    def __init__(self, toks: list[_Tok]) -> None:
        self.toks = toks
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text or t.kind == "end":
            self.fail(f"expected {text!r}, found {t.text or 'end of input'!r}", t)
        return t

    def ident(self, what: str) -> str:
        t = self.next()
        if t.kind != "word" or t.text in KEYWORDS:
            self.fail(f"expected {what} name, found {t.text or 'end of input'!r}", t)
        return t.text

    def nat(self) -> int:
        t = self.next()
        if t.kind != "word" or not t.text.isdigit():
            self.fail(f"expected a count, found {t.text or 'end of input'!r}", t)
        return int(t.text)

    def role(self) -> RoleExpr:
        t = self.peek()
        if t.kind == "word" and t.text == "inv":
            self.next()
            self.expect("(")
            name = self.ident("role")
            self.expect(")")
            return RoleExpr(name, True)
        return RoleExpr(self.ident("role"))

    def concept(self):
        t = self.peek()
        if t.kind == "end":
            self.fail("unexpected end of input")
        if t.kind == "sym":
            if t.text == "{":
                self.next()
                name = self.ident("individual")
                self.expect("}")
                return Nominal(name)
            if t.text == "(":
                self.next()
                left = self.concept()
                op = self.next()
                if op.text not in ("&", "|", "->") or op.kind != "sym":
                    self.fail(f"unknown operator {op.text or 'end of input'!r}", op)
                right = self.concept()
                self.expect(")")
                return {"&": And, "|": Or, "->": Implies}[op.text](left, right)
            self.fail(f"unexpected symbol {t.text!r}")
        word = t.text
        if word == "top":
            self.next()
            return TOP
        if word == "bot":
            self.next()
            return Bottom()
        if word == "not":
            self.next()
            return Not(self.concept())
        if word in ("atleast", "atmost", "exactly"):
            self.next()
            n = self.nat()
            r = self.role()
            self.expect(".")
            filler = self.concept()
            return {"atleast": AtLeast, "atmost": AtMost, "exactly": Exactly}[word](n, r, filler)
        if word in ("exists", "forall"):
            self.next()
            r = self.role()
            self.expect(".")
            filler = self.concept()
            return (Exists if word == "exists" else Forall)(r, filler)
        if word in KEYWORDS:
            self.fail(f"unexpected keyword {word!r}")
        self.next()
        return Atomic(word)

    def done(self) -> None:
        t = self.peek()
        if t.kind == "sym" and t.text in ("&", "|", "->"):
            self.fail(f"binary {t.text!r} must be parenthesised, as in (C {t.text} D)")
        if t.kind != "end":
            self.fail(f"trailing input {t.text!r}")


def parse_surface(text: str, line: int = 1, col0: int = 1):
    """Parse concept text to a surface term (sugar not yet expanded)."""
    p = _Parser(_tokenize(text, line, col0))
    c = p.concept()
    p.done()
    return c


def parse_concept(text: str) -> Concept:
    """Parse concept text and expand it to a core concept."""
    return expand_abbreviations(parse_surface(text))


def parse_role(text: str) -> RoleExpr:
    p = _Parser(_tokenize(text))
    r = p.role()
    p.done()
    return r


_CARD = re.compile(r"card\s+(?:(?P<kind>atleast|atmost)\s+(?P<n>-?\d+)|(?P<all>all))\s*:")
_GCI = re.compile(r"gci\b")


# an empty file is an empty T_C Box; this marker line makes it an empty T_I Box
EMPTY_GCI_MARKER = "#! gci"


def parse_tbox(text: str) -> TcBox | TiBox:
    """Parse a TBox file (``card ...`` or ``gci ...`` statements, never mixed)."""
    cards: list[CardRestriction] = []
    gcis: list[Gci] = []
    marked_gci = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == EMPTY_GCI_MARKER:
            marked_gci = True
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if not stripped:
            continue
        col = len(body) - len(body.lstrip()) + 1
        m = _CARD.match(stripped)
        if m:
            if m.group("n") is not None and m.group("n").startswith("-"):
                raise ParseError(f"negative count literal {m.group('n')}", lineno, col + m.start("n"))
            rest_col = col + m.end()
            c = parse_surface(stripped[m.end():], lineno, rest_col)
            if m.group("all"):
                cards.append(expand_abbreviations(AllRestriction(c)))
            else:
                kind = ">=" if m.group("kind") == "atleast" else "<="
                cards.append(CardRestriction(kind, int(m.group("n")), expand_abbreviations(c)))
        elif _GCI.match(stripped):
            rest = stripped[3:]
            p = _Parser(_tokenize(rest, lineno, col + 3))
            lhs = p.concept()
            p.expect("=>")
            rhs = p.concept()
            p.done()
            gcis.append(Gci(expand_abbreviations(lhs), expand_abbreviations(rhs)))
        else:
            raise ParseError("expected a 'card' or 'gci' statement", lineno, col)
        if cards and (gcis or marked_gci):
            raise ParseError("a TBox file may not mix 'card' and 'gci' statements", lineno, col)
    if gcis or marked_gci:
        return TiBox(gcis)
    return TcBox(cards)


# ---------------------------------------------------------------------------
# traversal, signatures and sizes


def subconcepts(c: Concept) -> Iterator[Concept]:
    """All subconcepts of ``c`` in post-order (children before parents)."""
    if isinstance(c, Not):
        yield from subconcepts(c.arg)
    elif isinstance(c, And):
        yield from subconcepts(c.left)
        yield from subconcepts(c.right)
    elif isinstance(c, AtLeast):
        yield from subconcepts(c.filler)
    yield c


def _concepts_of(item) -> Iterator[Concept]:
    if isinstance(item, CORE_TYPES):
        yield item
    elif isinstance(item, CardRestriction):
        yield item.concept
    elif isinstance(item, Gci):
        yield item.lhs
        yield item.rhs
    elif isinstance(item, TcBox):
        for r in item.restrictions:
            yield r.concept
    elif isinstance(item, TiBox):
        for g in item.axioms:
            yield g.lhs
            yield g.rhs
    else:
        raise TypeError(f"no concepts in {item!r}")


def signature_of(item) -> Signature:
    concepts: set[str] = set()
    roles: set[str] = set()
    inds: set[str] = set()
    for top in _concepts_of(item):
        for c in subconcepts(top):
            if isinstance(c, Atomic):
                concepts.add(c.name)
            elif isinstance(c, Nominal):
                inds.add(c.name)
            elif isinstance(c, AtLeast):
                roles.add(c.role.base)
    return Signature(frozenset(concepts), frozenset(roles), frozenset(inds))


def _number_cost(n: int, coding: str) -> int:
    if coding == "unary":
        return max(n, 1)
    if coding == "binary":
        return max(n.bit_length(), 1)
    if coding == "nodes":
        return 1
    raise ValueError(f"unknown coding {coding!r}")


def _concept_size(c: Concept, coding: str) -> int:
    total = 0
    stack = [c]
    while stack:
        x = stack.pop()
        total += 1
        if isinstance(x, Not):
            stack.append(x.arg)
        elif isinstance(x, And):
            stack += (x.left, x.right)
        elif isinstance(x, AtLeast):
            # count node + role node
            total += _number_cost(x.n, coding) + 1
            stack.append(x.filler)
    return total


def tbox_size(t, coding: str = "unary") -> int:
    """Sum of node costs; a count ``n`` costs ``max(n,1)`` (unary) or its bit length (binary)."""
    if isinstance(t, CORE_TYPES):
        return _concept_size(t, coding)
    if isinstance(t, CardRestriction):
        return 1 + _number_cost(t.bound, coding) + _concept_size(t.concept, coding)
    if isinstance(t, Gci):
        return 1 + _concept_size(t.lhs, coding) + _concept_size(t.rhs, coding)
    if isinstance(t, TcBox):
        return sum(tbox_size(r, coding) for r in t.restrictions)
    if isinstance(t, TiBox):
        return sum(tbox_size(g, coding) for g in t.axioms)
    raise TypeError(f"cannot size {t!r}")


def node_count(t) -> int:
    """Number of AST nodes, every node (counts and roles included) weighing 1."""
    return tbox_size(t, "nodes")
