"""Torus and domino gadgets.

Elements of a ``2^n x 2^n`` torus carry their coordinates in binary:
concept ``X{k}`` holds bit ``k`` of the x coordinate and ``Y{k}`` bit ``k``
of the y coordinate (least significant bit is ``k = 0``).  The roles
``east`` and ``north`` are the horizontal and vertical successor relations.

Tile ``d`` of a domino system is represented by the concept ``C_<d>``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .semantics import Interpretation
from .syntax import (
    TOP, AllRestriction, And, Atomic, CardRestriction, Concept, Exactly, Exists, Forall, Gci,
    Implies, Nominal, Not, RoleExpr, TcBox, TiBox, conjunction, disjunction, expand_abbreviations,
)

__all__ = [
    "EAST", "NORTH", "CREATE", "CORNER", "x_bit", "y_bit", "tile_concept",
    "pos_of", "incr_mod2n", "position_concept", "step_concept", "torus_tcbox", "torus_tibox",
    "TorusReport", "verify_torus", "torus_interpretation", "DominoSystem", "Tiling",
    "parse_domino_spec", "render_domino_spec", "domino_tcbox", "tile_torus", "extract_tiling",
    "tiling_to_interpretation", "render_tiling", "parse_tiling", "TilingError",
]

EAST = RoleExpr("east")
NORTH = RoleExpr("north")
CREATE = RoleExpr("create")
CORNER = "o"


def x_bit(k: int) -> Atomic:
    return Atomic(f"X{k}")


def y_bit(k: int) -> Atomic:
    return Atomic(f"Y{k}")


def tile_concept(d: str) -> Atomic:
    return Atomic(f"C_{d}")


# ---------------------------------------------------------------------------
# positions


def pos_of(i: Interpretation, a: int, n: int) -> tuple[int, int]:
    """Coordinates of element ``a`` read off the ``X{k}`` / ``Y{k}`` bits.

    Interpretations do not record empty extensions, so an absent bit name
    reads as all zeros.
    """
    if a not in i.domain:
        raise ValueError(f"element {a} is not in the domain")
    x = sum(1 << k for k in range(n) if a in i.concept(f"X{k}"))
    y = sum(1 << k for k in range(n) if a in i.concept(f"Y{k}"))
    return x, y


def incr_mod2n(xbits: Sequence[int], ybits: Sequence[int]) -> bool:
    """Does ``ybits`` encode ``xbits + 1`` modulo ``2^n``?  Bits are LSB first.

    Evaluated as a carry chain: below the first zero of ``x`` every bit
    flips, above it every bit is copied.
    """
    if len(xbits) != len(ybits):
        raise ValueError(f"bit vectors differ in length: {len(xbits)} vs {len(ybits)}")
    x = [bool(b) for b in xbits]
    y = [bool(b) for b in ybits]
    for k in range(len(x)):
        carry = all(x[:k])
        if carry and x[k] != (not y[k]):
            return False
        if not carry and x[k] != y[k]:
            return False
    return True


def position_concept(n: int, x: int, y: int) -> Concept:
    """Concept whose instances are exactly the elements at ``(x, y)``."""
    if not (0 <= x < 1 << n and 0 <= y < 1 << n):
        raise ValueError(f"({x}, {y}) is outside the {1 << n}x{1 << n} torus")
    parts = [x_bit(k) if x >> k & 1 else Not(x_bit(k)) for k in range(n)]
    parts += [y_bit(k) if y >> k & 1 else Not(y_bit(k)) for k in range(n)]
    return conjunction(parts)


def _keep(role: RoleExpr, c: Concept):
    return And(Implies(c, Forall(role, c)), Implies(Not(c), Forall(role, Not(c))))


def step_concept(n: int, role: RoleExpr, inc=x_bit, frozen=y_bit, guard: str = "disjunction") -> Concept:
    """Along ``role`` the ``inc`` counter goes up by one and ``frozen`` stays put.

    The first family flips bit ``k`` when all lower bits are set, the second
    keeps bit ``k`` when some lower bit is clear, the third copies every
    ``frozen`` bit.  ``guard="conjunction"`` writes the second family's
    premise as "all lower bits clear" instead; at ``k = 0`` both families
    then fire and contradict each other, so that variant has no models.
    """
    if guard not in ("disjunction", "conjunction"):
        raise ValueError(f"unknown guard {guard!r}")
    flip, copy = [], []
    for k in range(n):
        b = inc(k)
        lower = [inc(j) for j in range(k)]
        flip.append(Implies(conjunction(lower), And(Implies(b, Forall(role, Not(b))), Implies(Not(b), Forall(role, b)))))
        cleared = [Not(c) for c in lower]
        premise = disjunction(cleared) if guard == "disjunction" else conjunction(cleared)
        copy.append(Implies(premise, _keep(role, b)))
    still = [_keep(role, frozen(k)) for k in range(n)]
    surface = And(And(conjunction(flip), conjunction(copy)), conjunction(still))
    return expand_abbreviations(surface)


def _torus_parts(n: int, guard: str):
    d_east = step_concept(n, EAST, x_bit, y_bit, guard)
    d_north = step_concept(n, NORTH, y_bit, x_bit, guard)
    last = (1 << n) - 1
    return dict(
        east=expand_abbreviations(Exists(EAST, TOP)),
        north=expand_abbreviations(Exists(NORTH, TOP)),
        east_in=expand_abbreviations(Exactly(1, EAST.inverse(), TOP)),
        north_in=expand_abbreviations(Exactly(1, NORTH.inverse(), TOP)),
        origin=position_concept(n, 0, 0),
        corner=position_concept(n, last, last),
        step=And(d_east, d_north),
    )


def torus_tcbox(n: int, guard: str = "disjunction") -> TcBox:
    """Cardinality restrictions whose models are exactly the ``2^n x 2^n`` torus."""
    if n < 1:
        raise ValueError("n must be at least 1")
    p = _torus_parts(n, guard)
    every = lambda c: expand_abbreviations(AllRestriction(c))  # noqa: E731
    return TcBox([
        every(p["east"]), every(p["north"]), every(p["east_in"]), every(p["north_in"]),
        CardRestriction(">=", 1, p["origin"]),
        CardRestriction(">=", 1, p["corner"]),
        CardRestriction("<=", 1, p["corner"]),
        every(p["step"]),
    ])


def torus_tibox(n: int, guard: str = "disjunction") -> TiBox:
    """The same torus from GCIs, a ``create`` role and one nominal on the upper right corner."""
    if n < 1:
        raise ValueError("n must be at least 1")
    p = _torus_parts(n, guard)
    o = Nominal(CORNER)
    return TiBox([
        Gci(TOP, p["east"]), Gci(TOP, p["north"]), Gci(TOP, p["east_in"]), Gci(TOP, p["north_in"]),
        Gci(TOP, expand_abbreviations(Exists(CREATE, p["origin"]))),
        Gci(o, p["corner"]), Gci(p["corner"], o),
        Gci(TOP, p["step"]),
    ])


# ---------------------------------------------------------------------------
# torus verification


@dataclass
class TorusReport:
    verdict: bool
    pos_table: dict[int, tuple[int, int]]
    violations: list[tuple[int | None, str]] = field(default_factory=list)


def verify_torus(i: Interpretation, n: int) -> TorusReport:
    """Check that ``pos`` is an isomorphism onto the torus with its two successor relations."""
    side = 1 << n
    table = {a: pos_of(i, a, n) for a in i.domain}
    bad: list[tuple[int | None, str]] = []
    if i.domain_size != side * side:
        bad.append((None, f"domain has {i.domain_size} elements, expected {side * side}"))
    owner: dict[tuple[int, int], int] = {}
    for a, p in table.items():
        if p in owner:
            bad.append((a, f"position {p} already taken by {owner[p]}"))
        else:
            owner[p] = a
    if i.domain_size == side * side:
        for x in range(side):
            for y in range(side):
                if (x, y) not in owner:
                    bad.append((None, f"no element at {(x, y)}"))
    for name, dx, dy in (("east", 1, 0), ("north", 0, 1)):
        succ: dict[int, list[int]] = {a: [] for a in i.domain}
        for a, b in sorted(i.role(name)):
            succ[a].append(b)
        for a in i.domain:
            if len(succ[a]) != 1:
                bad.append((a, f"has {len(succ[a])} {name} successors, expected 1"))
            x, y = table[a]
            want = ((x + dx) % side, (y + dy) % side)
            for b in succ[a]:
                if table[b] != want:
                    bad.append((a, f"{name} edge to {b} lands on {table[b]}, expected {want}"))
    return TorusReport(not bad, table, bad)


def torus_interpretation(n: int) -> Interpretation:
    """The torus itself; element ``y * 2^n + x`` sits at ``(x, y)``."""
    side = 1 << n
    ident = lambda x, y: y * side + x  # noqa: E731
    concepts: dict[str, set[int]] = {}
    for x in range(side):
        for y in range(side):
            for k in range(n):
                if x >> k & 1:
                    concepts.setdefault(f"X{k}", set()).add(ident(x, y))
                if y >> k & 1:
                    concepts.setdefault(f"Y{k}", set()).add(ident(x, y))
    east = {(ident(x, y), ident((x + 1) % side, y)) for x in range(side) for y in range(side)}
    north = {(ident(x, y), ident(x, (y + 1) % side)) for x in range(side) for y in range(side)}
    return Interpretation(side * side, concepts, {"east": east, "north": north})


# ---------------------------------------------------------------------------
# domino systems and tilings


class TilingError(ValueError):
    pass


_TILE = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class DominoSystem:
    tiles: tuple[str, ...]
    horizontal: frozenset[tuple[str, str]]
    vertical: frozenset[tuple[str, str]]

    def __init__(self, tiles, horizontal=(), vertical=()) -> None:
        tiles = tuple(sorted(set(tiles)))
        if not tiles:
            raise ValueError("a domino system needs at least one tile")
        for d in tiles:
            if not _TILE.match(d):
                raise ValueError(f"bad tile name {d!r}")
        h, v = frozenset(map(tuple, horizontal)), frozenset(map(tuple, vertical))
        for a, b in h | v:
            if a not in tiles or b not in tiles:
                raise ValueError(f"pair ({a}, {b}) uses an undeclared tile")
        object.__setattr__(self, "tiles", tiles)
        object.__setattr__(self, "horizontal", h)
        object.__setattr__(self, "vertical", v)

    def check_word(self, w: Sequence[str]) -> None:
        for d in w:
            if d not in self.tiles:
                raise ValueError(f"initial condition uses undeclared tile {d!r}")


@dataclass(frozen=True)
class Tiling:
    width: int
    height: int
    assignment: Mapping[tuple[int, int], str]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("tilings are at least 1x1")
        cells = {(x, y) for x in range(self.width) for y in range(self.height)}
        if set(self.assignment) != cells:
            raise ValueError("assignment must cover exactly the torus cells")

    def __getitem__(self, cell: tuple[int, int]) -> str:
        return self.assignment[cell]

    def violations(self, d: DominoSystem, w: Sequence[str] = ()) -> list[str]:
        out = []
        for (x, y), tile in sorted(self.assignment.items()):
            if tile not in d.tiles:
                out.append(f"{(x, y)}: unknown tile {tile}")
            right = self[(x + 1) % self.width, y]
            up = self[x, (y + 1) % self.height]
            if (tile, right) not in d.horizontal:
                out.append(f"{(x, y)}: {tile} {right} not horizontally compatible")
            if (tile, up) not in d.vertical:
                out.append(f"{(x, y)}: {tile} {up} not vertically compatible")
        for k, tile in enumerate(w):
            if k >= self.width or self[k, 0] != tile:
                out.append(f"initial condition fails at {(k, 0)}")
        return out

    def is_valid(self, d: DominoSystem, w: Sequence[str] = ()) -> bool:
        return not self.violations(d, w)


def parse_domino_spec(text: str) -> tuple[DominoSystem, tuple[str, ...]]:
    """Read ``tiles``/``h``/``v``/``init`` lines; ``#`` starts a comment."""
    tiles: list[str] = []
    h, v = [], []
    init: tuple[str, ...] = ()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        head, args = words[0], words[1:]
        if head == "tiles":
            tiles += args
        elif head in ("h", "v"):
            if len(args) != 2:
                raise ValueError(f"line {lineno}: '{head}' takes two tiles")
            (h if head == "h" else v).append(tuple(args))
        elif head == "init":
            init += tuple(args)
        else:
            raise ValueError(f"line {lineno}: unknown directive {head!r}")
    d = DominoSystem(tiles, h, v)
    d.check_word(init)
    return d, init


def render_domino_spec(d: DominoSystem, w: Sequence[str] = ()) -> str:
    lines = ["tiles " + " ".join(d.tiles)]
    lines += [f"h {a} {b}" for a, b in sorted(d.horizontal)]
    lines += [f"v {a} {b}" for a, b in sorted(d.vertical)]
    if w:
        lines.append("init " + " ".join(w))
    return "\n".join(lines) + "\n"


def render_tiling(t: Tiling) -> str:
    """One line per row, bottom row (``y = 0``) first."""
    lines = [f"# tiling {t.width}x{t.height}"]
    for y in range(t.height):
        lines.append(" ".join(t[x, y] for x in range(t.width)))
    return "\n".join(lines) + "\n"


def parse_tiling(text: str) -> Tiling:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.lstrip().startswith("#")]
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("tiling rows must be nonempty and of equal length")
    return Tiling(len(rows[0]), len(rows), {(x, y): tile for y, r in enumerate(rows) for x, tile in enumerate(r)})


def domino_tcbox(n: int, d: DominoSystem, w: Sequence[str]) -> TcBox:
    """Restrictions consistent iff ``d`` tiles the ``2^n x 2^n`` torus with initial row ``w``."""
    if len(w) != n:
        raise ValueError(f"initial condition must have length n = {n}, got {len(w)}")
    d.check_word(w)
    every = lambda c: expand_abbreviations(AllRestriction(c))  # noqa: E731
    C = tile_concept
    cover = disjunction([C(t) for t in d.tiles])
    apart = conjunction([Not(And(C(a), C(b))) for a in d.tiles for b in d.tiles if a != b])

    def fits(role, pairs):
        return conjunction([
            Implies(C(a), Forall(role, disjunction([C(b) for b in d.tiles if (a, b) in pairs])))
            for a in d.tiles
        ])

    extra = [every(cover), every(apart), every(fits(EAST, d.horizontal)), every(fits(NORTH, d.vertical))]
    extra += [every(Implies(position_concept(n, k, 0), C(w[k]))) for k in range(n)]
    return TcBox(list(torus_tcbox(n)) + extra)


def tile_torus(d: DominoSystem, s: int, t: int, w: Sequence[str] = ()) -> Tiling | None:
    """First tiling of the ``s x t`` torus by backtracking, or ``None``.

    Cells are filled in lexicographic ``(x, y)`` order and tiles tried in
    sorted order, so the answer is deterministic.
    """
    if len(w) > s:
        raise ValueError("initial condition is longer than the torus is wide")
    d.check_word(w)
    cells = [(x, y) for x in range(s) for y in range(t)]
    fixed = {(k, 0): tile for k, tile in enumerate(w)}
    grid: dict[tuple[int, int], str] = {}

    def ok(x: int, y: int, tile: str) -> bool:
        for (cx, cy), pairs, forward in (
            (((x + 1) % s, y), d.horizontal, True),
            (((x - 1) % s, y), d.horizontal, False),
            ((x, (y + 1) % t), d.vertical, True),
            ((x, (y - 1) % t), d.vertical, False),
        ):
            if (cx, cy) == (x, y):
                other = tile
            elif (cx, cy) in grid:
                other = grid[cx, cy]
            else:
                continue
            pair = (tile, other) if forward else (other, tile)
            if pair not in pairs:
                return False
        return True

    def go(k: int) -> bool:
        if k == len(cells):
            return True
        cell = cells[k]
        for tile in ([fixed[cell]] if cell in fixed else d.tiles):
            if ok(*cell, tile):
                grid[cell] = tile
                if go(k + 1):
                    return True
                del grid[cell]
        return False

    return Tiling(s, t, dict(grid)) if go(0) else None


def extract_tiling(i: Interpretation, n: int, d: DominoSystem) -> Tiling:
    """Read the tiling off a model of :func:`domino_tcbox`."""
    report = verify_torus(i, n)
    if not report.verdict:
        raise TilingError(f"not a torus: {report.violations[0][1]}")
    cells = {}
    for a in i.domain:
        here = [t for t in d.tiles if a in i.concept(tile_concept(t).name)]
        if len(here) != 1:
            raise TilingError(f"element {a} carries {len(here)} tiles")
        cells[report.pos_table[a]] = here[0]
    side = 1 << n
    return Tiling(side, side, cells)


def tiling_to_interpretation(t: Tiling, n: int) -> Interpretation:
    """The torus interpretation of size ``2^n`` decorated with the tiles of ``t``."""
    side = 1 << n
    if (t.width, t.height) != (side, side):
        raise ValueError(f"tiling is {t.width}x{t.height}, expected {side}x{side}")
    base = torus_interpretation(n)
    concepts = {k: set(v) for k, v in base.concepts.items()}
    for (x, y), tile in t.assignment.items():
        concepts.setdefault(tile_concept(tile).name, set()).add(y * side + x)
    return base.replace(concepts=concepts)
