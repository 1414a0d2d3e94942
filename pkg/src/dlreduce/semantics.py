"""Finite interpretations and the model-theoretic ground truth.

Domains are initial segments ``{0, ..., m-1}`` of the naturals.  Concept and
role names missing from an interpretation denote the empty set; a missing
nominal is an error.

Two evaluators live here.  :func:`extension` is the reference: it follows
the inductive clauses element by element on Python sets.  The batch
functions evaluate the same clauses on many interpretations at once (numpy
arrays plus the counting kernels) and are what the exhaustive sweeps use.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterator, Mapping

import numpy as np

from . import kernels
from .syntax import (
    And, Atomic, AtLeast, CardRestriction, Concept, Gci, Nominal, Not, Signature, TcBox, TiBox,
    Top, signature_of,
)

__all__ = [
    "Interpretation", "UninterpretedNominal", "extension", "satisfies_card", "satisfies_gci",
    "is_model", "parse_interpretation", "render_interpretation", "enumerate_interpretations",
    "InterpretationBatch", "batch_extension", "batch_is_model", "first_model_by_enumeration",
    "restrict",
]


class UninterpretedNominal(KeyError):
    pass


def _freeze(mapping, conv):
    return MappingProxyType({k: conv(v) for k, v in sorted(mapping.items())})


@dataclass(frozen=True, eq=False)
class Interpretation:
    domain_size: int
    concepts: Mapping[str, frozenset[int]]
    roles: Mapping[str, frozenset[tuple[int, int]]]
    nominals: Mapping[str, int]

    def __init__(self, domain_size: int, concepts=None, roles=None, nominals=None) -> None:
        if not isinstance(domain_size, int) or domain_size < 1:
            raise ValueError("an interpretation needs a nonempty domain")
        m = domain_size
        cs = {k: frozenset(v) for k, v in (concepts or {}).items()}
        rs = {k: frozenset((int(a), int(b)) for a, b in v) for k, v in (roles or {}).items()}
        ns = dict(nominals or {})
        for name, ext in cs.items():
            if any(not 0 <= a < m for a in ext):
                raise ValueError(f"concept {name} leaves the domain")
        for name, ext in rs.items():
            if any(not (0 <= a < m and 0 <= b < m) for a, b in ext):
                raise ValueError(f"role {name} leaves the domain")
        for name, a in ns.items():
            if not isinstance(a, (int, np.integer)) or not 0 <= a < m:
                raise ValueError(f"nominal {name} must denote one domain element")
        object.__setattr__(self, "domain_size", m)
        # empty extensions are dropped: a missing name already means the empty set
        object.__setattr__(self, "concepts", _freeze({k: v for k, v in cs.items() if v}, frozenset))
        object.__setattr__(self, "roles", _freeze({k: v for k, v in rs.items() if v}, frozenset))
        object.__setattr__(self, "nominals", _freeze(ns, int))

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def concept(self, name: str) -> frozenset[int]:
        return self.concepts.get(name, frozenset())

    def role(self, name: str) -> frozenset[tuple[int, int]]:
        return self.roles.get(name, frozenset())

    def nominal(self, name: str) -> int:
        try:
            return self.nominals[name]
        except KeyError:
            raise UninterpretedNominal(f"nominal {name} is not interpreted") from None

    def _key(self):
        return (
            self.domain_size,
            tuple((k, tuple(sorted(v))) for k, v in self.concepts.items()),
            tuple((k, tuple(sorted(v))) for k, v in self.roles.items()),
            tuple(self.nominals.items()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Interpretation):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Interpretation({render_interpretation(self)!r})"

    def replace(self, *, concepts=None, roles=None, nominals=None) -> Interpretation:
        """Copy with some valuations overridden (merged over the existing ones)."""
        return Interpretation(
            self.domain_size,
            {**self.concepts, **(concepts or {})},
            {**self.roles, **(roles or {})},
            {**self.nominals, **(nominals or {})},
        )


def restrict(i: Interpretation, keep) -> Interpretation:
    """Substructure on ``keep``, renumbered in ascending order.

    Nominals pointing outside ``keep`` are dropped.
    """
    keep = sorted(set(keep))
    idx = {a: j for j, a in enumerate(keep)}
    return Interpretation(
        len(keep),
        {k: {idx[a] for a in v if a in idx} for k, v in i.concepts.items()},
        {k: {(idx[a], idx[b]) for a, b in v if a in idx and b in idx} for k, v in i.roles.items()},
        {k: idx[a] for k, a in i.nominals.items() if a in idx},
    )


# ---------------------------------------------------------------------------
# reference semantics


def extension(i: Interpretation, c: Concept) -> frozenset[int]:
    """The extension ``c^I`` as a set of domain elements."""
    memo: dict = {}

    def ext(c) -> frozenset[int]:
        hit = memo.get(c)
        if hit is not None:
            return hit
        if isinstance(c, Atomic):
            out = i.concept(c.name)
        elif isinstance(c, Nominal):
            out = frozenset({i.nominal(c.name)})
        elif isinstance(c, Top):
            out = frozenset(i.domain)
        elif isinstance(c, Not):
            out = frozenset(i.domain) - ext(c.arg)
        elif isinstance(c, And):
            out = ext(c.left) & ext(c.right)
        elif isinstance(c, AtLeast):
            filler = ext(c.filler)
            counts = [0] * i.domain_size
            for a, b in i.role(c.role.base):
                if c.role.inverted:
                    a, b = b, a
                # a has b as S-neighbour
                if b in filler:
                    counts[a] += 1
            out = frozenset(a for a in i.domain if counts[a] >= c.n)
        else:
            raise TypeError(f"not a core concept: {c!r}")
        memo[c] = out
        return out

    return ext(c)


def satisfies_card(i: Interpretation, r: CardRestriction) -> bool:
    size = len(extension(i, r.concept))
    return size >= r.bound if r.kind == ">=" else size <= r.bound


def satisfies_gci(i: Interpretation, g: Gci) -> bool:
    return extension(i, g.lhs) <= extension(i, g.rhs)


def is_model(i: Interpretation, t: TcBox | TiBox) -> bool:
    if isinstance(t, TcBox):
        return all(satisfies_card(i, r) for r in t.restrictions)
    if isinstance(t, TiBox):
        return all(satisfies_gci(i, g) for g in t.axioms)
    raise TypeError(f"not a TBox: {t!r}")


# ---------------------------------------------------------------------------
# text format


def render_interpretation(i: Interpretation) -> str:
    lines = [f"domain {i.domain_size}"]
    for name, ext in i.concepts.items():
        lines.append(f"concept {name} = {{{','.join(map(str, sorted(ext)))}}}")
    for name, ext in i.roles.items():
        pairs = ",".join(f"({a},{b})" for a, b in sorted(ext))
        lines.append(f"role {name} = {{{pairs}}}")
    for name, a in i.nominals.items():
        lines.append(f"nominal {name} = {a}")
    return "\n".join(lines) + "\n"


_LINE = re.compile(r"(domain|concept|role|nominal)\b\s*(.*)\Z")
_NAMED = re.compile(r"([A-Za-z0-9_]+)\s*=\s*(.*)\Z")


def parse_interpretation(text: str) -> Interpretation:
    size = None
    concepts: dict = {}
    roles: dict = {}
    nominals: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise ValueError(f"line {lineno}: unrecognised statement {line!r}")
        word, rest = m.groups()
        try:
            if word == "domain":
                size = int(rest)
                continue
            nm = _NAMED.match(rest)
            if not nm:
                raise ValueError(f"expected NAME = VALUE, got {rest!r}")
            name, value = nm.groups()
            value = value.strip()
            if word == "nominal":
                nominals[name] = int(value)
            elif word == "concept":
                if not (value.startswith("{") and value.endswith("}")):
                    raise ValueError("expected a set {i,j,...}")
                inner = value[1:-1].strip()
                concepts[name] = {int(x) for x in inner.split(",")} if inner else set()
            else:
                pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", value)
                if not (value.startswith("{") and value.endswith("}")):
                    raise ValueError("expected a set of pairs {(i,j),...}")
                if re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)|[\s,{}]", "", value):
                    raise ValueError("malformed pair set")
                roles[name] = {(int(a), int(b)) for a, b in pairs}
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    if size is None:
        raise ValueError("missing 'domain N' line")
    return Interpretation(size, concepts, roles, nominals)


# ---------------------------------------------------------------------------
# enumeration in canonical order


def _layout(sig: Signature, m: int):
    concepts = sorted(sig.concepts)
    roles = sorted(sig.roles)
    noms = sorted(sig.individuals)
    pairs = [(a, b) for a in range(m) for b in range(m)]
    return concepts, roles, noms, pairs


def enumerate_interpretations(sig: Signature, m: int) -> Iterator[Interpretation]:
    """Every interpretation of ``sig`` over ``{0..m-1}``, in canonical order.

    The order is lexicographic over (concept bits, role bits, nominal
    positions): concept names sorted, then elements ascending; role names
    sorted, then pairs lexicographically; nominal names sorted, each placed
    at a position ascending.  ``False`` precedes ``True``.
    """
    concepts, roles, noms, pairs = _layout(sig, m)
    nbits = len(concepts) * m + len(roles) * m * m
    for bits in itertools.product((False, True), repeat=nbits):
        cv = {c: {a for a in range(m) if bits[k * m + a]} for k, c in enumerate(concepts)}
        off = len(concepts) * m
        rv = {
            r: {p for j, p in enumerate(pairs) if bits[off + k * m * m + j]}
            for k, r in enumerate(roles)
        }
        for pos in itertools.product(range(m), repeat=len(noms)):
            yield Interpretation(m, cv, rv, dict(zip(noms, pos)))


class InterpretationBatch:
    """Many interpretations over one signature and one domain size, as arrays."""

    def __init__(self, m: int, concepts: dict, roles: dict, nominals: dict, size: int) -> None:
        self.m = m
        self.concepts = concepts  # name -> (B, m) bool
        self.roles = roles  # name -> (B, m, m) bool
        self.nominals = nominals  # name -> (B,) int
        self.size = size
        self._empty1 = None
        self._empty2 = None

    @classmethod
    def from_codes(cls, sig: Signature, m: int, codes: np.ndarray) -> InterpretationBatch:
        """Decode canonical indices (positions in :func:`enumerate_interpretations`)."""
        concepts, roles, noms, _ = _layout(sig, m)
        codes = np.asarray(codes, dtype=np.int64)
        q = len(noms)
        radix = m ** q
        bitcodes = codes // radix
        nomcodes = codes % radix
        nbits = len(concepts) * m + len(roles) * m * m
        bits = kernels.decode_bits(bitcodes, nbits) if nbits else np.zeros((len(codes), 0), bool)
        B = len(codes)
        cv = {c: np.ascontiguousarray(bits[:, k * m:(k + 1) * m]) for k, c in enumerate(concepts)}
        off = len(concepts) * m
        rv = {
            r: np.ascontiguousarray(bits[:, off + k * m * m: off + (k + 1) * m * m].reshape(B, m, m))
            for k, r in enumerate(roles)
        }
        nv = {}
        for j, o in enumerate(noms):
            nv[o] = (nomcodes // (m ** (q - 1 - j))) % m
        return cls(m, cv, rv, nv, B)

    @staticmethod
    def count(sig: Signature, m: int) -> int:
        concepts, roles, noms, _ = _layout(sig, m)
        return 2 ** (len(concepts) * m + len(roles) * m * m) * m ** len(noms)

    @classmethod
    def from_interpretations(cls, items: list[Interpretation], sig: Signature | None = None):
        m = items[0].domain_size
        if any(i.domain_size != m for i in items):
            raise ValueError("a batch needs one common domain size")
        if sig is None:
            sig = Signature(
                frozenset(itertools.chain.from_iterable(i.concepts for i in items)),
                frozenset(itertools.chain.from_iterable(i.roles for i in items)),
                frozenset(itertools.chain.from_iterable(i.nominals for i in items)),
            )
        B = len(items)
        cv = {c: np.zeros((B, m), bool) for c in sig.concepts}
        rv = {r: np.zeros((B, m, m), bool) for r in sig.roles}
        nv = {o: np.zeros(B, np.int64) for o in sig.individuals}
        for b, i in enumerate(items):
            for c in sig.concepts:
                for a in i.concept(c):
                    cv[c][b, a] = True
            for r in sig.roles:
                for a, a2 in i.role(r):
                    rv[r][b, a, a2] = True
            for o in sig.individuals:
                nv[o][b] = i.nominal(o)
        return cls(m, cv, rv, nv, B)

    def concept(self, name: str) -> np.ndarray:
        arr = self.concepts.get(name)
        if arr is None:
            if self._empty1 is None:
                self._empty1 = np.zeros((self.size, self.m), bool)
            return self._empty1
        return arr

    def role(self, name: str) -> np.ndarray:
        arr = self.roles.get(name)
        if arr is None:
            if self._empty2 is None:
                self._empty2 = np.zeros((self.size, self.m, self.m), bool)
            return self._empty2
        return arr

    def nominal(self, name: str) -> np.ndarray:
        try:
            pos = self.nominals[name]
        except KeyError:
            raise UninterpretedNominal(f"nominal {name} is not interpreted") from None
        return pos[:, None] == np.arange(self.m)[None, :]

    def interpretation(self, b: int) -> Interpretation:
        return Interpretation(
            self.m,
            {c: set(np.flatnonzero(v[b]).tolist()) for c, v in self.concepts.items()},
            {r: {tuple(p) for p in np.argwhere(v[b]).tolist()} for r, v in self.roles.items()},
            {o: int(v[b]) for o, v in self.nominals.items()},
        )


def batch_extension(batch: InterpretationBatch, c: Concept, memo: dict | None = None) -> np.ndarray:
    """``(B, m)`` membership array of ``c`` in every interpretation of the batch."""
    if memo is None:
        memo = {}
    hit = memo.get(c)
    if hit is not None:
        return hit
    if isinstance(c, Atomic):
        out = batch.concept(c.name)
    elif isinstance(c, Nominal):
        out = batch.nominal(c.name)
    elif isinstance(c, Top):
        out = np.ones((batch.size, batch.m), bool)
    elif isinstance(c, Not):
        out = ~batch_extension(batch, c.arg, memo)
    elif isinstance(c, And):
        out = batch_extension(batch, c.left, memo) & batch_extension(batch, c.right, memo)
    elif isinstance(c, AtLeast):
        rel = batch.role(c.role.base)
        if c.role.inverted:
            rel = np.ascontiguousarray(rel.transpose(0, 2, 1))
        out = kernels.count_at_least(rel, batch_extension(batch, c.filler, memo), c.n)
    else:
        raise TypeError(f"not a core concept: {c!r}")
    memo[c] = out
    return out


def batch_is_model(batch: InterpretationBatch, t: TcBox | TiBox, memo: dict | None = None) -> np.ndarray:
    if memo is None:
        memo = {}
    ok = np.ones(batch.size, bool)
    if isinstance(t, TcBox):
        for r in t.restrictions:
            size = np.count_nonzero(batch_extension(batch, r.concept, memo), axis=1)
            ok &= (size >= r.bound) if r.kind == ">=" else (size <= r.bound)
    elif isinstance(t, TiBox):
        for g in t.axioms:
            lhs = batch_extension(batch, g.lhs, memo)
            rhs = batch_extension(batch, g.rhs, memo)
            ok &= ~np.any(lhs & ~rhs, axis=1)
    else:
        raise TypeError(f"not a TBox: {t!r}")
    return ok


def first_model_by_enumeration(
    t: TcBox | TiBox,
    max_size: int,
    signature: Signature | None = None,
    una: bool = False,
    chunk: int = 1 << 16,
) -> Interpretation | None:
    """Brute force: the first model in canonical order with domain size <= ``max_size``.

    Every interpretation of the signature is decoded and model-checked; no
    pruning, no solver.  Exponential, intended as an oracle for small cases.
    """
    sig = signature_of(t) | (signature or Signature())
    noms = sorted(sig.individuals)
    for m in range(1, max_size + 1):
        total = InterpretationBatch.count(sig, m)
        for start in range(0, total, chunk):
            codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
            batch = InterpretationBatch.from_codes(sig, m, codes)
            ok = batch_is_model(batch, t)
            if una and len(noms) > 1:
                pos = np.stack([batch.nominals[o] for o in noms], axis=1)
                srt = np.sort(pos, axis=1)
                ok &= np.all(srt[:, 1:] != srt[:, :-1], axis=1)
            hits = np.flatnonzero(ok)
            if hits.size:
                return batch.interpretation(int(hits[0]))
    return None
