"""Property checks over exhaustive and seeded corpora.

Each check returns a :class:`CheckResult`; ``failures`` holds the first few
counterexamples in readable form.  The acceptance suite and the ``verify``
command both run these.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

import numpy as np

from . import corpus
from .c2 import CountQuant, batch_eval_c2, c2_node_count, eval_c2, free_vars, psi_concept, psi_tbox, structure_of
from .generators import (
    domino_tcbox, incr_mod2n, tile_torus, torus_tcbox, torus_tibox, verify_torus,
)
from .model_finder import ConsistentWitness, NoModelUpTo, SearchOptions, find_model
from .reductions import internalise, phi
from .semantics import (
    InterpretationBatch, batch_extension, enumerate_interpretations, extension, render_interpretation,
)
from .syntax import (
    TOP, CardRestriction, Gci, Nominal, RoleExpr, Signature, TcBox, TiBox, at_most,
    exists, node_count, render, tbox_size,
)

__all__ = [
    "CheckResult", "c2_correspondence", "phi_equiconsistency", "torus_shape", "domino_iff",
    "internalise_equiconsistency", "increment_formula", "una_example", "size_ratios", "ALL_CHECKS",
    "PSI_NODE_FACTOR", "PHI_SIZE_FACTOR",
]

# regression bounds on translation growth
PSI_NODE_FACTOR = 4
PHI_SIZE_FACTOR = 6

MAX_REPORTED = 5


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; {self.detail}" if self.detail else ""
        return f"{status} {self.name}: {self.cases} cases in {self.seconds:.1f}s{extra}"


def _finish(name, t0, cases, failures, detail="", extra_ok=True):
    return CheckResult(name, not failures and extra_ok, cases, time.monotonic() - t0, failures[:MAX_REPORTED], detail)


# ---------------------------------------------------------------------------


def c2_correspondence(max_depth: int = 3, max_size: int = 3, bounds=(0, 1, 2), spot_checks: int = 400, seed: int = 0):
    """Concept extension equals the C2 translation's satisfying assignments.

    Exhaustive over all concepts of depth ``<= max_depth`` (one concept name,
    one role and its inverse) and all interpretations up to ``max_size``,
    using the batched evaluators; a seeded sample is re-checked with the
    element-wise reference evaluators.
    """
    t0 = time.monotonic()
    sig = Signature(frozenset({"A"}), frozenset({"R"}))
    below = corpus.concept_levels(max_depth - 1, bounds=bounds)[-1]
    failures: list[str] = []
    sizes = range(1, max_size + 1)
    batches = {m: InterpretationBatch.from_codes(sig, m, np.arange(InterpretationBatch.count(sig, m))) for m in sizes}
    ext_memo: dict = {m: {} for m in sizes}
    c2_memo: dict = {m: {} for m in sizes}

    def compare(c, keep: bool):
        f = psi_concept(c, "x")
        for m in sizes:
            em, cm = ext_memo[m], c2_memo[m]
            fresh_body = isinstance(f, CountQuant) and f.body not in cm
            ext = batch_extension(batches[m], c, em)
            # only x is free (checked in the spot checks), so y = 0 reads the value
            sat = batch_eval_c2(batches[m], f, cm)[:, :, 0]
            if not keep:
                # the children stay cached; the new top-level entries are dropped
                del em[c]
                del cm[f]
                if fresh_body:
                    del cm[f.body]
            if not np.array_equal(ext, sat):
                bad = np.flatnonzero(np.any(ext != sat, axis=1))
                failures.append(f"{render(c)} @ {render_interpretation(batches[m].interpretation(int(bad[0])))}")

    for c in below:
        compare(c, keep=True)
    n_concepts = 0
    for c in corpus.concepts_of_depth(below, bounds=bounds):
        n_concepts += 1
        compare(c, keep=False)
    n_interps = sum(b.size for b in batches.values())
    pairs = n_concepts * n_interps

    # element-wise spot checks with the reference evaluators
    rng = random.Random(seed)
    everything = [i for m in range(1, max_size + 1) for i in enumerate_interpretations(sig, m)]
    for _ in range(spot_checks):
        c = corpus.random_concept(rng, max_depth, names=("A",), max_bound=max(bounds))
        i = rng.choice(everything)
        s = structure_of(i)
        f = psi_concept(c, "x")
        if free_vars(f) != {"x"}:
            failures.append(f"free variables of psi({render(c)}) are {sorted(free_vars(f))}")
        want = extension(i, c)
        got = frozenset(a for a in i.domain if eval_c2(s, f, {"x": a}))
        if want != got:
            failures.append(f"reference mismatch {render(c)} on {render_interpretation(i)}")
    detail = f"{n_concepts} concepts x {n_interps} interpretations"
    return _finish("c2 correspondence", t0, pairs + spot_checks, failures, detail)


def _has_model(t, bound, **kw) -> bool:
    v = find_model(t, SearchOptions(max_domain_size=bound, canonical=False, **kw))
    return isinstance(v, ConsistentWitness)


def phi_equiconsistency(seed: int = 1, count: int = 500, bound: int = 4):
    """T and its nominal translation agree on bounded consistency."""
    t0 = time.monotonic()
    failures = []
    yes = 0
    for t in corpus.tcbox_corpus(seed, count):
        a = _has_model(t, bound)
        b = _has_model(phi(t)[0], bound)
        yes += a
        if a != b:
            failures.append(f"{render(t)!r}: T {a}, phi(T) {b}")
    return _finish("phi equiconsistency", t0, count, failures, f"{yes} consistent, {count - yes} not")


def torus_shape(n: int = 1):
    """The torus box has a model of size 4^n that is the torus, and none smaller."""
    t0 = time.monotonic()
    failures = []
    side = 1 << n
    for label, box in (("card", torus_tcbox(n)), ("gci", torus_tibox(n))):
        v = find_model(box, SearchOptions(max_domain_size=side * side))
        if not isinstance(v, ConsistentWitness):
            failures.append(f"{label}: no model up to {side * side}")
        else:
            report = verify_torus(v.interpretation, n)
            if not report.verdict:
                failures.append(f"{label}: witness is not a torus: {report.violations[:2]}")
        smaller = find_model(box, SearchOptions(max_domain_size=side * side - 1, canonical=False))
        if smaller != NoModelUpTo(side * side - 1):
            failures.append(f"{label}: found a model below {side * side}")
    return _finish(f"torus n={n}", t0, 2, failures)


def domino_iff(bound: int = 4, max_tiles: int = 2):
    """Domino box consistent iff the system tiles the 2x2 torus."""
    t0 = time.monotonic()
    failures = []
    cases = 0
    for d, w in corpus.domino_corpus(max_tiles, 1):
        cases += 1
        consistent = _has_model(domino_tcbox(1, d, w), bound)
        tiles = tile_torus(d, 2, 2, w) is not None
        if consistent != tiles:
            failures.append(f"tiles={d.tiles} H={sorted(d.horizontal)} V={sorted(d.vertical)} w={w}: {consistent} vs {tiles}")
    return _finish("domino iff tiling", t0, cases, failures)


def internalise_equiconsistency(seed: int = 2, count: int = 300, bound: int = 4):
    """T consistent iff (>= 1 C_T) consistent; smallest model sizes coincide."""
    t0 = time.monotonic()
    failures = []
    yes = 0
    for t in corpus.tibox_corpus(seed, count):
        ct = TcBox([CardRestriction(">=", 1, internalise(t))])
        vt = find_model(t, SearchOptions(max_domain_size=bound, canonical=False))
        vc = find_model(ct, SearchOptions(max_domain_size=bound + 1, canonical=False))
        a = isinstance(vt, ConsistentWitness)
        b = isinstance(vc, ConsistentWitness)
        yes += a
        if a != b:
            failures.append(f"{render(t)!r}: T {a} at {bound}, C_T {b} at {bound + 1}")
        elif a and vt.size != vc.size:
            failures.append(f"{render(t)!r}: smallest models differ, {vt.size} vs {vc.size}")
    return _finish("internalisation equiconsistency", t0, count, failures, f"{yes} consistent, {count - yes} not")


def increment_formula(max_n: int = 6):
    """The carry-chain formula matches +1 mod 2^n on every pair of bit vectors."""
    t0 = time.monotonic()
    failures = []
    cases = 0
    for n in range(1, max_n + 1):
        for x in range(1 << n):
            xb = [x >> k & 1 for k in range(n)]
            for y in range(1 << n):
                cases += 1
                yb = [y >> k & 1 for k in range(n)]
                if incr_mod2n(xb, yb) != (y == (x + 1) % (1 << n)):
                    failures.append(f"n={n} x={x} y={y}")
    return _finish("increment formula", t0, cases, failures)


def una_box(k: int) -> TiBox:
    """``{o} => (<= k R top)`` and ``top => exists inv(R).{o}``."""
    r = RoleExpr("R")
    return TiBox([Gci(Nominal("o"), at_most(k, r, TOP)), Gci(TOP, exists(r.inverse(), Nominal("o")))])


def una_example(bound: int = 6):
    """Unique names force a second element that the box cannot accommodate when k = 1."""
    t0 = time.monotonic()
    failures = []
    extra = Signature(individuals=frozenset({"p"}))
    expect = {(1, True): False, (2, True): True, (1, False): True, (2, False): True}
    for (k, una), want in expect.items():
        v = find_model(una_box(k), SearchOptions(max_domain_size=bound, una=una, extra_signature=extra, canonical=False))
        got = isinstance(v, ConsistentWitness)
        if got != want:
            failures.append(f"k={k} una={una}: consistent={got}, expected {want}")
    return _finish("unique name example", t0, len(expect), failures)


def size_ratios(seed: int = 1, count: int = 500):
    """Translation growth stays under fixed linear factors."""
    t0 = time.monotonic()
    failures = []
    worst_psi = worst_phi = 0.0
    for t in corpus.tcbox_corpus(seed, count):
        psi_ratio = c2_node_count(psi_tbox(t)) / node_count(t)
        phi_ratio = tbox_size(phi(t)[0], "unary") / tbox_size(t, "unary")
        worst_psi = max(worst_psi, psi_ratio)
        worst_phi = max(worst_phi, phi_ratio)
        if psi_ratio > PSI_NODE_FACTOR or phi_ratio > PHI_SIZE_FACTOR:
            failures.append(f"{render(t)!r}: psi {psi_ratio:.2f}, phi {phi_ratio:.2f}")
    detail = f"worst psi {worst_psi:.2f} <= {PSI_NODE_FACTOR}, worst phi {worst_phi:.2f} <= {PHI_SIZE_FACTOR}"
    return _finish("size ratios", t0, count, failures, detail)


ALL_CHECKS = {
    "c2": c2_correspondence,
    "phi": phi_equiconsistency,
    "torus": torus_shape,
    "domino": domino_iff,
    "internalise": internalise_equiconsistency,
    "increment": increment_formula,
    "una": una_example,
    "sizes": size_ratios,
}
