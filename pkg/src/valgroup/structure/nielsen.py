"""Weakly reduced generating sets, Nielsen length reduction, and bounded
checks tied to them (the Hoare pair property, B-normality and the
single-stable-letter splitting)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ..constructions import DEFAULT_CAP, GroupContext, GroupElement, Kind, StableLetter, enumerate_ball
from ..errors import CombinatorialCapError, ContextError, IterationCapError
from ..valuation import HOLDS, VIOLATED

__all__ = [
    "WeakReductionReport",
    "NielsenStep",
    "NielsenResult",
    "BoundedReport",
    "is_weakly_reduced_up_to",
    "nielsen_reduce",
    "hoare_pair_check",
    "b_normality_check",
    "stable_letter_split_check",
    "subgroup_ball",
]

DEFAULT_SEQUENCE_CAP = 1_000_000


@dataclass
class WeakReductionReport:
    status: str
    n_max: int
    witness: tuple[GroupElement, ...] | None
    checked_count: int

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass(frozen=True)
class NielsenStep:
    replaced: GroupElement
    replacement: GroupElement
    sequence: tuple[GroupElement, ...]


@dataclass
class NielsenResult:
    generators: list[GroupElement]
    log: list[NielsenStep]
    final_report: WeakReductionReport


@dataclass
class BoundedReport:
    status: str
    radius: int
    witnesses: list
    checked_count: int
    extra: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


def _pool(U: Iterable[GroupElement]) -> list[GroupElement]:
    out = set()
    for u in U:
        out.add(u)
        out.add(~u)
    return sorted(out)


def is_weakly_reduced_up_to(ctx: GroupContext, U: Iterable[GroupElement], n_max: int, cap: int = DEFAULT_SEQUENCE_CAP) -> WeakReductionReport:
    """Check ``l(u0 ... un) >= l(u1 ... un)`` for every admissible sequence
    of at most ``n_max`` members of U ∪ U^-1 (no zero-length members, no
    cancelling neighbours).

    Sequences grow to the left, so each check reuses the suffix product;
    lengths are scanned in increasing order and the first violation found
    is one of minimal length.
    """
    U = list(U)
    for u in U:
        if u.ctx is not ctx:
            raise ContextError("generator belongs to a different group")
    letters = [u for u in _pool(U) if u.length != 0]
    frontier = [((u,), u) for u in letters]
    checked = 0
    for _ in range(2, n_max + 1):
        nxt = []
        for seq, prod in frontier:
            head = seq[0]
            for u in letters:
                if (u * head).is_identity:
                    continue
                checked += 1
                if checked > cap:
                    raise CombinatorialCapError(f"more than {cap} sequences up to length {n_max}")
                new = u * prod
                cand = (u,) + seq
                if new.length < prod.length:
                    return WeakReductionReport(VIOLATED, n_max, cand, checked)
                nxt.append((cand, new))
        frontier = nxt
    return WeakReductionReport(HOLDS, n_max, None, checked)


def _occurrences(seq: Sequence[GroupElement], g: GroupElement) -> list[int]:
    gi = ~g
    return [i for i, u in enumerate(seq) if u == g or u == gi]


def _shortening(seq: tuple[GroupElement, ...], g: GroupElement) -> GroupElement | None:
    """Shortest subproduct of ``seq`` around the single occurrence of
    ``g^{+-1}`` that is shorter than ``g``; replacing ``g`` by it is a
    Nielsen transformation fixing the other generators."""
    (i,) = _occurrences(seq, g)
    best = None
    for j in range(i + 1):
        for k in range(i, len(seq)):
            w = seq[j]
            for u in seq[j + 1 : k + 1]:
                w = w * u
            if w.length < g.length and not w.is_identity:
                key = (w.length, k - j, w.sort_key())
                if best is None or key < best[0]:
                    best = (key, w)
    return None if best is None else best[1]


def nielsen_reduce(ctx: GroupContext, U: Iterable[GroupElement], n_max: int, max_steps: int = 1000, cap: int = DEFAULT_SEQUENCE_CAP) -> NielsenResult:
    """Shorten generators until the set is weakly reduced up to ``n_max``.

    Each step takes the minimal violating sequence, picks the longest
    generator occurring in it exactly once (ties by element order) and
    replaces it by a shorter subproduct of the sequence. Trivial results
    and duplicates up to inversion are dropped, so total length strictly
    decreases.
    """
    gens: list[GroupElement] = []
    for u in U:
        if u.ctx is not ctx:
            raise ContextError("generator belongs to a different group")
        if not u.is_identity and u not in gens and ~u not in gens:
            gens.append(u)
    log: list[NielsenStep] = []
    for _ in range(max_steps):
        report = is_weakly_reduced_up_to(ctx, gens, n_max, cap)
        if report.holds:
            # report each generator by the smaller of itself and its inverse
            gens = sorted(min(g, ~g) for g in gens)
            return NielsenResult(gens, log, report)
        seq = report.witness
        occurring = [g for g in gens if len(_occurrences(seq, g)) == 1]
        occurring.sort(key=lambda g: (-g.length, g.sort_key()))
        step = None
        for g in occurring:
            w = _shortening(seq, g)
            if w is not None:
                step = (g, w)
                break
        if step is None:
            raise IterationCapError(f"no shortening transformation for {tuple(map(str, seq))}", sorted(gens))
        g, w = step
        log.append(NielsenStep(g, w, seq))
        idx = gens.index(g)
        if w in gens or ~w in gens:
            gens.pop(idx)
        else:
            gens[idx] = w
    raise IterationCapError(f"not weakly reduced after {max_steps} steps", sorted(gens))


def subgroup_ball(ctx: GroupContext, gens: Iterable[GroupElement], L: int) -> set[GroupElement]:
    """Elements of <gens> reachable by words whose prefixes stay in ball(L)."""
    pool = _pool(gens)
    found = {ctx.identity()}
    frontier = [ctx.identity()]
    while frontier:
        nxt = []
        for h in frontier:
            for u in pool:
                v = h * u
                if v.length <= L and v not in found:
                    found.add(v)
                    nxt.append(v)
        frontier = nxt
    return found


def hoare_pair_check(ctx: GroupContext, L: int, witnesses: int = 10, cap: int = DEFAULT_CAP) -> BoundedReport:
    """Every ball pair with ``c(x,y) + c(x^-1,y^-1) >= l(x) = l(y)`` has
    ``x y^-1`` in N."""
    ball = enumerate_ball(ctx, L, cap)
    lengths = ball.lengths()
    LM = ball.pair_lengths()
    inv = ball.inverse_index()
    F = 2 * lengths[:, None] + 2 * lengths[None, :] - LM - LM[np.ix_(inv, inv)]
    hyp = (lengths[:, None] == lengths[None, :]) & (F >= 2 * lengths[:, None])
    els = ball.elements
    bad = []
    pairs = np.argwhere(hyp)
    for i, j in pairs:
        w = els[i] * ~els[j]
        if (w * w).length > w.length:
            bad.append((els[i], els[j]))
    status = VIOLATED if bad else HOLDS
    return BoundedReport(status, L, bad[:witnesses], int(len(pairs)), {"violations": len(bad)})


def b_normality_check(ctx: GroupContext, L: int, witnesses: int = 10, cap: int = DEFAULT_CAP) -> BoundedReport:
    """``x^-1 b x`` has length 0 for every ball element ``x`` and ``b`` in B."""
    B = ctx.b_elements()
    bad = []
    count = 0
    for x in enumerate_ball(ctx, L, cap):
        xi = ~x
        for b in B:
            count += 1
            if (xi * b * x).length != 0:
                bad.append((x, b))
    return BoundedReport(VIOLATED if bad else HOLDS, L, bad[:witnesses], count, {"violations": len(bad)})


def stable_letter_split_check(ctx: GroupContext, L: int, witnesses: int = 10, cap: int = DEFAULT_CAP) -> BoundedReport:
    """HNN only: every ball element equals ``b t^k`` with ``b`` in B."""
    if ctx.kind is not Kind.HNN:
        raise ContextError("the single stable letter split is defined for HNN extensions")
    t = ctx.element([StableLetter(1)])
    ball = enumerate_ball(ctx, L, cap)
    bad = []
    for g in ball:
        # the t-exponent sum is the only possible k
        k = sum(e for e, _ in g.syllables)
        if (g * t ** (-k)).length != 0:
            bad.append((g,))
    return BoundedReport(VIOLATED if bad else HOLDS, L, bad[:witnesses], len(ball), {"violations": len(bad)})
