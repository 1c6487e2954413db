"""Bounded malnormality and CSA* checks, and the best-effort subgroup
decomposition probe."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..constructions import DEFAULT_CAP, GroupContext, GroupElement, enumerate_ball
from ..errors import ContextError, IterationCapError
from ..normal_forms import cyclic_reduce
from ..valuation import HOLDS, VIOLATED, conjugates_of_b, in_N
from .centralizers import centralizer_ball
from .nielsen import DEFAULT_SEQUENCE_CAP, NielsenStep, nielsen_reduce, subgroup_ball

__all__ = [
    "MalnormalReport",
    "CsaReport",
    "ProbeReport",
    "CONSISTENT",
    "REFUTED",
    "is_malnormal_up_to",
    "is_s_malnormal_up_to",
    "csa_check",
    "subgroup_decomposition_probe",
]

CONSISTENT = "consistent_with_CSA*"
REFUTED = "refuted"


@dataclass
class MalnormalReport:
    status: str
    radius: int
    witness: tuple[GroupElement, GroupElement] | None
    checked_count: int

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass
class CsaReport:
    radius: int
    involution_witnesses: list[GroupElement]
    condition_i_status: str
    condition_i_witness: tuple | None
    condition_ii_status: str
    condition_ii_witness: tuple | None
    verdict: str
    verdict_witness: tuple | None
    checked: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.verdict == CONSISTENT


@dataclass
class ProbeReport:
    radius: int
    hypothesis_status: str
    hypothesis_witness: tuple | None
    reduced_generators: list[GroupElement]
    log: list[NielsenStep]
    classification: list[tuple[GroupElement, str, tuple | None]]
    nielsen_complete: bool = True
    best_effort: bool = True


def _malnormal(ctx, H, conjugators, L) -> MalnormalReport:
    H = set(H)
    for h in H:
        if h.ctx is not ctx:
            raise ContextError("subgroup element belongs to a different group")
    nontrivial = sorted(h for h in H if not h.is_identity)
    checked = 0
    for x in conjugators:
        if x in H:
            continue
        checked += 1
        xi = ~x
        for h in nontrivial:
            if xi * h * x in H:
                return MalnormalReport(VIOLATED, L, (x, h), checked)
    return MalnormalReport(HOLDS, L, None, checked)


def is_malnormal_up_to(ctx: GroupContext, H: Iterable[GroupElement], L: int, cap: int = DEFAULT_CAP) -> MalnormalReport:
    """``H ∩ x^-1 H x = 1`` inside the ball for every ``x`` in ball(L) \\ H.

    The witness ``(x, h)`` has ``h`` and ``x^-1 h x`` both in H, ``h != 1``.
    """
    return _malnormal(ctx, H, enumerate_ball(ctx, L, cap), L)


def is_s_malnormal_up_to(ctx: GroupContext, H: Iterable[GroupElement], L: int, cap: int = DEFAULT_CAP) -> MalnormalReport:
    """As ``is_malnormal_up_to`` with conjugators restricted to S \\ H."""
    return _malnormal(ctx, H, ctx.s_elements(), L)


def _abelian(C: list[GroupElement]) -> tuple | None:
    for i, u in enumerate(C):
        for v in C[i + 1 :]:
            if u * v != v * u:
                return (u, v)
    return None


def csa_check(ctx: GroupContext, L: int, cap: int = DEFAULT_CAP) -> CsaReport:
    """Bounded test of the CSA* criterion.

    (a) involutions in ball(L); (b) for every ``g`` in S \\ {1} whose
    ball-restricted centralizer lies in S, that centralizer is abelian and
    S-malnormal (elements of length at least 2 lie in their own centralizer,
    so no other ``g`` meets the hypothesis); (c) for every ``g`` in B \\ {1}
    the ball-restricted centralizer is abelian and malnormal.
    """
    if L < 2:
        raise ValueError("radius must be at least 2")
    ball = enumerate_ball(ctx, L, cap)
    involutions = [g for g in ball if not g.is_identity and (g * g).is_identity]
    checked = {"involution_scan": len(ball), "condition_i": 0, "condition_ii": 0}

    cond_i, wit_i = HOLDS, None
    for g in ctx.s_elements():
        if g.is_identity:
            continue
        C = centralizer_ball(ctx, g, L, cap)
        if any(c.length > 1 for c in C):
            continue
        checked["condition_i"] += 1
        pair = _abelian(C)
        if pair is not None:
            cond_i, wit_i = VIOLATED, ("not_abelian", g) + pair
            break
        rep = is_s_malnormal_up_to(ctx, C, L, cap)
        if not rep.holds:
            cond_i, wit_i = VIOLATED, ("not_s_malnormal", g) + rep.witness
            break

    cond_ii, wit_ii = HOLDS, None
    for g in ctx.b_elements():
        if g.is_identity:
            continue
        checked["condition_ii"] += 1
        C = centralizer_ball(ctx, g, L, cap)
        pair = _abelian(C)
        if pair is not None:
            cond_ii, wit_ii = VIOLATED, ("not_abelian", g) + pair
            break
        rep = is_malnormal_up_to(ctx, C, L, cap)
        if not rep.holds:
            cond_ii, wit_ii = VIOLATED, ("not_malnormal", g) + rep.witness
            break

    if involutions:
        verdict, vw = REFUTED, ("involution", involutions[0])
    elif cond_i != HOLDS:
        verdict, vw = REFUTED, wit_i
    elif cond_ii != HOLDS:
        verdict, vw = REFUTED, wit_ii
    else:
        verdict, vw = CONSISTENT, None
    return CsaReport(L, involutions, cond_i, wit_i, cond_ii, wit_ii, verdict, vw, checked)


def subgroup_decomposition_probe(ctx: GroupContext, K_gens: Iterable[GroupElement], L: int, n_max: int = 3, cap: int = DEFAULT_CAP) -> ProbeReport:
    """Best-effort look at ``K = <K_gens>``.

    Checks that no element of K found inside ball(L) is a nontrivial
    conjugate ``x^-1 b x`` of B (``x`` in ball(L)), Nielsen-reduces the
    generators (keeping the last set reached when no shortening applies,
    with ``nielsen_complete`` false), and labels each reduced generator ``free_part`` (outside N)
    or ``n_class_part`` with anchor ``(core, conjugator)`` from cyclic
    reduction. Nothing here certifies a decomposition.
    """
    gens = list(K_gens)
    for u in gens:
        if u.ctx is not ctx:
            raise ContextError("generator belongs to a different group")
    K = subgroup_ball(ctx, gens, L)
    conj = conjugates_of_b(ctx, enumerate_ball(ctx, L, cap))
    status, witness = HOLDS, None
    for k in sorted(K):
        if not k.is_identity and k in conj:
            status, witness = VIOLATED, (k,) + conj[k]
            break
    try:
        result = nielsen_reduce(ctx, gens, n_max, cap=DEFAULT_SEQUENCE_CAP)
        reduced, log, complete = result.generators, result.log, True
    except IterationCapError as exc:
        # no single-occurrence shortening exists (typically K meets B)
        reduced, log, complete = list(exc.partial or gens), [], False
    labels = []
    for u in reduced:
        if in_N(ctx, u):
            cr = cyclic_reduce(ctx, u)
            labels.append((u, "n_class_part", (cr.core, cr.conjugator)))
        else:
            labels.append((u, "free_part", None))
    return ProbeReport(L, status, witness, reduced, log, labels, complete)
