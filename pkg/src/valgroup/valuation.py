"""Length-function calculus: exact Gromov products, the set N and its
equivalence, and exhaustive axiom checks over length balls.

All half-integers are held exactly as doubled integers; the checkers work on
the pair-length matrix of a ball so the quantifiers over pairs and triples
run as array operations.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .constructions import DEFAULT_CAP, Ball, GroupContext, GroupElement, enumerate_ball
from .errors import ContextError, DomainError

__all__ = [
    "HalfInt",
    "AxiomId",
    "AxiomReport",
    "ProductLengthCheck",
    "HOLDS",
    "VIOLATED",
    "gromov_c",
    "in_N",
    "equiv",
    "n_class",
    "check_axiom",
    "conjugates_of_b",
    "axiom_holds_on",
    "verify_product_length_lemma",
    "is_pseudo_reduced",
    "verify_pseudo_reduced_formula",
]

HOLDS = "holds_up_to_radius"
VIOLATED = "violated"
DEFAULT_WITNESSES = 10


@functools.total_ordering
@dataclass(frozen=True)
class HalfInt:
    """Exact value ``doubled / 2``."""

    doubled: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(2 * int(value))
        raise TypeError(f"cannot make a HalfInt from {value!r}")

    @property
    def is_integer(self) -> bool:
        return self.doubled % 2 == 0

    def __add__(self, other):
        return HalfInt(self.doubled + HalfInt.of(other).doubled)

    __radd__ = __add__

    def __sub__(self, other):
        return HalfInt(self.doubled - HalfInt.of(other).doubled)

    def __rsub__(self, other):
        return HalfInt(HalfInt.of(other).doubled - self.doubled)

    def __neg__(self):
        return HalfInt(-self.doubled)

    def __mul__(self, k: int):
        if not isinstance(k, (int, np.integer)):
            return NotImplemented
        return HalfInt(self.doubled * int(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            return self.doubled == HalfInt.of(other).doubled
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self.doubled < HalfInt.of(other).doubled

    def __hash__(self):
        return hash(self.doubled) if self.doubled % 2 else hash(self.doubled // 2)

    def __float__(self):
        return self.doubled / 2

    def __int__(self):
        if self.doubled % 2:
            raise ValueError(f"{self} is not an integer")
        return self.doubled // 2

    def __str__(self):
        return str(self.doubled // 2) if self.doubled % 2 == 0 else f"{self.doubled}/2"

    def __repr__(self):
        return f"HalfInt({self})"


class AxiomId(str, enum.Enum):
    A0 = "A0"
    A0STAR = "A0star"
    A1 = "A1"
    A1STAR = "A1star"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    A5 = "A5"
    A5STAR = "A5star"
    C1PRIME = "C1prime"
    C2 = "C2"

    @classmethod
    def parse(cls, text: str) -> "AxiomId":
        key = text.strip().replace("*", "star").replace("'", "prime").replace("′", "prime")
        for member in cls:
            if member.value.lower() == key.lower():
                return member
        raise ValueError(f"unknown axiom {text!r}")

    def __str__(self):
        return self.value


@dataclass
class AxiomReport:
    axiom: AxiomId
    radius: int
    status: str
    witnesses: list[tuple[GroupElement, ...]]
    checked_count: int
    violation_count: int = 0

    @property
    def holds(self) -> bool:
        return self.status == HOLDS


@dataclass
class ProductLengthCheck:
    hypothesis_holds: bool
    formula_holds: bool
    lhs: int
    rhs: int


def _same(ctx: GroupContext, *elements: GroupElement) -> None:
    for g in elements:
        if g.ctx is not ctx:
            raise ContextError("element belongs to a different group")


def gromov_c(ctx: GroupContext, x: GroupElement, y: GroupElement) -> HalfInt:
    _same(ctx, x, y)
    return HalfInt(x.length + y.length - (x * ~y).length)


def in_N(ctx: GroupContext, g: GroupElement) -> bool:
    _same(ctx, g)
    return (g * g).length <= g.length


def equiv(ctx: GroupContext, x: GroupElement, y: GroupElement) -> bool:
    for g in (x, y):
        if not in_N(ctx, g):
            raise DomainError(f"{g} is not in N; the relation is defined on N only")
    return x.length == y.length and (~x * y).length <= x.length


def n_class(ctx: GroupContext, x: GroupElement, ball: Ball | int) -> set[GroupElement]:
    """N(x) restricted to the ball: the class of ``x`` plus the identity."""
    if isinstance(ball, int):
        ball = enumerate_ball(ctx, ball)
    if not in_N(ctx, x):
        raise DomainError(f"{x} is not in N")
    out = {ctx.identity()}
    for y in ball:
        if y.length == x.length and in_N(ctx, y) and (~x * y).length <= x.length:
            out.add(y)
    return out


# -- axiom predicates -------------------------------------------------------------


def _c2(x, y) -> int:
    """Doubled Gromov product."""
    return x.length + y.length - (x * ~y).length


def _five_sum(x, y) -> int:
    """Doubled ``c(x, y) + c(x^-1, y^-1)``."""
    return _c2(x, y) + _c2(~x, ~y)


def conjugates_of_b(ctx: GroupContext, ball: Ball) -> dict[GroupElement, tuple[GroupElement, GroupElement]]:
    """``w^-1 b w`` for ``w`` in the ball and ``b`` in B, the bounded part of
    B^G, each mapped to its first ``(w, b)`` in ball order."""
    B = ctx.b_elements()
    out: dict = {}
    for w in ball:
        wi = ~w
        for b in B:
            out.setdefault(wi * b * w, (w, b))
    return out


def axiom_holds_on(ctx: GroupContext, axiom: AxiomId, witness: Sequence[GroupElement], ball: Ball | None = None) -> bool:
    """Evaluate one instance of the axiom; replays a reported witness.

    A4 and A5* need the ball (provenance, resp. conjugator range).
    """
    axiom = AxiomId(axiom)
    _same(ctx, *witness)
    if axiom is AxiomId.A0:
        (x,) = witness
        return x.is_identity or (x * x).length > x.length
    if axiom is AxiomId.A0STAR:
        (x,) = witness
        return x.length == 0 or (x * x).length > x.length
    if axiom is AxiomId.A1:
        (x,) = witness
        return x.length >= 0 and (not x.is_identity or x.length == 0)
    if axiom is AxiomId.A1STAR:
        (x,) = witness
        return x.length != 0 or x.is_identity
    if axiom is AxiomId.A2:
        (x,) = witness
        return (~x).length == x.length
    if axiom is AxiomId.A3:
        x, y, z = witness
        return _c2(x, y) >= min(_c2(x, z), _c2(y, z))
    if axiom is AxiomId.A4:
        (x,) = witness
        if ball is None or x not in ball:
            return False
        chain = ball.factorization(x)
        prod = ctx.identity()
        for s in chain:
            if s.length > 1:
                return False
            prod = prod * s
        return prod == x and len(chain) - 1 <= ball.radius
    if axiom is AxiomId.A5:
        x, y = witness
        if x.length != y.length or _five_sum(x, y) <= 2 * x.length:
            return True
        return x == y
    if axiom is AxiomId.A5STAR:
        x, y = witness
        if x.length != y.length or _five_sum(x, y) <= 2 * x.length:
            return True
        if ball is None:
            raise ValueError("A5* needs a ball to bound the conjugator search")
        return x * ~y in conjugates_of_b(ctx, ball)
    if axiom is AxiomId.C1PRIME:
        (x,) = witness
        n = x.length
        return n == 0 or n % 2 == 1 or (x * x).length > n
    if axiom is AxiomId.C2:
        (x,) = witness
        return (x * x).length != 1 + x.length
    raise ValueError(f"unhandled axiom {axiom}")


# -- exhaustive checks ------------------------------------------------------------


_SINGLETON = {AxiomId.A0, AxiomId.A0STAR, AxiomId.A1, AxiomId.A1STAR, AxiomId.A2, AxiomId.C1PRIME, AxiomId.C2, AxiomId.A4}


def check_axiom(ctx: GroupContext, axiom: AxiomId | str, L: int, witnesses: int = DEFAULT_WITNESSES, cap: int = DEFAULT_CAP) -> AxiomReport:
    """Evaluate the axiom over every tuple drawn from ball(L).

    Singletons for A0, A0*, A1, A1*, A2, A4, C1', C2; pairs for A5 and A5*;
    triples for A3. A4 replays the BFS provenance of each element and A5*
    searches conjugators inside the same ball.
    """
    if isinstance(axiom, str) and not isinstance(axiom, AxiomId):
        axiom = AxiomId.parse(axiom)
    if L < 1:
        raise ValueError("radius must be at least 1")
    ball = enumerate_ball(ctx, L, cap)
    elems = ball.elements
    if axiom in _SINGLETON:
        bad = [(g,) for g in elems if not axiom_holds_on(ctx, axiom, (g,), ball)]
        return _report(axiom, L, bad, len(elems), witnesses)
    if axiom is AxiomId.A3:
        return _check_a3(ctx, ball, witnesses)
    return _check_five(ctx, ball, axiom, witnesses)


def _report(axiom, L, bad, checked, k):
    status = VIOLATED if bad else HOLDS
    return AxiomReport(axiom, L, status, list(bad[:k]), checked, len(bad))


def _doubled_c_matrix(ball: Ball) -> np.ndarray:
    lengths = ball.lengths()
    return lengths[:, None] + lengths[None, :] - ball.pair_lengths()


def _check_a3(ctx: GroupContext, ball: Ball, k: int) -> AxiomReport:
    C = _doubled_c_matrix(ball)
    n = len(ball)
    found: list[tuple[int, int, int]] = []
    total = 0
    for z in range(n):
        cz = C[:, z]
        bad = C < np.minimum(cz[:, None], cz[None, :])
        count = int(bad.sum())
        if count:
            total += count
            pairs = np.argwhere(bad)[:k]
            found.extend((int(i), int(j), z) for i, j in pairs)
    found.sort()
    els = ball.elements
    bad = [(els[i], els[j], els[z]) for i, j, z in found[:k]]
    return AxiomReport(AxiomId.A3, ball.radius, VIOLATED if total else HOLDS, bad, n ** 3, total)


def _check_five(ctx: GroupContext, ball: Ball, axiom: AxiomId, k: int) -> AxiomReport:
    lengths = ball.lengths()
    LM = ball.pair_lengths()
    inv = ball.inverse_index()
    F = 2 * lengths[:, None] + 2 * lengths[None, :] - LM - LM[np.ix_(inv, inv)]
    hyp = (lengths[:, None] == lengths[None, :]) & (F > 2 * lengths[:, None])
    els = ball.elements
    if axiom is AxiomId.A5:
        bad_mask = hyp & ~np.eye(len(els), dtype=bool)
    else:
        conj = conjugates_of_b(ctx, ball)
        bad_mask = np.zeros_like(hyp)
        for i, j in np.argwhere(hyp):
            if els[i] * ~els[j] not in conj:
                bad_mask[i, j] = True
    pairs = np.argwhere(bad_mask)
    bad = [(els[i], els[j]) for i, j in pairs[:k]]
    n = len(els)
    return AxiomReport(axiom, ball.radius, VIOLATED if len(pairs) else HOLDS, bad, n * n, int(len(pairs)))


# -- sequence lemmas ----------------------------------------------------------------


def _product(ctx: GroupContext, seq: Iterable[GroupElement]) -> GroupElement:
    out = ctx.identity()
    for g in seq:
        out = out * g
    return out


def _formula(ctx, seq) -> tuple[int, int]:
    lhs = _product(ctx, seq).length
    doubled = 2 * sum(g.length for g in seq) - 2 * sum(_c2(seq[i], ~seq[i + 1]) for i in range(len(seq) - 1))
    return lhs, doubled // 2


def verify_product_length_lemma(ctx: GroupContext, seq: Sequence[GroupElement]) -> ProductLengthCheck:
    """Hypothesis ``c(g_{i-1}, g_i^-1) + c(g_i, g_{i+1}^-1) < l(g_i)`` for
    interior ``i`` and the resulting closed formula for ``l(g_1 ... g_n)``."""
    seq = list(seq)
    if len(seq) < 2:
        raise ValueError("need at least two elements")
    _same(ctx, *seq)
    hyp = all(
        _c2(seq[i - 1], ~seq[i]) + _c2(seq[i], ~seq[i + 1]) < 2 * seq[i].length
        for i in range(1, len(seq) - 1)
    )
    lhs, rhs = _formula(ctx, seq)
    return ProductLengthCheck(hyp, lhs == rhs, lhs, rhs)


def is_pseudo_reduced(ctx: GroupContext, U: Iterable[GroupElement], seq: Sequence[GroupElement]) -> bool:
    pool = set()
    for u in U:
        pool.add(u)
        pool.add(~u)
    seq = list(seq)
    _same(ctx, *seq)
    for g in seq:
        if g not in pool:
            raise DomainError(f"{g} is not drawn from U and its inverses")
        if g.is_identity:
            return False
    for u, v in zip(seq, seq[1:]):
        if (u * v).is_identity:
            return False
        if in_N(ctx, u) and in_N(ctx, v) and equiv(ctx, u, v):
            return False
    return True


def verify_pseudo_reduced_formula(ctx: GroupContext, seq: Sequence[GroupElement]) -> ProductLengthCheck:
    """Closed length formula for a pseudo-reduced sequence; the hypothesis
    flag is the pseudo-reducedness of ``seq`` over its own members."""
    seq = list(seq)
    _same(ctx, *seq)
    hyp = is_pseudo_reduced(ctx, seq, seq) if seq else True
    lhs, rhs = _formula(ctx, seq)
    return ProductLengthCheck(hyp, lhs == rhs, lhs, rhs)
