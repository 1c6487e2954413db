"""Centralizers inside a ball: the factorization ``C(g) = <s> x (B ∩ C(g))``
for cyclically reduced ``g`` and the decomposition of commuting pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..constructions import DEFAULT_CAP, GroupContext, GroupElement, enumerate_ball
from ..errors import ContextError, ContractError, NotFoundError, RadiusInsufficientError
from ..normal_forms import is_cyclically_reduced

__all__ = [
    "CentralizerStructure",
    "CommutingDecomposition",
    "centralizer_ball",
    "centralizer_structure",
    "commuting_decompose",
]


@dataclass
class CentralizerStructure:
    g: GroupElement
    s: GroupElement
    b_part: list[GroupElement]
    radius: int
    certificate: list[tuple[GroupElement, int, GroupElement]]
    centralizer: list[GroupElement] = field(repr=False, default_factory=list)

    @property
    def is_cyclic_in_ball(self) -> bool:
        """True when B ∩ C(g) is trivial and C(g) ∩ ball is powers of s."""
        if len(self.b_part) != 1:
            return False
        s = self.s
        return all(c == s ** k and h.is_identity for c, k, h in self.certificate)


@dataclass
class CommutingDecomposition:
    X: GroupElement
    h1: GroupElement
    h2: GroupElement
    n: int
    m: int
    y_square_doubles: bool | None

    def verify(self, x: GroupElement, y: GroupElement) -> bool:
        X, h1, h2 = self.X, self.h1, self.h2
        return (
            x == h1 * X ** self.n
            and y == h2 * X ** self.m
            and h1.length == 0
            and h2.length == 0
            and h1.commutes_with(X)
            and h2.commutes_with(X)
            and h1.commutes_with(h2)
        )


def centralizer_ball(ctx: GroupContext, g: GroupElement, L: int, cap: int = DEFAULT_CAP) -> list[GroupElement]:
    """Elements of ball(L) commuting with ``g``, in ball order."""
    if g.ctx is not ctx:
        raise ContextError("element belongs to a different group")
    return [c for c in enumerate_ball(ctx, L, cap) if c * g == g * c]


def _factor(c: GroupElement, powers: dict, b_set: set) -> list[tuple[int, GroupElement]]:
    out = []
    for k, sk in powers.items():
        h = ~sk * c
        if h in b_set:
            out.append((k, h))
    return out


def _powers(s: GroupElement, kmax: int) -> dict[int, GroupElement]:
    out = {0: s.ctx.identity()}
    pos, neg, inv = s.ctx.identity(), s.ctx.identity(), ~s
    for k in range(1, kmax + 1):
        pos = pos * s
        neg = neg * inv
        out[k] = pos
        out[-k] = neg
    return out


def centralizer_structure(ctx: GroupContext, g: GroupElement, L: int, cap: int = DEFAULT_CAP) -> CentralizerStructure:
    """Find ``s`` such that every element of C(g) ∩ ball(L) is uniquely
    ``s^k h`` with ``h`` in B ∩ C(g).

    Candidates are the non-B centralizer elements in ball order, so the
    first hit is a shortest one. Raises RadiusInsufficientError when no
    candidate factors the whole ball-restricted centralizer.
    """
    if g.ctx is not ctx:
        raise ContextError("element belongs to a different group")
    if g.length < 2:
        raise ContractError("g must have length at least 2")
    if not is_cyclically_reduced(ctx, g):
        raise ContractError("g must be cyclically reduced")
    cent = centralizer_ball(ctx, g, L, cap)
    b_part = [c for c in cent if c.length == 0]
    b_set = set(b_part)
    # exponents needed: l(s^k) >= |k| for a c.r. s, and l(s) >= 1
    kmax = L
    for s in cent:
        if s.length == 0:
            continue
        if not all(s.commutes_with(h) for h in b_part):
            continue
        powers = _powers(s, kmax)
        certificate = []
        for c in cent:
            found = _factor(c, powers, b_set)
            if len(found) != 1:
                break
            k, h = found[0]
            certificate.append((c, k, h))
        else:
            return CentralizerStructure(g, s, b_part, L, certificate, cent)
    raise RadiusInsufficientError(f"no element of C(g) ∩ ball({L}) generates it modulo B; try a larger radius")


def commuting_decompose(ctx: GroupContext, x: GroupElement, y: GroupElement, L: int, cap: int = DEFAULT_CAP) -> CommutingDecomposition:
    """Find ``X`` in ball(L), ``h1, h2`` in B and exponents with
    ``x = h1 X^n``, ``y = h2 X^m`` and ``h1, h2, X`` pairwise commuting.

    Requires ``[x, y] = 1`` and ``l(x^2) = 2 l(x)``. A zero-length ``x``
    takes the closed form ``h1 = x, h2 = 1, X = y, n = 0, m = 1``. Otherwise
    the search runs over X in ball order with ``|n| <= l(x)`` and
    ``|m| <= l(y)``. ``y_square_doubles`` reports ``l(y^2) = 2 l(y)`` when
    both lengths are positive.
    """
    for g in (x, y):
        if g.ctx is not ctx:
            raise ContextError("element belongs to a different group")
    if x * y != y * x:
        raise ContractError("x and y do not commute")
    if (x * x).length != 2 * x.length:
        raise ContractError("l(x^2) != 2 l(x)")
    claim = (y * y).length == 2 * y.length if x.length >= 1 and y.length >= 1 else None
    one = ctx.identity()
    if x.length == 0:
        return CommutingDecomposition(y, x, one, 0, 1, claim)
    B = ctx.b_elements()
    for X in enumerate_ball(ctx, L, cap):
        if X.length == 0 or X * x != x * X or X * y != y * X:
            continue
        hb = [h for h in B if h * X == X * h]
        hset = set(hb)
        n_found = _exponent(x, X, x.length, hset)
        if n_found is None:
            continue
        m_found = _exponent(y, X, y.length, hset)
        if m_found is None:
            continue
        (n, h1), (m, h2) = n_found, m_found
        if h1 * h2 != h2 * h1:
            continue
        return CommutingDecomposition(X, h1, h2, n, m, claim)
    raise NotFoundError(f"no decomposition with X in ball({L})")


def _exponent(v, X, bound, hset):
    powers = _powers(X, bound)
    for k in sorted(powers, key=lambda k: (abs(k), k < 0)):
        h = v * ~powers[k]
        if h in hset:
            return k, h
    return None
