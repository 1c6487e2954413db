"""Conjugacy: brute-force conjugator search and the constructive
decomposition ``y = (ab)^n, z = (ba)^n, x = a (ba)^m`` for conjugate
cyclically (or weakly cyclically) reduced elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..constructions import DEFAULT_CAP, GroupContext, GroupElement, enumerate_ball
from ..errors import ContextError, ContractError, InternalError
from ..normal_forms import is_cyclically_reduced, is_weakly_cyclically_reduced, normal_form

__all__ = [
    "ConjugacyDecomposition",
    "REDUCED",
    "SEMI_REDUCED",
    "UNREDUCED",
    "product_form",
    "conjugate_search",
    "conjugacy_decompose",
]

REDUCED = "reduced"
SEMI_REDUCED = "semi_reduced"
UNREDUCED = "unreduced"


@dataclass(frozen=True)
class ConjugacyDecomposition:
    a: GroupElement
    b: GroupElement
    n: int
    m: int
    form_ab: str
    form_ba: str
    case: str

    def verify(self, x: GroupElement, y: GroupElement, z: GroupElement) -> bool:
        a, b = self.a, self.b
        ab, ba = a * b, b * a
        return ab ** self.n == y and ba ** self.n == z and a * ba ** self.m == x


def product_form(a: GroupElement, b: GroupElement) -> str:
    """``reduced`` when l(ab) = l(a) + l(b), ``semi_reduced`` when exactly
    one unit is lost at the junction, otherwise ``unreduced``."""
    total = a.length + b.length
    n = (a * b).length
    if n == total:
        return REDUCED
    if n == total - 1:
        return SEMI_REDUCED
    return UNREDUCED


def conjugate_search(ctx: GroupContext, y: GroupElement, z: GroupElement, Lx: int, cap: int = DEFAULT_CAP) -> GroupElement | None:
    """First ``x`` of ball(Lx), in ball order, with ``x^-1 y x = z``."""
    if y.ctx is not ctx or z.ctx is not ctx:
        raise ContextError("elements belong to a different group")
    for x in enumerate_ball(ctx, Lx, cap):
        if y * x == x * z:
            return x
    return None


def _first(g: GroupElement) -> GroupElement:
    return normal_form(g.ctx, g).pieces[0]


def _last(g: GroupElement) -> GroupElement:
    return normal_form(g.ctx, g).pieces[-1]


def _base(x, y):
    # b = x^-1, a = y x
    return (y * x, ~x, 1, -1)


def _case_i(x: GroupElement, y: GroupElement, z: GroupElement):
    """Both c.r.; induction on l(x). Returns (a, b, n, m)."""
    if x.length == 0:
        return _base(x, y)
    x1, y1, yn = _first(x), _first(y), _last(y)
    if x.length == 1:
        if (~x * y1).length == 0:
            # x = y1 gamma, b = gamma^-1 y2 ... yn
            return (x, ~x * y, 1, 0)
        if (yn * x).length == 0:
            # x = yn^-1 gamma, a = y1 ... y_{n-1} gamma
            return (y * x, ~x, 1, -1)
        raise InternalError("neither junction cancels for a length-1 conjugator")
    if (~x1 * y1).length == 0:
        return _case_i_first(x, y, z, x1)
    if (yn * x1).length == 0:
        a1, b1, alpha, beta = _case_i_first(x, ~y, ~z, x1)
        return (~b1, ~a1, alpha, -beta - 1)
    raise InternalError("neither junction cancels in the conjugacy induction")


def _case_i_first(x, y, z, x1):
    """Step where the conjugator's first piece cancels against ``y1``."""
    head = x1  # = y1 gamma^-1
    x_next = ~x1 * x
    y_next = ~x1 * y * x1
    a1, b1, alpha, beta = _case_i(x_next, y_next, z)
    if a1.length == 0 or b1.length == 0:
        C = a1 * b1
        if a1.length == 0:
            delta, s = a1, beta
        else:
            delta, s = ~b1, beta + 1
        C_prime = C * ~head
        return (head * delta, ~delta * C_prime, alpha, s)
    B_prime = b1 * ~head
    return (head * a1, B_prime, alpha, beta)


def _case_ii(x, y, z):
    """Both weakly c.r. but not c.r."""
    y1, z1 = _first(y), _first(z)
    yn, zm = _last(y), _last(z)
    y_next = ~y1 * y * y1
    z_next = ~z1 * z * z1
    x_next = ~y1 * x * z1
    a1, b1, alpha, beta = _case_i(x_next, y_next, z_next)
    if a1.length == 0 or b1.length == 0:
        C = a1 * b1
        if a1.length == 0:
            delta, s = a1, beta
        else:
            delta, s = ~b1, beta + 1
        C_prime = C * ~(yn * y1)
        gamma = yn * y1 * delta * ~z1 * ~zm
        return (y1 * C_prime * gamma * zm, z1 * ~delta * ~y1, alpha, s - 1)
    B_prime = b1 * ~(yn * y1)
    A_prime = a1 * ~(zm * z1)
    return (y1 * A_prime * zm, z1 * B_prime * yn, alpha, beta)


def _case_iii(x, y, z):
    """``y`` weakly c.r. (not c.r.) and ``z`` c.r."""
    y1, yn = _first(y), _last(y)
    y_next = ~y1 * y * y1
    x_next = ~y1 * x
    a1, b1, alpha, beta = _case_i(x_next, y_next, z)
    if a1.length == 0 or b1.length == 0:
        C = a1 * b1
        if a1.length == 0:
            delta, s = a1, beta
        else:
            delta, s = ~b1, beta + 1
        C_prime = C * ~(yn * y1)
        return (y1 * delta, ~delta * C_prime * yn, alpha, s)
    return (y1 * a1, b1 * ~y1, alpha, beta)


def conjugacy_decompose(ctx: GroupContext, x: GroupElement, y: GroupElement, z: GroupElement) -> ConjugacyDecomposition:
    """Decompose conjugate elements following the inductive construction.

    Requires ``x^-1 y x = z``, ``l(y) >= 2`` and both ``y`` and ``z``
    weakly cyclically reduced. The case label is ``i`` (both c.r.), ``ii``
    (neither c.r.), ``iii`` (``z`` c.r. only) or ``iii_mirror`` (``y`` c.r.
    only, handled by swapping the roles of ``y`` and ``z``).
    """
    for g in (x, y, z):
        if g.ctx is not ctx:
            raise ContextError("elements belong to a different group")
    if ~x * y * x != z:
        raise ContractError("x^-1 y x != z")
    if y.length < 2:
        raise ContractError("l(y) must be at least 2")
    if not is_weakly_cyclically_reduced(ctx, y):
        raise ContractError("y is neither c.r. nor w.c.r.")
    if not is_weakly_cyclically_reduced(ctx, z):
        raise ContractError("z is neither c.r. nor w.c.r.")
    y_cr = is_cyclically_reduced(ctx, y)
    z_cr = is_cyclically_reduced(ctx, z)
    if y_cr and z_cr:
        case = "i"
        a, b, n, m = _case_i(x, y, z)
    elif not y_cr and not z_cr:
        case = "ii"
        a, b, n, m = _case_ii(x, y, z)
    elif z_cr:
        case = "iii"
        a, b, n, m = _case_iii(x, y, z)
    else:
        case = "iii_mirror"
        a2, b2, n, m2 = _case_iii(~x, z, y)
        a, b, m = b2, a2, -m2 - 1
    out = ConjugacyDecomposition(a, b, n, m, product_form(a, b), product_form(b, a), case)
    if not out.verify(x, y, z):
        raise InternalError(f"decomposition failed to verify in case {case}")
    return out
