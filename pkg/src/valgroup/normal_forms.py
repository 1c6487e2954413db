"""S-reduced factorizations, concatenation of normal forms and cyclic
reduction.

An S-reduced sequence has pieces of length at most 1 whose neighbouring
products all have length 2; its length equals the length of its product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .constructions import GroupContext, GroupElement, Kind, StableLetter
from .errors import ContextError, DegenerateInputError

__all__ = [
    "SReducedForm",
    "ConcatResult",
    "CyclicReduction",
    "FULL_JUNCTION",
    "MERGED_JUNCTION",
    "CANCELLATION",
    "s_reduced_decomposition",
    "normal_form",
    "concat_normal_forms",
    "is_cyclically_reduced",
    "is_weakly_cyclically_reduced",
    "cyclic_reduce",
    "s_reduced_sequences",
]

FULL_JUNCTION = "full_junction"
MERGED_JUNCTION = "merged_junction"
CANCELLATION = "cancellation"


@dataclass(frozen=True)
class SReducedForm:
    """Pieces multiplying to ``element``. Zero-length elements have no
    pieces (their normal form is the element itself)."""

    element: GroupElement
    pieces: tuple[GroupElement, ...]
    junction_lengths: tuple[int, ...]

    def __len__(self):
        return len(self.pieces)

    def product(self) -> GroupElement:
        out = self.element.ctx.identity()
        for p in self.pieces:
            out = out * p
        return out if self.pieces else self.element

    def is_s_reduced(self) -> bool:
        if not self.pieces:
            return self.element.length == 0
        return (
            all(p.length == 1 for p in self.pieces)
            and all(j == 2 for j in self.junction_lengths)
            and self.product() == self.element
        )


@dataclass(frozen=True)
class ConcatResult:
    case: str
    result: SReducedForm
    trace: tuple[tuple[str, int], ...] = field(default=())


@dataclass(frozen=True)
class CyclicReduction:
    conjugator: GroupElement
    core: GroupElement
    original: GroupElement

    def verify(self) -> bool:
        y, x, g = self.conjugator, self.core, self.original
        return ~y * x * y == g


def _form(ctx: GroupContext, element: GroupElement, pieces: list[GroupElement]) -> SReducedForm:
    junctions = tuple((u * v).length for u, v in zip(pieces, pieces[1:]))
    return SReducedForm(element, tuple(pieces), junctions)


def _pieces(ctx: GroupContext, g: GroupElement) -> list[GroupElement]:
    atoms = g.atoms()
    if ctx.kind is Kind.FREE:
        return [ctx.element([a]) for a in atoms]
    if ctx.kind is Kind.HNN:
        # g0 t^e1 | g1 t^e2 | ... | g_{n-1} t^en gn
        pieces, pending = [], []
        for atom in atoms:
            pending.append(atom)
            if isinstance(atom, StableLetter):
                pieces.append(pending)
                pending = []
        pieces[-1].extend(pending)
        return [ctx.element(p) for p in pieces]
    # free product / amalgam: the edge part joins the first syllable
    syllable_atoms = atoms[1:] if g.head else atoms
    pieces = [ctx.element([a]) for a in syllable_atoms]
    if g.head:
        pieces[0] = ctx.element([atoms[0]]) * pieces[0]
    return pieces


def s_reduced_decomposition(ctx: GroupContext, g: GroupElement) -> SReducedForm:
    """The S-reduced factorization read off the canonical form.

    Raises DegenerateInputError for zero-length ``g``; ``normal_form``
    returns the trivial form instead.
    """
    if g.ctx is not ctx:
        raise ContextError("element belongs to a different group")
    if g.length == 0:
        raise DegenerateInputError(g)
    return _form(ctx, g, _pieces(ctx, g))


def normal_form(ctx: GroupContext, g: GroupElement) -> SReducedForm:
    if g.length == 0:
        return SReducedForm(g, (), ())
    return s_reduced_decomposition(ctx, g)


def concat_normal_forms(ctx: GroupContext, x, y) -> ConcatResult:
    """Normal form of ``x*y`` from normal forms of ``x`` and ``y``.

    Junction length 2 concatenates, 1 merges the two junction pieces, and 0
    cancels them into a zero-length element that is pushed into the next
    junction before recursing. The reported case is the first junction's;
    the trace lists every junction visited. A zero-length operand is
    absorbed into the neighbouring piece and reported as a merge.
    """
    if isinstance(x, GroupElement):
        x = normal_form(ctx, x)
    if isinstance(y, GroupElement):
        y = normal_form(ctx, y)
    s, t = list(x.pieces), list(y.pieces)
    left_b = x.element if not s else None
    right_b = y.element if not t else None
    trace: list[tuple[str, int]] = []
    target = x.element * y.element
    if left_b is not None or right_b is not None:
        if s and right_b is not None:
            s[-1] = s[-1] * right_b
            pieces = s
        elif t and left_b is not None:
            t[0] = left_b * t[0]
            pieces = t
        else:
            pieces = []
        trace.append((MERGED_JUNCTION, 1))
        return ConcatResult(MERGED_JUNCTION, _finish(ctx, target, pieces), tuple(trace))
    while True:
        j = (s[-1] * t[0]).length
        if j == 2:
            trace.append((FULL_JUNCTION, 2))
            pieces = s + t
            break
        if j == 1:
            trace.append((MERGED_JUNCTION, 1))
            pieces = s[:-1] + [s[-1] * t[0]] + t[1:]
            break
        trace.append((CANCELLATION, 0))
        h = s.pop() * t.pop(0)
        if t:
            t[0] = h * t[0]
        elif s:
            s[-1] = s[-1] * h
        if not s or not t:
            pieces = s + t
            break
    return ConcatResult(trace[0][0], _finish(ctx, target, pieces), tuple(trace))


def _finish(ctx, target, pieces) -> SReducedForm:
    if target.length == 0:
        return SReducedForm(target, (), ())
    return _form(ctx, target, pieces)


def is_cyclically_reduced(ctx: GroupContext, g: GroupElement) -> bool:
    if g.length <= 1:
        return True
    return (g * g).length == 2 * g.length


def is_weakly_cyclically_reduced(ctx: GroupContext, g: GroupElement) -> bool:
    if g.length <= 1:
        return True
    return (g * g).length >= 2 * g.length - 1


def cyclic_reduce(ctx: GroupContext, g: GroupElement) -> CyclicReduction:
    """``(y, x)`` with ``g = y^-1 x y`` and ``x`` cyclically reduced.

    Follows the induction on the normal form ``s1 ... sn``: a merged
    junction ``l(sn s1) = 1`` ends with one conjugation by ``sn``; a
    cancellation ``l(sn s1) = 0`` conjugates by ``sn`` and continues on the
    shorter element.
    """
    if g.ctx is not ctx:
        raise ContextError("element belongs to a different group")
    conj, core = ctx.identity(), g
    while core.length >= 2:
        pieces = _pieces(ctx, core)
        sn, s1 = pieces[-1], pieces[0]
        j = (sn * s1).length
        if j == 2:
            break
        core = sn * core * ~sn
        conj = sn * conj
        if j == 1:
            break
    return CyclicReduction(conj, core, g)


def s_reduced_sequences(ctx: GroupContext, max_len: int) -> Iterator[tuple[GroupElement, ...]]:
    """Every S-reduced sequence of length-1 pieces with at most ``max_len``
    pieces, by brute force over S (independent of the canonical forms)."""
    letters = [s for s in ctx.s_elements() if s.length == 1]
    follow = {s: [t for t in letters if (s * t).length == 2] for s in letters}

    def extend(seq):
        yield seq
        if len(seq) < max_len:
            for t in follow[seq[-1]]:
                yield from extend(seq + (t,))

    if max_len < 1:
        return
    for s in letters:
        yield from extend((s,))
