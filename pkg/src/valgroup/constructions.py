"""The four valuated groups with normal forms: free groups, free products,
amalgamated products and HNN extensions over finite vertex groups.

Every element is kept in a unique canonical form, so structural equality is
group equality:

* free group: freely reduced letters;
* free product / amalgam: ``a * r1 * ... * rn`` where ``a`` lies in the edge
  group (always the identity for a free product) and each ``ri`` is a
  nontrivial right-coset representative ``min(A ri)`` of its factor, with
  alternating factors;
* HNN extension ``<G, t | t^-1 a t = phi(a)>``: Britton form
  ``g0 t^e1 g1 ... t^en gn`` where ``gi`` for ``i >= 1`` is the smallest
  member of its right coset of ``B`` (after ``t``) or ``A`` (after ``t^-1``).

The natural length is the syllable count (free: letter count, HNN: number of
stable letters), with the edge group (resp. whole base group) at length 0.
"""

from __future__ import annotations

import enum
import string
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import CapacityError, ContextError
from .finite_algebra import FiniteGroup, Isomorphism, Subgroup, make_isomorphism, subgroup_from_generators

__all__ = [
    "Kind",
    "FreeLetter",
    "FactorElement",
    "StableLetter",
    "BaseElement",
    "GroupContext",
    "GroupElement",
    "Ball",
    "DEFAULT_CAP",
    "build_free_group",
    "build_free_product",
    "build_amalgam",
    "build_hnn",
    "canonicalize",
    "multiply",
    "invert",
    "length",
    "enumerate_ball",
]

DEFAULT_CAP = 2_000_000
FREE_LETTERS = string.ascii_lowercase
FACTOR_LETTERS = ("x", "y")


class Kind(str, enum.Enum):
    FREE = "free"
    FREE_PRODUCT = "free_product"
    AMALGAM = "amalgam"
    HNN = "hnn"


class FreeLetter(NamedTuple):
    generator: int
    sign: int


class FactorElement(NamedTuple):
    factor: int
    element: int


class StableLetter(NamedTuple):
    sign: int


class BaseElement(NamedTuple):
    element: int


class GroupElement:
    """Canonical form of an element of a GroupContext.

    ``head`` is the edge-group element (amalgam, as a factor-0 index) or
    ``g0`` (HNN); it is 0 for free groups and free products. ``syllables``
    holds ``(generator, sign)``, ``(factor, representative)`` or, for HNN,
    ``(sign, g_i)`` pairs. Use ``atoms()`` for the typed view.
    """

    __slots__ = ("ctx", "head", "syllables", "length", "_hash", "_key")

    def __init__(self, ctx: "GroupContext", head: int, syllables: tuple):
        self.ctx = ctx
        self.head = head
        self.syllables = syllables
        self.length = len(syllables)
        self._hash = hash((head, syllables))
        self._key = None

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.ctx is other.ctx and self.head == other.head and self.syllables == other.syllables

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.ctx.multiply(self, other)

    def __invert__(self) -> "GroupElement":
        return self.ctx.invert(self)

    def inverse(self) -> "GroupElement":
        return self.ctx.invert(self)

    def __pow__(self, k: int) -> "GroupElement":
        return self.ctx.power(self, k)

    def conjugate(self, x: "GroupElement") -> "GroupElement":
        """``x^-1 * self * x``."""
        return self.ctx.multiply(self.ctx.multiply(self.ctx.invert(x), self), x)

    def commutes_with(self, other: "GroupElement") -> bool:
        return self * other == other * self

    @property
    def is_identity(self) -> bool:
        return self.head == 0 and not self.syllables

    def atoms(self) -> tuple:
        return self.ctx.atoms_of(self)

    def sort_key(self) -> tuple:
        if self._key is None:
            self._key = (self.length, self.head, self.ctx._syllable_key(self.syllables))
        return self._key

    def __lt__(self, other: "GroupElement") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return self.ctx.format(self)

    def __repr__(self):
        return f"<{self.ctx.name or self.ctx.kind.value}: {self.ctx.format(self)}>"


class GroupContext:
    """One of the four constructions, with its rewriting tables.

    Build instances with the ``build_*`` functions. Elements are created via
    ``element(atoms)`` / ``canonicalize`` and multiplied with ``*``.
    """

    def __init__(self, kind: Kind, name: str = ""):
        self.kind = kind
        self.name = name
        self.rank = None
        self.factors: tuple[FiniteGroup, ...] = ()
        self.edge: tuple[Subgroup, Subgroup, Isomorphism] | None = None
        self.base: FiniteGroup | None = None
        self.assoc: tuple[Subgroup, Subgroup, Isomorphism] | None = None
        self.transversals: tuple[tuple[int, ...], ...] = ()
        self._balls: dict[int, Ball] = {}
        self._s_elements = None
        self._identity = GroupElement(self, 0, ())

    def __repr__(self):
        return f"<GroupContext {self.name or ''} {self.describe()}>"

    def describe(self) -> str:
        if self.kind is Kind.FREE:
            return f"free({self.rank})"
        if self.kind is Kind.FREE_PRODUCT:
            return f"free_product({self.factors[0]!r}, {self.factors[1]!r})"
        if self.kind is Kind.AMALGAM:
            A0, A1, _ = self.edge
            return f"amalgam({self.factors[0]!r}, {self.factors[1]!r}; {list(A0.members)}~{list(A1.members)})"
        A, B, _ = self.assoc
        return f"hnn({self.base!r}; {list(A.members)}~{list(B.members)})"

    # -- setup -------------------------------------------------------------

    def _setup_amalgam(self, G0, G1, A0, A1, iso):
        self.factors = (G0, G1)
        self.edge = (A0, A1, iso)
        self._ftable = (G0.table, G1.table)
        self._finv = (G0.inverse, G1.inverse)
        # edge elements are stored as factor-0 indices
        to1 = [0] * G0.order
        from1 = [-1] * G1.order
        for a, b in iso.map.items():
            to1[a] = b
            from1[b] = a
        self._to_factor = (list(range(G0.order)), to1)
        from0 = [a if a in A0 else -1 for a in range(G0.order)]
        from_factor = (from0, from1)
        split = []
        transversals = []
        for f, (G, A) in enumerate(((G0, A0), (G1, A1))):
            table = [None] * G.order
            reps = set()
            for g in range(G.order):
                rep = min(G.table[a][g] for a in A.members)
                c = G.table[g][G.inverse[rep]]
                table[g] = (from_factor[f][c], rep)
                reps.add(rep)
            split.append(tuple(table))
            transversals.append(tuple(sorted(reps)))
        self._split = tuple(split)
        self.transversals = tuple(transversals)

    def _setup_hnn(self, G, A, B, phi):
        self.base = G
        self.assoc = (A, B, phi)
        self._btable = G.table
        self._binv = G.inverse
        fwd = [-1] * G.order
        back = [-1] * G.order
        for a, b in phi.map.items():
            fwd[a] = b
            back[b] = a
        self._phi = fwd
        self._phi_inv = back

        def split_for(H):
            table = []
            for g in range(G.order):
                rep = min(G.table[h][g] for h in H.members)
                table.append((G.table[g][G.inverse[rep]], rep))
            return tuple(table)

        self._split_a = split_for(A)
        self._split_b = split_for(B)
        self.transversals = (
            tuple(sorted({r for _, r in self._split_a})),
            tuple(sorted({r for _, r in self._split_b})),
        )

    # -- rewriting engines ---------------------------------------------------
    # Each engine right-multiplies a mutable (head, syllables) state by one
    # atom and returns the new head.

    def _push_edge(self, syl: list, c: int) -> int:
        i = len(syl) - 1
        ftable, to_factor, split = self._ftable, self._to_factor, self._split
        while c and i >= 0:
            f, r = syl[i]
            c, r2 = split[f][ftable[f][r][to_factor[f][c]]]
            syl[i] = (f, r2)
            i -= 1
        return c

    def _mul_factor(self, head: int, syl: list, f: int, g: int) -> int:
        if g == 0:
            return head
        split = self._split[f]
        c, r = split[g]
        if r != 0 and syl and syl[-1][0] == f:
            _, last = syl.pop()
            c, r = split[self._ftable[f][last][g]]
        c = self._push_edge(syl, c)
        if c:
            head = self._ftable[0][head][c]
        if r != 0:
            syl.append((f, r))
        return head

    def _mul_base(self, head: int, syl: list, h: int) -> int:
        T = self._btable
        i = len(syl) - 1
        while h and i >= 0:
            e, g = syl[i]
            x = T[g][h]
            if e > 0:
                k, rep = self._split_b[x]
                h = self._phi_inv[k]
            else:
                k, rep = self._split_a[x]
                h = self._phi[k]
            syl[i] = (e, rep)
            i -= 1
        if h:
            head = T[head][h]
        return head

    @staticmethod
    def _mul_stable(syl: list, e: int) -> None:
        if syl and syl[-1] == (-e, 0):
            syl.pop()
        else:
            syl.append((e, 0))

    @staticmethod
    def _mul_letter(syl: list, gen: int, sign: int) -> None:
        if syl and syl[-1] == (gen, -sign):
            syl.pop()
        else:
            syl.append((gen, sign))

    def _apply(self, head: int, syl: list, atom) -> int:
        kind = self.kind
        if kind is Kind.FREE:
            if not isinstance(atom, FreeLetter):
                raise ContextError(f"{atom!r} is not an atom of a free group")
            gen, sign = atom
            if not 0 <= gen < self.rank or sign not in (1, -1):
                raise ContextError(f"{atom!r} outside free group of rank {self.rank}")
            self._mul_letter(syl, gen, sign)
            return head
        if kind is Kind.HNN:
            if isinstance(atom, StableLetter):
                if atom.sign not in (1, -1):
                    raise ContextError(f"stable letter sign must be +-1, got {atom.sign}")
                self._mul_stable(syl, atom.sign)
                return head
            if isinstance(atom, BaseElement):
                if not 0 <= atom.element < self.base.order:
                    raise ContextError(f"{atom!r} outside the base group")
                return self._mul_base(head, syl, atom.element)
            raise ContextError(f"{atom!r} is not an atom of an HNN extension")
        if not isinstance(atom, FactorElement):
            raise ContextError(f"{atom!r} is not an atom of a {kind.value}")
        f, g = atom
        if f not in (0, 1) or not 0 <= g < self.factors[f].order:
            raise ContextError(f"{atom!r} outside the factors")
        return self._mul_factor(head, syl, f, g)

    def _feed(self, head: int, syl: list, h: GroupElement) -> int:
        """Right-multiply the state by a canonical element (no type checks)."""
        kind = self.kind
        if kind is Kind.FREE:
            for gen, sign in h.syllables:
                self._mul_letter(syl, gen, sign)
        elif kind is Kind.HNN:
            head = self._mul_base(head, syl, h.head)
            for e, g in h.syllables:
                self._mul_stable(syl, e)
                if g:
                    head = self._mul_base(head, syl, g)
        else:
            if h.head:
                head = self._mul_factor(head, syl, 0, h.head)
            for f, r in h.syllables:
                head = self._mul_factor(head, syl, f, r)
        return head

    # -- public element API --------------------------------------------------

    def identity(self) -> GroupElement:
        return self._identity

    def element(self, atoms: Iterable = ()) -> GroupElement:
        head, syl = 0, []
        for atom in atoms:
            head = self._apply(head, syl, atom)
        return GroupElement(self, head, tuple(syl))

    def _check(self, g: GroupElement) -> None:
        if g.ctx is not self:
            raise ContextError("element belongs to a different group")

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        if g.ctx is not self or h.ctx is not self:
            raise ContextError("elements belong to different groups")
        if not h.syllables and not h.head:
            return g
        if not g.syllables and not g.head:
            return h
        syl = list(g.syllables)
        head = self._feed(g.head, syl, h)
        return GroupElement(self, head, tuple(syl))

    def invert(self, g: GroupElement) -> GroupElement:
        self._check(g)
        head, syl = 0, []
        kind = self.kind
        if kind is Kind.FREE:
            syl = [(gen, -sign) for gen, sign in reversed(g.syllables)]
            return GroupElement(self, 0, tuple(syl))
        if kind is Kind.HNN:
            inv = self._binv
            for e, x in reversed(g.syllables):
                if x:
                    head = self._mul_base(head, syl, inv[x])
                self._mul_stable(syl, -e)
            head = self._mul_base(head, syl, inv[g.head])
        else:
            for f, r in reversed(g.syllables):
                head = self._mul_factor(head, syl, f, self._finv[f][r])
            if g.head:
                head = self._mul_factor(head, syl, 0, self._finv[0][g.head])
        return GroupElement(self, head, tuple(syl))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            g, k = self.invert(g), -k
        result, base = self._identity, g
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def length(self, g: GroupElement) -> int:
        self._check(g)
        return g.length

    def atoms_of(self, g: GroupElement) -> tuple:
        kind = self.kind
        if kind is Kind.FREE:
            return tuple(FreeLetter(gen, sign) for gen, sign in g.syllables)
        if kind is Kind.HNN:
            out = [BaseElement(g.head)] if g.head else []
            for e, x in g.syllables:
                out.append(StableLetter(e))
                if x:
                    out.append(BaseElement(x))
            return tuple(out)
        out = [FactorElement(0, g.head)] if g.head else []
        out.extend(FactorElement(f, r) for f, r in g.syllables)
        return tuple(out)

    def _syllable_key(self, syllables: tuple) -> tuple:
        if self.kind is Kind.FREE:
            return tuple((gen, sign < 0) for gen, sign in syllables)
        if self.kind is Kind.HNN:
            return tuple((e < 0, x) for e, x in syllables)
        return syllables

    def in_b(self, g: GroupElement) -> bool:
        return g.length == 0

    def b_elements(self) -> list[GroupElement]:
        """The zero-length subgroup B, sorted."""
        if self.kind is Kind.AMALGAM:
            return [GroupElement(self, a, ()) for a in self.edge[0].members]
        if self.kind is Kind.HNN:
            return [GroupElement(self, g, ()) for g in range(self.base.order)]
        return [self._identity]

    def s_elements(self) -> list[GroupElement]:
        """S = {g : length(g) <= 1}, sorted."""
        if self._s_elements is None:
            found = set(self.b_elements())
            if self.kind is Kind.FREE:
                for gen in range(self.rank):
                    for sign in (1, -1):
                        found.add(self.element([FreeLetter(gen, sign)]))
            elif self.kind is Kind.HNN:
                n = self.base.order
                for b1 in range(n):
                    for e in (1, -1):
                        for b2 in range(n):
                            found.add(self.element([BaseElement(b1), StableLetter(e), BaseElement(b2)]))
            else:
                for f, G in enumerate(self.factors):
                    for g in range(G.order):
                        found.add(self.element([FactorElement(f, g)]))
            self._s_elements = sorted(found)
        return list(self._s_elements)

    # -- display -------------------------------------------------------------

    def format(self, g: GroupElement) -> str:
        """Word literal for ``g``; parses back to the same element."""
        kind = self.kind
        tokens = []
        if kind is Kind.FREE:
            for gen, sign in g.syllables:
                name = FREE_LETTERS[gen] if gen < len(FREE_LETTERS) else f"g{gen}"
                tokens.append(name if sign > 0 else name + "^-1")
        elif kind is Kind.HNN:
            if g.head:
                tokens.append(_indexed("u", g.head))
            for e, x in g.syllables:
                tokens.append("t" if e > 0 else "t^-1")
                if x:
                    tokens.append(_indexed("u", x))
        else:
            if g.head:
                tokens.append(_indexed(FACTOR_LETTERS[0], g.head))
            for f, r in g.syllables:
                tokens.append(_indexed(FACTOR_LETTERS[f], r))
        return " ".join(tokens) if tokens else "1"


def _indexed(letter: str, index: int) -> str:
    return letter if index == 1 else f"{letter}{index}"


# -- builders -----------------------------------------------------------------


def build_free_group(rank: int, name: str = "") -> GroupContext:
    if rank < 1:
        raise ContextError(f"free group rank must be positive, got {rank}")
    ctx = GroupContext(Kind.FREE, name)
    ctx.rank = rank
    return ctx


def build_free_product(G1: FiniteGroup, G2: FiniteGroup, name: str = "") -> GroupContext:
    ctx = GroupContext(Kind.FREE_PRODUCT, name)
    A0 = subgroup_from_generators(G1, [])
    A1 = subgroup_from_generators(G2, [])
    ctx._setup_amalgam(G1, G2, A0, A1, make_isomorphism(A0, A1, []))
    return ctx


def build_amalgam(G1: FiniteGroup, G2: FiniteGroup, A1: Subgroup, A2: Subgroup, iso: Isomorphism, name: str = "") -> GroupContext:
    if A1.parent is not G1 or A2.parent is not G2:
        raise ContextError("edge subgroups must lie in the respective factors")
    if iso.source != A1 or iso.target != A2:
        raise ContextError("isomorphism must map the first edge subgroup onto the second")
    iso = make_isomorphism(A1, A2, iso.map, iso.name)
    ctx = GroupContext(Kind.AMALGAM, name)
    ctx._setup_amalgam(G1, G2, A1, A2, iso)
    return ctx


def build_hnn(G: FiniteGroup, A: Subgroup, B: Subgroup, phi: Isomorphism, name: str = "") -> GroupContext:
    """HNN extension with relations ``t^-1 a t = phi(a)`` for ``a`` in ``A``."""
    if A.parent is not G or B.parent is not G:
        raise ContextError("associated subgroups must lie in the base group")
    if phi.source != A or phi.target != B:
        raise ContextError("phi must map A onto B")
    phi = make_isomorphism(A, B, phi.map, phi.name)
    ctx = GroupContext(Kind.HNN, name)
    ctx._setup_hnn(G, A, B, phi)
    return ctx


# -- functional surface ---------------------------------------------------------


def canonicalize(ctx: GroupContext, raw: Iterable) -> GroupElement:
    """Canonical form of the product of ``raw``; atoms or elements allowed."""
    head, syl = 0, []
    for item in raw:
        if isinstance(item, GroupElement):
            ctx._check(item)
            for atom in item.atoms():
                head = ctx._apply(head, syl, atom)
        else:
            head = ctx._apply(head, syl, item)
    return GroupElement(ctx, head, tuple(syl))


def multiply(ctx: GroupContext, g: GroupElement, h: GroupElement) -> GroupElement:
    return ctx.multiply(g, h)


def invert(ctx: GroupContext, g: GroupElement) -> GroupElement:
    return ctx.invert(g)


def length(ctx: GroupContext, g: GroupElement) -> int:
    return ctx.length(g)


# -- balls ----------------------------------------------------------------------


@dataclass(eq=False)
class Ball:
    """All elements of length at most ``radius``, sorted by (length, form).

    ``depth[g]`` is the number of S-factors the breadth-first closure needed
    to reach ``g`` and ``parent[g] = (predecessor, s)`` records the step, so
    ``predecessor * s == g``; elements of B have depth 0 and no parent.
    """

    context: GroupContext
    radius: int
    elements: tuple[GroupElement, ...]
    depth: dict
    parent: dict
    index: dict = field(init=False, repr=False)
    _pair_lengths: np.ndarray | None = field(default=None, init=False, repr=False)
    _inverse_index: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.index = {g: i for i, g in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.index

    def of_length(self, n: int) -> list[GroupElement]:
        return [g for g in self.elements if g.length == n]

    def restrict(self, radius: int) -> list[GroupElement]:
        return [g for g in self.elements if g.length <= radius]

    def lengths(self) -> np.ndarray:
        return np.fromiter((g.length for g in self.elements), dtype=np.int64, count=len(self.elements))

    def inverse_index(self) -> np.ndarray:
        if self._inverse_index is None:
            self._inverse_index = np.array([self.index[~g] for g in self.elements], dtype=np.int64)
        return self._inverse_index

    def pair_lengths(self) -> np.ndarray:
        """Matrix of ``length(x_i * x_j^-1)`` over all ball pairs."""
        if self._pair_lengths is None:
            n = len(self.elements)
            inverses = [~g for g in self.elements]
            mul = self.context.multiply
            out = np.empty((n, n), dtype=np.int64)
            for i, x in enumerate(self.elements):
                out[i] = [mul(x, yi).length for yi in inverses]
            self._pair_lengths = out
        return self._pair_lengths

    def factorization(self, g: GroupElement) -> list[GroupElement]:
        """S-factors ``[b, s1, ..., sk]`` along the BFS provenance of ``g``."""
        chain = []
        while self.parent.get(g) is not None:
            g, s = self.parent[g]
            chain.append(s)
        chain.append(g)
        return chain[::-1]


def enumerate_ball(ctx: GroupContext, L: int, cap: int = DEFAULT_CAP) -> Ball:
    """Breadth-first closure of B under right multiplication by S, cut at
    length ``L``. Raises CapacityError instead of truncating."""
    if L < 0:
        raise ValueError("radius must be nonnegative")
    cached = ctx._balls.get(L)
    if cached is not None:
        if len(cached) > cap:
            raise CapacityError(cap)
        return cached
    S = ctx.s_elements()
    frontier = ctx.b_elements()
    if len(frontier) > cap:
        raise CapacityError(cap)
    depth = {b: 0 for b in frontier}
    parent = {b: None for b in frontier}
    level = 0
    mul = ctx.multiply
    while frontier:
        level += 1
        nxt = []
        for g in frontier:
            for s in S:
                h = mul(g, s)
                if h.length <= L and h not in depth:
                    depth[h] = level
                    parent[h] = (g, s)
                    nxt.append(h)
                    if len(depth) > cap:
                        raise CapacityError(cap)
        frontier = sorted(nxt)
    ball = Ball(ctx, L, tuple(sorted(depth)), depth, parent)
    ctx._balls[L] = ball
    return ball
