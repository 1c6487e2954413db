"""Finite groups given by multiplication tables, their subgroups and
isomorphisms between subgroups.

Elements are plain indices ``0..order-1`` and the identity is always ``0``.
Everything is validated eagerly and immutable afterwards.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    AssociativityError,
    ClosureError,
    InvalidOrderError,
    IsoValidationError,
    NeutralElementError,
)

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "Isomorphism",
    "make_cyclic_group",
    "validate_table",
    "subgroup_from_generators",
    "make_isomorphism",
]


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    table: tuple[tuple[int, ...], ...]
    inverse: tuple[int, ...]
    element_names: tuple[str, ...]
    name: str = ""

    identity = 0

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def power(self, i: int, k: int) -> int:
        if k < 0:
            i, k = self.inverse[i], -k
        result = 0
        for _ in range(k % self.element_order(i)):
            result = self.table[result][i]
        return result

    def element_order(self, i: int) -> int:
        n, x = 1, i
        while x != 0:
            x = self.table[x][i]
            n += 1
        return n

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self):
        label = self.name or "FiniteGroup"
        return f"<{label} of order {self.order}>"


def validate_table(table: Sequence[Sequence[int]], element_names: Sequence[str] | None = None, name: str = "") -> FiniteGroup:
    """Check every group axiom on ``table`` exhaustively and wrap it.

    Raises ClosureError for a row or column that is not a permutation,
    NeutralElementError when index 0 is not the identity, and
    AssociativityError carrying the first failing triple.
    """
    n = len(table)
    if n == 0:
        raise InvalidOrderError("a group needs at least one element")
    rows = tuple(tuple(int(v) for v in row) for row in table)
    full = set(range(n))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ClosureError(f"row {i} has {len(row)} entries, expected {n}")
        if any(v < 0 or v >= n for v in row):
            raise ClosureError(f"row {i} has an entry outside 0..{n - 1}")
        if set(row) != full:
            raise ClosureError(f"row {i} is not a permutation")
    for j in range(n):
        if {rows[i][j] for i in range(n)} != full:
            raise ClosureError(f"column {j} is not a permutation")
    if rows[0] != tuple(range(n)) or tuple(rows[i][0] for i in range(n)) != tuple(range(n)):
        raise NeutralElementError("index 0 must be the identity element")
    for i in range(n):
        ri = rows[i]
        for j in range(n):
            rij = rows[ri[j]]
            rj = rows[j]
            for k in range(n):
                if rij[k] != ri[rj[k]]:
                    raise AssociativityError((i, j, k))
    inverse = tuple(rows[i].index(0) for i in range(n))
    if element_names is None:
        element_names = ["e"] + [f"g{i}" for i in range(1, n)]
    if len(element_names) != n:
        raise ClosureError(f"{len(element_names)} names given for {n} elements")
    return FiniteGroup(n, rows, inverse, tuple(element_names), name)


def make_cyclic_group(n: int, name: str = "") -> FiniteGroup:
    if n < 1:
        raise InvalidOrderError(f"cyclic group order must be positive, got {n}")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    names = [f"g^{i}" for i in range(n)]
    return validate_table(table, names, name or f"C{n}")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: tuple[int, ...]
    name: str = ""
    _member_set: frozenset = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_member_set", frozenset(self.members))

    def __contains__(self, i: int) -> bool:
        return i in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self):
        return hash((id(self.parent), self.members))


def subgroup_from_generators(G: FiniteGroup, gens: Iterable[int], name: str = "") -> Subgroup:
    gens = sorted(set(gens))
    for g in gens:
        if not 0 <= g < G.order:
            raise IndexError(f"element index {g} out of range for {G!r}")
    members = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.table[x][g]
                if y not in members:
                    members.add(y)
                    nxt.append(y)
        frontier = nxt
    # In a finite group closure under products already gives inverses.
    return Subgroup(G, tuple(sorted(members)), name)


@dataclass(frozen=True, eq=False)
class Isomorphism:
    source: Subgroup
    target: Subgroup
    map: Mapping[int, int]
    name: str = ""

    def __call__(self, i: int) -> int:
        return self.map[i]

    def inverse(self) -> "Isomorphism":
        return Isomorphism(self.target, self.source, {v: k for k, v in self.map.items()}, self.name + "^-1")

    def compose(self, other: "Isomorphism") -> "Isomorphism":
        """``self`` after ``other``."""
        if other.target != self.source:
            raise IsoValidationError("composition domains do not match")
        return Isomorphism(other.source, self.target, {k: self.map[v] for k, v in other.map.items()})


def make_isomorphism(src: Subgroup, dst: Subgroup, gen_images: Iterable[tuple[int, int]] | Mapping[int, int], name: str = "") -> Isomorphism:
    """Extend generator images to a full map and validate it.

    The extension walks words in the generators; a clash while extending,
    an unreached source member, a non-injective or non-surjective map and any
    failed product each raise IsoValidationError with a witness.
    """
    if isinstance(gen_images, Mapping):
        gen_images = list(gen_images.items())
    gen_images = list(gen_images)
    G, H = src.parent, dst.parent
    for s, t in gen_images:
        if s not in src:
            raise IsoValidationError(f"{s} is not a member of the source subgroup", (s, t))
        if t not in dst:
            raise IsoValidationError(f"{t} is not a member of the target subgroup", (s, t))
    images = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for s, t in gen_images:
            y, fy = G.table[x][s], H.table[images[x]][t]
            if y in images:
                if images[y] != fy:
                    raise IsoValidationError(f"generator images do not extend: {y} would map to {images[y]} and {fy}", (x, s))
            else:
                images[y] = fy
                queue.append(y)
    missing = [m for m in src.members if m not in images]
    if missing:
        raise IsoValidationError(f"generators do not reach source member {missing[0]}", (missing[0], None))
    seen: dict[int, int] = {}
    for x in src.members:
        fx = images[x]
        if fx in seen:
            raise IsoValidationError(f"not injective: {seen[fx]} and {x} both map to {fx}", (seen[fx], x))
        seen[fx] = x
    if set(seen) != set(dst.members):
        raise IsoValidationError("not surjective onto the target subgroup")
    for x in src.members:
        for y in src.members:
            if images[G.table[x][y]] != H.table[images[x]][images[y]]:
                raise IsoValidationError(f"not a homomorphism on ({x}, {y})", (x, y))
    return Isomorphism(src, dst, dict(sorted(images.items())), name)
