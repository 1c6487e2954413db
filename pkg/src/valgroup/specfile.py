"""Text formats: group specification files and word literals.

Specification grammar (one statement per line, ``#`` starts a comment, a
statement may continue over lines while brackets are open)::

    group <name> = cyclic(<n>)
    group <name> = table([[...], ...])
    subgroup <name> = <group>.generated(<i>, ...)
    iso <name> = <subgroup> -> <subgroup> { <i> -> <j>, ... }
    valuated <name> = free(<rank>)
                    | free_product(<group>, <group>)
                    | amalgam(<group>, <group>; <subgroup>~<subgroup> via <iso>)
                    | hnn(<group>; <subgroup>~<subgroup> via <iso>)

Word grammar: atoms separated by optional whitespace, each an optional
power ``^k`` (``k`` a signed integer) applied to

* free groups: ``a`` .. ``z`` (generators 0..25) or ``g<i>``;
* free products and amalgams: ``x<i>`` / ``y<i>`` for element ``i`` of the
  first / second factor (``x`` alone means ``x1``);
* HNN extensions: ``u<i>`` for base element ``i`` (``u`` means ``u1``) and
  ``t`` for the stable letter;

and ``1`` for the identity. The empty word is the identity too.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field

from .constructions import (
    BaseElement,
    FactorElement,
    FreeLetter,
    GroupContext,
    GroupElement,
    Kind,
    StableLetter,
    build_amalgam,
    build_free_group,
    build_free_product,
    build_hnn,
    FREE_LETTERS,
)
from .errors import SpecError, ValgroupError, WordError
from .finite_algebra import FiniteGroup, Isomorphism, Subgroup, make_cyclic_group, make_isomorphism, subgroup_from_generators, validate_table

__all__ = ["SpecFile", "parse_spec", "parse_word", "format_word", "parse_word_list"]

_NAME = r"[A-Za-z_][A-Za-z0-9_']*"


@dataclass
class SpecFile:
    groups: dict[str, FiniteGroup] = field(default_factory=dict)
    subgroups: dict[str, Subgroup] = field(default_factory=dict)
    isos: dict[str, Isomorphism] = field(default_factory=dict)
    valuated: dict[str, GroupContext] = field(default_factory=dict)

    def context(self, name: str | None = None) -> GroupContext:
        """The named valuated group, or the first one declared."""
        if name is None:
            return next(iter(self.valuated.values()))
        try:
            return self.valuated[name]
        except KeyError:
            raise SpecError(f"no valuated group named {name!r}") from None


def _statements(text: str):
    """Yield ``(line, column, statement)`` with comments stripped."""
    buf, start, depth = [], None, 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip() and not buf:
            continue
        if not buf:
            start = (lineno, len(line) - len(line.lstrip()) + 1)
        buf.append(line)
        depth += sum(line.count(c) for c in "([{") - sum(line.count(c) for c in ")]}")
        if depth <= 0:
            stmt = " ".join(buf).strip()
            if stmt:
                yield start[0], start[1], stmt
            buf, depth = [], 0
    if buf:
        raise SpecError("unbalanced brackets at end of file", start[0], start[1])


class _Parser:
    def __init__(self):
        self.spec = SpecFile()
        self.declared: set[str] = set()

    def fail(self, msg, line, col):
        raise SpecError(msg, line, col)

    def lookup(self, table: dict, kind: str, name: str, line: int, stmt: str, col0: int):
        if name not in table:
            col = col0 + stmt.find(name)
            if name in self.declared:
                self.fail(f"{name!r} is not a {kind}", line, col)
            self.fail(f"undeclared {kind} {name!r}", line, col)
        return table[name]

    def declare(self, name, line, col):
        if name in self.declared:
            self.fail(f"{name!r} declared twice", line, col)
        self.declared.add(name)

    def statement(self, line: int, col: int, stmt: str):
        m = re.fullmatch(rf"(group|subgroup|iso|valuated)\s+({_NAME})\s*=\s*(.+)", stmt, re.S)
        if not m:
            self.fail(f"cannot parse statement {stmt!r}", line, col)
        keyword, name, body = m.group(1), m.group(2), m.group(3).strip()
        body_col = col + m.start(3)
        try:
            getattr(self, "_" + keyword)(name, body, line, body_col, stmt, col)
        except SpecError:
            raise
        except (ValgroupError, IndexError, ValueError) as exc:
            self.fail(f"{keyword} {name}: {exc}", line, body_col)
        self.declare(name, line, col + m.start(2))

    def _group(self, name, body, line, col, stmt, col0):
        m = re.fullmatch(r"cyclic\(\s*(-?\d+)\s*\)", body)
        if m:
            self.spec.groups[name] = make_cyclic_group(int(m.group(1)), name)
            return
        m = re.fullmatch(r"table\(\s*(.*)\s*\)", body, re.S)
        if m:
            try:
                rows = ast.literal_eval(m.group(1))
            except (ValueError, SyntaxError):
                self.fail("table must be a nested list of integers", line, col)
            if not isinstance(rows, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in rows):
                self.fail("table must be a nested list of integers", line, col)
            if not all(isinstance(v, int) for r in rows for v in r):
                self.fail("table entries must be integers", line, col)
            self.spec.groups[name] = validate_table(rows, name=name)
            return
        self.fail(f"unknown group constructor {body!r}", line, col)

    def _subgroup(self, name, body, line, col, stmt, col0):
        m = re.fullmatch(rf"({_NAME})\s*\.\s*generated\(\s*([-\d,\s]*)\)", body)
        if not m:
            self.fail(f"expected <group>.generated(...), got {body!r}", line, col)
        G = self.lookup(self.spec.groups, "group", m.group(1), line, stmt, col0)
        gens = [int(v) for v in m.group(2).replace(",", " ").split()]
        self.spec.subgroups[name] = subgroup_from_generators(G, gens, name)

    def _iso(self, name, body, line, col, stmt, col0):
        m = re.fullmatch(rf"({_NAME})\s*->\s*({_NAME})\s*\{{(.*)\}}", body, re.S)
        if not m:
            self.fail(f"expected <sub> -> <sub> {{ ... }}, got {body!r}", line, col)
        src = self.lookup(self.spec.subgroups, "subgroup", m.group(1), line, stmt, col0)
        dst = self.lookup(self.spec.subgroups, "subgroup", m.group(2), line, stmt, col0)
        pairs = []
        for item in filter(None, (p.strip() for p in m.group(3).split(","))):
            pm = re.fullmatch(r"(-?\d+)\s*->\s*(-?\d+)", item)
            if not pm:
                self.fail(f"bad image {item!r}, expected <i> -> <j>", line, col + body.find(item))
            pairs.append((int(pm.group(1)), int(pm.group(2))))
        self.spec.isos[name] = make_isomorphism(src, dst, pairs, name)

    def _valuated(self, name, body, line, col, stmt, col0):
        groups, subs, isos = self.spec.groups, self.spec.subgroups, self.spec.isos
        m = re.fullmatch(r"free\(\s*(\d+)\s*\)", body)
        if m:
            ctx = build_free_group(int(m.group(1)), name)
        elif m := re.fullmatch(rf"free_product\(\s*({_NAME})\s*,\s*({_NAME})\s*\)", body):
            G1 = self.lookup(groups, "group", m.group(1), line, stmt, col0)
            G2 = self.lookup(groups, "group", m.group(2), line, stmt, col0)
            ctx = build_free_product(G1, G2, name)
        elif m := re.fullmatch(
            rf"amalgam\(\s*({_NAME})\s*,\s*({_NAME})\s*;\s*({_NAME})\s*~\s*({_NAME})\s+via\s+({_NAME})\s*\)", body
        ):
            G1 = self.lookup(groups, "group", m.group(1), line, stmt, col0)
            G2 = self.lookup(groups, "group", m.group(2), line, stmt, col0)
            A1 = self.lookup(subs, "subgroup", m.group(3), line, stmt, col0)
            A2 = self.lookup(subs, "subgroup", m.group(4), line, stmt, col0)
            iso = self.lookup(isos, "iso", m.group(5), line, stmt, col0)
            ctx = build_amalgam(G1, G2, A1, A2, iso, name)
        elif m := re.fullmatch(rf"hnn\(\s*({_NAME})\s*;\s*({_NAME})\s*~\s*({_NAME})\s+via\s+({_NAME})\s*\)", body):
            G = self.lookup(groups, "group", m.group(1), line, stmt, col0)
            A = self.lookup(subs, "subgroup", m.group(2), line, stmt, col0)
            B = self.lookup(subs, "subgroup", m.group(3), line, stmt, col0)
            phi = self.lookup(isos, "iso", m.group(4), line, stmt, col0)
            ctx = build_hnn(G, A, B, phi, name)
        else:
            self.fail(f"unknown construction {body!r}", line, col)
        self.spec.valuated[name] = ctx


def parse_spec(text: str) -> SpecFile:
    """Parse and validate a specification; errors carry line and column."""
    parser = _Parser()
    for line, col, stmt in _statements(text):
        parser.statement(line, col, stmt)
    if not parser.spec.valuated:
        raise SpecError("no valuated group declared")
    return parser.spec


# -- words --------------------------------------------------------------------------

_ATOM = re.compile(r"\s*(?:(?P<one>1)(?![0-9])|(?P<letter>[a-z])(?P<index>\d*))(?:\^(?P<exp>[+-]?\d+))?")


def parse_word(ctx: GroupContext, text: str) -> GroupElement:
    text = text.strip()
    pos = 0
    out = ctx.identity()
    while pos < len(text):
        if text[pos] in " \t*.":
            pos += 1
            continue
        m = _ATOM.match(text, pos)
        if not m or m.end() == pos:
            raise WordError(f"unexpected character {text[pos]!r}", pos)
        exp = int(m.group("exp")) if m.group("exp") is not None else 1
        if m.group("one"):
            atom_el = ctx.identity()
        else:
            atom_el = _atom(ctx, m.group("letter"), m.group("index"), pos)
        out = out * atom_el ** exp
        pos = m.end()
    return out


def _atom(ctx: GroupContext, letter: str, index: str, pos: int) -> GroupElement:
    kind = ctx.kind
    if kind is Kind.FREE:
        if letter == "g" and index:
            gen = int(index)
        elif not index:
            gen = FREE_LETTERS.index(letter)
        else:
            raise WordError(f"unknown atom {letter + index!r} for a free group", pos)
        if gen >= ctx.rank:
            raise WordError(f"generator {letter + index!r} outside rank {ctx.rank}", pos)
        return ctx.element([FreeLetter(gen, 1)])
    i = int(index) if index else 1
    if kind is Kind.HNN:
        if letter == "t" and not index:
            return ctx.element([StableLetter(1)])
        if letter == "u":
            if i >= ctx.base.order:
                raise WordError(f"base element index {i} out of range for order {ctx.base.order}", pos)
            return ctx.element([BaseElement(i)])
        raise WordError(f"unknown atom {letter + index!r} for an HNN extension (use u<i>, t)", pos)
    if letter in ("x", "y"):
        f = 0 if letter == "x" else 1
        order = ctx.factors[f].order
        if i >= order:
            raise WordError(f"element index {i} out of range for a factor of order {order}", pos)
        return ctx.element([FactorElement(f, i)])
    raise WordError(f"unknown atom {letter + index!r} (use x<i>, y<i>)", pos)


def format_word(ctx: GroupContext, g: GroupElement) -> str:
    return ctx.format(g)


def parse_word_list(ctx: GroupContext, text: str) -> list[GroupElement]:
    """Semicolon-separated words."""
    return [parse_word(ctx, part) for part in text.split(";") if part.strip()]
