import random

import pytest
from hypothesis import given, settings, strategies as st

from valgroup.constructions import (
    BaseElement,
    FactorElement,
    FreeLetter,
    Kind,
    StableLetter,
    build_free_group,
    canonicalize,
    enumerate_ball,
    invert,
    length,
    multiply,
)
from valgroup.errors import CapacityError, ContextError
from valgroup.specfile import parse_word

from .conftest import context


# -- independent oracles -----------------------------------------------------------


def free_reduce(letters):
    """Stack-based free reduction of (generator, sign) pairs."""
    out = []
    for g, e in letters:
        if out and out[-1] == (g, -e):
            out.pop()
        else:
            out.append((g, e))
    return out


def free_product_reduce(atoms, orders):
    """Stack reduction in a free product of cyclic groups; atoms are
    (factor, exponent) with exponents taken mod the factor order."""
    out = []
    for f, k in atoms:
        k %= orders[f]
        if k == 0:
            continue
        if out and out[-1][0] == f:
            k = (out[-1][1] + k) % orders[f]
            out.pop()
            if k:
                out.append((f, k))
        else:
            out.append((f, k))
    return out


def perm_mul(p, q):
    # apply p first, then q
    return tuple(q[i] for i in p)


def perm_inv(p):
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def perm_pow(p, k):
    out = tuple(range(len(p)))
    base = p if k >= 0 else perm_inv(p)
    for _ in range(abs(k)):
        out = perm_mul(out, base)
    return out


# permutation images of the generating atoms, chosen to satisfy each group's relations
TRANSPOSITION = (1, 0, 2)
THREE_CYCLE = (1, 2, 0)
ROTATION = (1, 2, 3, 0)
REFLECTION = (0, 3, 2, 1)


def image_P(g):
    out = (0, 1, 2)
    for a in g.atoms():
        out = perm_mul(out, perm_pow(TRANSPOSITION if a.factor == 0 else THREE_CYCLE, a.element))
    return out


def image_H2(g):
    # u -> rotation, t -> reflection: reflection^-1 rotation reflection = rotation^-1
    out = tuple(range(4))
    for a in g.atoms():
        if isinstance(a, StableLetter):
            out = perm_mul(out, perm_pow(REFLECTION, a.sign))
        else:
            out = perm_mul(out, perm_pow(ROTATION, a.element))
    return out


def image_H(g):
    # u -> 1 in C4, t -> 1 in Z; the relation t^-1 u^2 t = u^2 holds in C4 x Z
    u, t = 0, 0
    for a in g.atoms():
        if isinstance(a, StableLetter):
            t += a.sign
        else:
            u += a.element
    return u % 4, t


def image_M(g):
    # C4 -> C12 by 1 -> 3, C6 -> C12 by 1 -> 2; both send the glued involution to 6
    total = 0
    for a in g.atoms():
        total += a.element * (3 if a.factor == 0 else 2)
    return total % 12


def random_word(ctx, rng, n):
    S = [s for s in ctx.s_elements() if not s.is_identity]
    return [rng.choice(S) for _ in range(n)]


def product(ctx, seq):
    out = ctx.identity()
    for s in seq:
        out = out * s
    return out


# -- construction basics ----------------------------------------------------------


def test_free_group_arithmetic(F2):
    a = parse_word(F2, "a")
    b = parse_word(F2, "b")
    assert (a * b * ~b).atoms() == (FreeLetter(0, 1),)
    assert (a * b).length == 2
    assert (a ** 3 * a ** -3).is_identity
    assert str(~(a * b)) == "b^-1 a^-1"
    assert F2.kind is Kind.FREE


def test_free_group_large_rank_atoms():
    F = build_free_group(30)
    g = F.element([FreeLetter(27, 1), FreeLetter(0, -1)])
    assert str(g) == "g27 a^-1"
    assert parse_word(F, "g27 a^-1") == g


def test_free_product_canonical_forms(P):
    x, y = parse_word(P, "x"), parse_word(P, "y")
    assert (x * x).is_identity
    assert (y ** 3).is_identity
    assert (x * y * x).length == 3
    assert (x * y * y * y * x).is_identity
    assert str(~(x * y)) == "y2 x"
    assert (x * y * y ** 2).atoms() == (FactorElement(0, 1),)


def test_amalgam_moves_edge_part(M):
    # the glued involution u2 ~ v3 is central in both factors
    x2 = M.element([FactorElement(0, 2)])
    y3 = M.element([FactorElement(1, 3)])
    assert x2 == y3
    assert x2.length == 0
    x, y = parse_word(M, "x"), parse_word(M, "y")
    assert x * y * x2 == x2 * x * y
    assert (x * y).length == 2
    assert (x * x).length == 0
    assert (x * y3 * x).length == 0


def test_hnn_pinches(H, H2):
    g = parse_word(H, "t^-1 u^2 t")
    assert g == parse_word(H, "u2")
    assert (parse_word(H, "t u t^-1")).length == 2
    assert (parse_word(H2, "t^-1 u t")) == parse_word(H2, "u3")
    assert (parse_word(H2, "t u t^-1")) == parse_word(H2, "u3")


def test_context_mismatch(P, Q):
    with pytest.raises(ContextError):
        parse_word(P, "x") * parse_word(Q, "x")
    with pytest.raises(ContextError):
        P.element([StableLetter(1)])
    with pytest.raises(ContextError):
        P.element([FactorElement(0, 5)])


def test_functional_forms(P):
    x, y = parse_word(P, "x"), parse_word(P, "y")
    g = canonicalize(P, [FactorElement(0, 1), FactorElement(1, 1), FactorElement(1, 1)])
    assert g == parse_word(P, "x y2")
    assert multiply(P, x, y) == x * y
    assert invert(P, g) == ~g
    assert length(P, g) == 2


# -- oracle comparisons ---------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.sampled_from([1, -1])), max_size=30))
def test_free_group_matches_stack_reduction(letters):
    F3 = build_free_group(3)
    g = F3.element([FreeLetter(a, e) for a, e in letters])
    expected = free_reduce(letters)
    assert [(a.generator, a.sign) for a in g.atoms()] == expected
    assert g.length == len(expected)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 5)), max_size=30))
def test_free_product_matches_stack_reduction(atoms):
    Q = context("Q")
    g = Q.element([FactorElement(f, k % 3) for f, k in atoms])
    expected = free_product_reduce(atoms, (3, 3))
    assert [(a.factor, a.element) for a in g.atoms()] == expected
    assert g.length == len(expected)


def add_C4xZ(p, q):
    return (p[0] + q[0]) % 4, p[1] + q[1]


def add_C12(p, q):
    return (p + q) % 12


@pytest.mark.parametrize(
    "name, image, combine",
    [("P", image_P, perm_mul), ("H2", image_H2, perm_mul), ("H", image_H, add_C4xZ), ("M", image_M, add_C12)],
)
def test_homomorphism_to_quotient(name, image, combine):
    ctx = context(name)
    rng = random.Random(11)
    for _ in range(300):
        u = product(ctx, random_word(ctx, rng, rng.randint(0, 8)))
        v = product(ctx, random_word(ctx, rng, rng.randint(0, 8)))
        assert image(u * v) == combine(image(u), image(v))
        assert image(ctx.element(u.atoms())) == image(u)


def test_homomorphism_detects_nontrivial_elements(P):
    # x y has infinite order: its image in S3 has order 2 but it is never trivial
    g = parse_word(P, "x y")
    for k in range(1, 12):
        assert not (g ** k).is_identity
        assert (g ** k).length == 2 * k


@pytest.mark.parametrize("name", ["F2", "P", "Q", "M", "H", "H2"])
def test_rebracketing(name):
    ctx = context(name)
    rng = random.Random(5)
    for _ in range(1000):
        seq = random_word(ctx, rng, rng.randint(0, 9))
        cut = rng.randint(0, len(seq))
        left, right = product(ctx, seq[:cut]), product(ctx, seq[cut:])
        whole = product(ctx, seq)
        assert left * right == whole
        assert ctx.element(whole.atoms()) == whole
        assert (~whole) * whole == ctx.identity()


# -- balls ----------------------------------------------------------------------------


def free_ball_size(rank, L):
    return 1 + sum(2 * rank * (2 * rank - 1) ** (k - 1) for k in range(1, L + 1))


def alternating_count(sizes, L):
    """Number of alternating words of length n <= L over two factors with
    ``sizes[f]`` nontrivial letters each (free product or amalgam coset
    representatives)."""
    total = 0
    for n in range(1, L + 1):
        for start in (0, 1):
            c = 1
            for i in range(n):
                c *= sizes[(start + i) % 2]
            total += c
    return total


def hnn_count(base_order, edge_order, L):
    """Britton forms g0 t^e1 c1 ... t^en cn: g0 arbitrary, ci coset
    representatives, no pinch t^e 1 t^-e (both edge groups have the same
    order here, so each side has the same index)."""
    idx = base_order // edge_order
    total = base_order
    # state: (last sign, last rep trivial?)
    for n in range(1, L + 1):
        count = 0
        # dynamic count over sequences of (e, c)
        states = {}
        for e in (1, -1):
            for c in range(idx):
                states[(e, c == 0)] = states.get((e, c == 0), 0) + 1
        for _ in range(n - 1):
            nxt = {}
            for (e, trivial), k in states.items():
                for e2 in (1, -1):
                    if trivial and e2 == -e:
                        continue
                    for c in range(idx):
                        key = (e2, c == 0)
                        nxt[key] = nxt.get(key, 0) + k
            states = nxt
        count = sum(states.values())
        total += base_order * count
    return total


@pytest.mark.parametrize(
    "name, L, expected",
    [
        ("F2", 3, free_ball_size(2, 3)),
        ("F2", 5, free_ball_size(2, 5)),
        ("P", 5, 1 + alternating_count((1, 2), 5)),
        ("Q", 4, 1 + alternating_count((2, 2), 4)),
        ("M", 4, 2 + 2 * alternating_count((1, 2), 4)),
        ("H", 4, hnn_count(4, 2, 4)),
        ("H2", 5, hnn_count(4, 4, 5)),
    ],
)
def test_ball_sizes_match_counting(name, L, expected):
    ball = enumerate_ball(context(name), L)
    assert len(ball) == expected


def test_frozen_ball_sizes():
    # values computed once from the counting formulas above
    assert len(enumerate_ball(context("P"), 1)) == 4
    assert len(enumerate_ball(context("F2"), 2)) == 17
    assert len(enumerate_ball(context("M"), 4)) == 44
    assert len(enumerate_ball(context("H"), 4)) == 644


def test_ball_provenance_and_order(H):
    ball = enumerate_ball(H, 3)
    assert list(ball.elements) == sorted(ball.elements)
    for g in ball:
        chain = ball.factorization(g)
        assert chain[0].length == 0
        assert all(s.length <= 1 for s in chain)
        assert product(H, chain) == g
        assert ball.depth[g] == len(chain) - 1
    lengths = ball.lengths()
    assert lengths.max() == 3
    assert set(ball.restrict(1)) == set(H.s_elements())


def test_ball_capacity_is_an_error():
    F = build_free_group(2)
    with pytest.raises(CapacityError):
        enumerate_ball(F, 6, cap=100)


def test_pair_lengths(P):
    ball = enumerate_ball(P, 2)
    LM = ball.pair_lengths()
    els = ball.elements
    for i in range(len(els)):
        for j in range(len(els)):
            assert LM[i, j] == (els[i] * ~els[j]).length
    inv = ball.inverse_index()
    assert all(els[inv[i]] == ~els[i] for i in range(len(els)))


def test_b_and_s_sets(M, H):
    assert len(M.b_elements()) == 2
    assert all(b.length == 0 for b in M.b_elements())
    assert len(H.b_elements()) == 4
    assert all(s.length <= 1 for s in H.s_elements())
    assert BaseElement(3) in [a for b in H.b_elements() for a in b.atoms()]
