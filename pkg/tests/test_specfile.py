import pytest
from hypothesis import given, settings, strategies as st

from valgroup.constructions import Kind, enumerate_ball
from valgroup.errors import SpecError, WordError
from valgroup.specfile import format_word, parse_spec, parse_word, parse_word_list

from .conftest import GROUPS, SPEC_FILES, context


def test_free_product_spec():
    spec = parse_spec("group C2 = cyclic(2)\ngroup C3 = cyclic(3)\nvaluated P = free_product(C2,C3)")
    assert list(spec.valuated) == ["P"]
    ctx = spec.context()
    assert ctx.kind is Kind.FREE_PRODUCT
    assert spec.context("P") is ctx
    assert [G.order for G in ctx.factors] == [2, 3]


@pytest.mark.parametrize("name", sorted(SPEC_FILES))
def test_shipped_spec_files_parse(name):
    spec = parse_spec((GROUPS / SPEC_FILES[name]).read_text())
    assert spec.context().name == name


def test_table_spanning_lines_and_comments():
    text = """
    # Klein four group
    group V = table([[0, 1, 2, 3],
                     [1, 0, 3, 2],   # row 1
                     [2, 3, 0, 1],
                     [3, 2, 1, 0]])
    subgroup A = V.generated(1)
    group C2 = cyclic(2)
    subgroup E = C2.generated(1)
    iso f = A -> E { 1 -> 1 }
    valuated G = amalgam(V, C2; A~E via f)
    """
    spec = parse_spec(text)
    ctx = spec.context("G")
    assert ctx.kind is Kind.AMALGAM
    assert spec.groups["V"].order == 4
    assert len(ctx.b_elements()) == 2


def test_several_valuated_groups():
    spec = parse_spec("valuated F = free(2)\nvaluated F3 = free(3)")
    assert spec.context().rank == 2
    assert spec.context("F3").rank == 3
    with pytest.raises(SpecError):
        spec.context("nope")


@pytest.mark.parametrize(
    "text, fragment, line",
    [
        ("", "no valuated group declared", None),
        ("# only a comment\n", "no valuated group declared", None),
        ("group C2 = cyclic(2)\nvaluated P = free_product(C2, C7)", "C7", 2),
        ("group C = cyclic(0)\nvaluated F = free(1)", "order", 1),
        ("group C = cyclic(2)\ngroup C = cyclic(3)", "declared twice", 2),
        ("group C = table([[0, 1], [1, 1]])", "row 1", 1),
        ("group C = table([[0, 1], [1, 0]]\nvaluated F = free(1)", "unbalanced", 1),
        ("valuated F = frei(2)", "unknown construction", 1),
        ("group C = cyclic(4)\nsubgroup A = C.generated(9)", "out of range", 2),
        ("group C = cyclic(4)\nsubgroup A = C.generated(2)\niso f = A -> A { 2 -> 1 }", "iso f", 3),
        ("group C = cyclic(4)\nsubgroup A = D.generated(2)", "undeclared group 'D'", 2),
        ("monoid M = cyclic(2)", "cannot parse", 1),
        ("group C = cyclic(2)\nvaluated P = free_product(C, C) extra", "unknown construction", 2),
        ("group C = cyclic(2)\nvaluated H = hnn(C; C~C via f)", "is not a subgroup", 2),
    ],
)
def test_spec_errors(text, fragment, line):
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert fragment in str(exc.value)
    assert exc.value.line == line


def test_error_column_points_at_name():
    with pytest.raises(SpecError) as exc:
        parse_spec("group C2 = cyclic(2)\nvaluated P = free_product(C2, C7)")
    assert exc.value.column == len("valuated P = free_product(C2, ") + 1


def test_word_examples(P, H, F2):
    g = parse_word(P, "x y x")
    assert g.length == 3 and format_word(P, g) == "x y x"
    assert parse_word(H, "t^-1 u^2 t") == parse_word(H, "u2")
    assert parse_word(P, "").is_identity
    assert parse_word(P, "1").is_identity
    assert parse_word(P, "xy^2x") == parse_word(P, "x y2 x")
    assert parse_word(H, "t^-1 u2 t") == parse_word(H, "u2")
    assert parse_word(F2, "a^-2 b") == parse_word(F2, "a^-1 a^-1 b")
    assert parse_word_list(F2, "a; a b ;") == [parse_word(F2, "a"), parse_word(F2, "a b")]


@pytest.mark.parametrize(
    "name, text, position",
    [
        ("P", "x5", 0),
        ("P", "x z", 2),
        ("P", "t", 0),
        ("H", "x", 0),
        ("H", "u9", 0),
        ("H", "t2", 0),
        ("F2", "c", 0),
        ("F2", "a # b", 2),
        ("F2", "a^", 1),
    ],
)
def test_word_errors(name, text, position):
    with pytest.raises(WordError) as exc:
        parse_word(context(name), text)
    assert exc.value.position == position


@pytest.mark.parametrize("name", sorted(SPEC_FILES))
def test_printed_words_round_trip_on_ball(name):
    ctx = context(name)
    for g in enumerate_ball(ctx, 3):
        assert parse_word(ctx, format_word(ctx, g)) == g


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(SPEC_FILES)), st.lists(st.integers(0, 1000), max_size=10))
def test_round_trip_property(name, picks):
    ctx = context(name)
    S = ctx.s_elements()
    g = ctx.identity()
    for k in picks:
        g = g * S[k % len(S)]
    assert parse_word(ctx, format_word(ctx, g)) == g
