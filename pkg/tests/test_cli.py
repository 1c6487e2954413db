import io
import json
import subprocess
import sys

import pytest

from valgroup.cli import run
from valgroup.constructions import enumerate_ball
from valgroup.specfile import parse_word
from valgroup.valuation import AxiomId, axiom_holds_on

from .conftest import GROUPS, context

FIELDS = ["command", "group", "radius", "status", "witnesses", "counts", "timing_ms"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def records(*argv):
    code, out, err = call(*argv, "--format", "records")
    return code, [json.loads(line) for line in out.splitlines()], err


def g(name):
    return GROUPS / f"{name}.vg"


def test_check_axioms_holds():
    code, recs, _ = records("check-axioms", "--group", g("p"), "--radius", 3, "--axioms", "A1,A2,A3")
    assert code == 0
    assert [r["command"] for r in recs] == ["check-axioms:A1", "check-axioms:A2", "check-axioms:A3"]
    for r in recs:
        assert list(r) == FIELDS
        assert r["status"] == "holds_up_to_radius"
        assert r["radius"] == 3 and r["group"] == "P"
        assert r["counts"]["cap"] == 2_000_000
        assert r["timing_ms"] == 0


def test_check_axioms_violation_and_replay():
    code, recs, _ = records("check-axioms", "--group", g("h"), "--axioms", "A0star", "--witnesses", 3)
    assert code == 1
    (r,) = recs
    assert r["status"] == "violated"
    assert r["witnesses"][0] == "t u t^-1"
    assert len(r["witnesses"]) == 3 and r["counts"]["violations"] > 3
    H = context("H")
    ball = enumerate_ball(H, 4)
    for word in r["witnesses"]:
        assert not axiom_holds_on(H, AxiomId.A0STAR, (parse_word(H, word),), ball)


def test_multi_element_witnesses_replay():
    code, recs, _ = records("check-axioms", "--group", g("m"), "--radius", 2, "--axioms", "A5")
    assert code == 1
    M = context("M")
    for word in recs[0]["witnesses"]:
        pair = tuple(parse_word(M, part) for part in word.split(" ; "))
        assert not axiom_holds_on(M, AxiomId.A5, pair)


def test_normal_form_text():
    code, out, _ = call("normal-form", "--group", g("p"), "--word", "x y x")
    assert code == 0
    assert "pieces: x | y | x" in out
    assert "junction_1=2, junction_2=2" in out


def test_cyclic_reduce_record():
    code, recs, _ = records("cyclic-reduce", "--group", g("p"), "--word", "x y x")
    assert code == 0
    r = recs[0]
    assert r["witnesses"] == ["x", "y"]
    assert r["counts"]["length_identity"] == 1 and r["counts"]["conjugation_identity"] == 1


def test_conjugacy_records():
    code, recs, _ = records("conjugacy", "--group", g("p"), "--y", "x y x y", "--z", "y x y x", "--max-conjugator", 3)
    assert code == 0
    r = recs[0]
    assert r["witnesses"] == ["x", "x", "y x y"]
    assert r["counts"]["case_i"] == 1 and r["counts"]["n"] == 1
    assert r["radius"] == 3
    code, recs, _ = records("conjugacy", "--group", g("f2"), "--y", "a", "--z", "b", "--max-conjugator", 3)
    assert code == 0 and recs[0]["status"] == "not_conjugate_up_to_radius"


def test_centralizer_and_commute():
    code, recs, _ = records("centralizer", "--group", g("p"), "--g", "x y", "--radius", 6)
    assert code == 0 and recs[0]["counts"]["cyclic_in_ball"] == 1
    code, recs, _ = records("commute-decompose", "--group", g("f2"), "--x", "a^2", "--y", "a^3")
    assert code == 0
    assert recs[0]["witnesses"] == ["a", "1", "1"]
    assert (recs[0]["counts"]["n"], recs[0]["counts"]["m"]) == (2, 3)
    code, recs, _ = records("commute-decompose", "--group", g("f2"), "--x", "a^4", "--y", "a^2", "--radius", 0)
    assert code == 1 and recs[0]["status"] == "not_found"


def test_nielsen_csa_probe_stats():
    code, recs, _ = records("nielsen", "--group", g("f2"), "--gens", "a;a b;b")
    assert code == 0 and recs[0]["witnesses"] == ["a", "b"]
    code, recs, _ = records("csa", "--group", g("p"), "--radius", 3)
    assert code == 1 and recs[0]["status"] == "refuted"
    assert recs[0]["witnesses"] == ["x"] and recs[0]["counts"]["reason_involution"] == 1
    code, recs, _ = records("csa", "--group", g("q"), "--radius", 3)
    assert code == 0 and recs[0]["status"] == "consistent_with_CSA*"
    code, recs, _ = records("subgroup-probe", "--group", g("p"), "--gens", "x y", "--radius", 3)
    assert code == 0 and recs[0]["counts"]["free_part"] == 1
    code, recs, _ = records("ball-stats", "--group", g("h"), "--radius", 2)
    assert code == 0
    assert recs[0]["counts"]["size"] == 68
    assert [recs[0]["counts"][f"length_{n}"] for n in range(3)] == [4, 16, 48]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["normal-form", "--group", g("p")], 2),
        (["normal-form", "--group", g("p"), "--word", "q"], 2),
        (["frobnicate", "--group", g("p")], 2),
        (["check-axioms"], 2),
        (["check-axioms", "--group", "/nonexistent.vg"], 2),
        (["check-axioms", "--group", g("p"), "--axioms", "A9"], 2),
        (["check-axioms", "--group", g("p"), "--radius", "-1"], 2),
        (["check-axioms", "--group", g("p"), "--name", "Z"], 2),
        (["conjugacy", "--group", g("p"), "--y", "x y", "--z", "x y", "--max-conjugator", "0"], 0),
        (["conjugacy", "--group", g("p"), "--y", "x", "--z", "x"], 2),
        (["centralizer", "--group", g("p"), "--g", "x"], 2),
        (["ball-stats", "--group", g("f2"), "--radius", "8", "--cap", "100"], 3),
        (["nielsen", "--group", g("f2"), "--gens", "a;b", "--nmax", "12", "--cap", "10"], 3),
        (["nielsen", "--group", g("f2"), "--gens", "a;b", "--nmax", "4"], 0),
    ],
)
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_bad_spec_file_reports_location(tmp_path):
    bad = tmp_path / "bad.vg"
    bad.write_text("group C2 = cyclic(2)\nvaluated P = free_product(C2, C7)\n")
    code, _, err = call("ball-stats", "--group", bad)
    assert code == 2
    assert "line 2" in err and "C7" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "valgroup", "normal-form", "--group", str(g("p")), "--word", "x y x", "--format", "records"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["witnesses"] == ["x", "y", "x"]


def test_timing_flag():
    code, recs, _ = records("ball-stats", "--group", g("p"), "--radius", 2, "--timing")
    assert code == 0 and recs[0]["timing_ms"] >= 0
