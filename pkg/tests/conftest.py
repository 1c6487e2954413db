from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import pytest

from valgroup.specfile import parse_spec

GROUPS = Path(__file__).resolve().parent.parent / "groups"
SPEC_FILES = {"F2": "f2.vg", "P": "p.vg", "Q": "q.vg", "M": "m.vg", "H": "h.vg", "H2": "h2.vg"}


def load(name: str):
    return parse_spec((GROUPS / SPEC_FILES[name]).read_text()).context()


_CONTEXTS: dict = {}


def context(name: str):
    # one context per group per session, so ball caches are shared
    if name not in _CONTEXTS:
        _CONTEXTS[name] = load(name)
    return _CONTEXTS[name]


@pytest.fixture(scope="session")
def F2():
    return context("F2")


@pytest.fixture(scope="session")
def P():
    return context("P")


@pytest.fixture(scope="session")
def Q():
    return context("Q")


@pytest.fixture(scope="session")
def M():
    return context("M")


@pytest.fixture(scope="session")
def H():
    return context("H")


@pytest.fixture(scope="session")
def H2():
    return context("H2")


# -- acceptance summary ----------------------------------------------------------------

_results: dict[str, list[tuple[str, str]]] = defaultdict(list)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    criterion = str(marker.args[0])
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _results[criterion].append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(_results, key=lambda c: int(c)):
        cells = _results[criterion]
        failed = [name for name, outcome in cells if outcome != "passed"]
        verdict = "FAIL" if failed else "PASS"
        line = f"ACCEPTANCE criterion {criterion}: {verdict} ({len(cells) - len(failed)}/{len(cells)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
