from __future__ import annotations

from pathlib import Path

import pytest

from knotribbon.exactalg import LaurentPoly
from knotribbon.knotstore import KnotStore, builtin, torus_2q
from knotribbon.pdcode import mirror

DATA = Path(__file__).parent / "data"
KNOTINFO_CSV = DATA / "knotinfo_subset.csv"

# Reference values from the KnotInfo database (determinant, Alexander
# polynomial rewritten in symmetric form with value 1 at t=1, and the
# invariant factors of H_1 of the double branched cover).
KNOTINFO = {
    "3_1": (3, {-1: 1, 0: -1, 1: 1}, (3,)),
    "4_1": (5, {-1: -1, 0: 3, 1: -1}, (5,)),
    "5_1": (5, {-2: 1, -1: -1, 0: 1, 1: -1, 2: 1}, (5,)),
    "6_1": (9, {-1: -2, 0: 5, 1: -2}, (9,)),
    "8_20": (9, {-2: 1, -1: -2, 0: 3, 1: -2, 2: 1}, (9,)),
    "9_46": (9, {-1: -2, 0: 5, 1: -2}, (3, 3)),
    "10_140": (9, {-2: 1, -1: -2, 0: 3, 1: -2, 2: 1}, (9,)),
    "11n_50": (25, {-2: 2, -1: -6, 0: 9, 1: -6, 2: 2}, (25,)),
}

TREFOIL_DELTA = LaurentPoly({-1: 1, 0: -1, 1: 1})


@pytest.fixture(autouse=True)
def _isolated_home(tmp_path, monkeypatch):
    monkeypatch.setenv("KNOTRIBBON_HOME", str(tmp_path / "home"))
    monkeypatch.delenv("KNOTRIBBON_CACHE", raising=False)


@pytest.fixture(scope="session")
def table_store(tmp_path_factory) -> KnotStore:
    store = KnotStore(tmp_path_factory.mktemp("store") / "store.json")
    assert store.ingest_csv(KNOTINFO_CSV) == len(KNOTINFO)
    return store


@pytest.fixture(scope="session")
def j0(table_store):
    return mirror(table_store.get("8_20").pd)


@pytest.fixture(scope="session")
def j1(table_store):
    return mirror(table_store.get("11n_50").pd)


@pytest.fixture(scope="session")
def all_knots(table_store):
    """Every built-in, generated and ingested knot, by name."""
    knots = {r.name: r.pd for r in table_store.all_records()}
    for q in (5, 7):
        knots[f"T2_{q}"] = torus_2q(q).pd
    return knots


@pytest.fixture(scope="session")
def small_knots():
    return [builtin("unknot").pd, builtin("trefoil").pd, torus_2q(5).pd, torus_2q(7).pd]


# ---------------------------------------------------------------------------
# one PASS/FAIL line per acceptance criterion in the terminal summary

_criteria: dict[int, list[str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria.setdefault(marker.args[0], []).append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status} ({len(outcomes)} test(s))")
