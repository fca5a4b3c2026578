from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from noetherdyn.cohmodel import build_pullback
from noetherdyn.noether import NoetherianMap, classify
from noetherdyn.spectral import closed_form_charpoly, dynamical_degree, invariant_class

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

D4_EXAMPLE = "1/2,1/2,1/3,1/5,7/15"
D3_TWO_ORBITS = "1/2,1/2,2/5,3/5"


@dataclass
class Pipeline:
    f: object
    cls: object
    model: object
    M: object
    sp: object
    inv: object


def run_pipeline(a: str) -> Pipeline:
    f = NoetherianMap.parse(a)
    cls = classify(f)
    model, M = build_pullback(f, cls)
    closed = closed_form_charpoly(f.d, cls.l, cls.N) if cls.S else None
    sp = dynamical_degree(M, f.d, cls.l, closed)
    inv = invariant_class(model, M, sp.lam, cls, f.d) if not sp.degenerate and sp.simple else None
    return Pipeline(f, cls, model, M, sp, inv)


@pytest.fixture(scope="session")
def d4() -> Pipeline:
    return run_pipeline(D4_EXAMPLE)


@pytest.fixture(scope="session")
def d3() -> Pipeline:
    return run_pipeline(D3_TWO_ORBITS)


def F(x) -> Fraction:
    return Fraction(x)


# -- acceptance summary -------------------------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        prev = _ACCEPTANCE.get(n, (title, True))
        _ACCEPTANCE[n] = (title, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}")
