import functools
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nctx.models import classify_extremal, extremal_points  # noqa: E402
from nctx.scenario import build_gamma_g, cycle_graph, library_scenario  # noqa: E402


@functools.lru_cache(maxsize=None)
def _extremal(name: str):
    s = library_scenario(name).scenario
    pts = extremal_points(s)
    return pts, classify_extremal(s, pts)


@pytest.fixture(scope="session")
def extremal_cache():
    """Session-wide cache of extremal points keyed by library name."""
    return _extremal


@pytest.fixture(scope="session")
def kcbs_gg():
    return build_gamma_g(cycle_graph(5))


@pytest.fixture(scope="session")
def c4_gg():
    return build_gamma_g(cycle_graph(4))


@pytest.fixture(scope="session")
def chsh_gg():
    return library_scenario("chsh_gamma_g")


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    from test_acceptance import CRITERIA

    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if getattr(rep, "when", "call") != "call" and status == "passed":
                continue
            name = rep.nodeid.split("::")[-1]
            if name in CRITERIA:
                outcomes[name] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for name, title in CRITERIA.items():
        if name in outcomes:
            terminalreporter.write_line(f"{outcomes[name]}  criterion {int(name[15:17]):2d}: {title}")
