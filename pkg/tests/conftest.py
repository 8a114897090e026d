import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from gsd import GhzExtParams, W3Params
from gsd.families import w3_invariants

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SQ3 = 1 / math.sqrt(3)
W_SYM = W3Params(SQ3, SQ3, SQ3, 0.0)
W_SLIGHT_A = W3Params(math.sqrt(0.7), math.sqrt(0.1), math.sqrt(0.1), math.sqrt(0.1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_w3(rng, region="any", margin=1e-3):
    """Random W3 parameters; ``region`` is "any", "highly" (all r > margin) or "slight" (min r < -margin)."""
    while True:
        p = W3Params.normalized(*np.abs(rng.normal(size=4)))
        r = w3_invariants(p).r
        if region == "any":
            return p
        if region == "highly" and min(r) > margin and not w3_invariants(p).degenerate:
            return p
        if region == "slight" and min(r) < -margin:
            return p


def random_ghz(rng):
    return GhzExtParams.normalized(*rng.normal(size=4))


# ---- acceptance summary: one line per criterion ----

_CRITERIA = {}



@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.outcome != "passed" and not rep.skipped)
    prev = _CRITERIA.get(num, (title, "PASS"))
    if rep.when == "call" or failed:
        status = "FAIL" if failed or prev[1] == "FAIL" else ("SKIP" if rep.skipped else "PASS")
        _CRITERIA[num] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, status = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2}: {status}  {title}")
