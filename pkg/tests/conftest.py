import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

CRITERIA = {
    1: "hadamard identity",
    2: "attack preserves correlation without transformations",
    3: "single hadamard-like transformation",
    4: "rotation-only reference point",
    5: "combined phi=pi/2 maximum",
    6: "single-party general optimum",
    7: "practical single-party angles",
    8: "combined general optima",
    9: "cross-evaluation of optima",
    10: "practical combined angles",
    11: "oracle equivalence under the adjudicated convention",
    12: "phi=pi/2 reductions of the closed forms",
    13: "overview table",
    14: "property suites",
}

_status: dict[int, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.failed:
        _status[n] = "FAIL"
    elif rep.when == "call" and rep.passed:
        _status.setdefault(n, "PASS")
    elif rep.skipped:
        _status.setdefault(n, "SKIP")


def pytest_terminal_summary(terminalreporter):
    if not _status:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        terminalreporter.write_line(f"criterion {n:>2}  {_status.get(n, 'NOT RUN'):<7} {title}")
