import os
import time

import pytest
from hypothesis import HealthCheck, settings

from nilcoset import catalog

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.register_profile("thorough", max_examples=500, deadline=None, suppress_health_check=list(HealthCheck))
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def wreath_c3_c3():
    """C3 wr C3 (order 81, class 3): a acts on the base F_3[x]/(x-1)^3."""
    pres = catalog.PcPresentation.from_dict(
        {"orders": [3, 3, 3, 3], "comm_tails": {"2,1": {"3": 1}, "3,1": {"4": 1}}, "names": ["a", "b1", "b2", "b3"]}
    )
    return catalog.build_pc_group(pres, "C3wrC3")


@pytest.fixture(scope="session")
def u4f2():
    return catalog.build_u4(2)


@pytest.fixture(scope="session")
def u4f3():
    return catalog.build_u4(3)


@pytest.fixture(scope="session")
def b33():
    return catalog.build_burnside33()


@pytest.fixture(scope="session")
def he9_family():
    return catalog.build_he9_family()


@pytest.fixture(scope="session")
def wreath():
    return wreath_c3_c3()


@pytest.fixture(scope="session")
def small_groups():
    return {name: catalog.named_group(name) for name in ("C2", "C4", "S3", "D8", "A4", "D16")}


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    n, title = mark.args
    _ACCEPTANCE[n] = (rep.outcome, title, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        outcome, title, dur = _ACCEPTANCE[n]
        status = "PASS" if outcome == "passed" else "FAIL"
        tr.write_line(f"criterion {n:>2}  {status}  {title}  ({dur:.1f}s)")
    passed = sum(1 for v in _ACCEPTANCE.values() if v[0] == "passed")
    tr.write_line(f"{passed}/{len(_ACCEPTANCE)} criteria pass")


@pytest.fixture
def stopwatch():
    t = time.perf_counter()
    return lambda: time.perf_counter() - t
