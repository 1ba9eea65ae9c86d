import pytest

from cnfreify import CnfFormula, parse_dimacs
from cnfreify import _upkernel_py

SIGMA1_TEXT = "p cnf 3 3\n1 2 0\n-2 3 0\n-2 -3 0\n"
SIGMA2_TEXT = "p cnf 3 4\n-1 0\n1 2 0\n-2 3 0\n-2 -3 0\n"

try:
    from cnfreify import _upkernel
except ImportError:
    _upkernel = None

KERNELS = [pytest.param(_upkernel_py.Propagator, id="python")]
KERNELS.append(pytest.param(
    getattr(_upkernel, "Propagator", None), id="cython",
    marks=pytest.mark.skipif(_upkernel is None,
                             reason="compiled kernel not built")))


@pytest.fixture
def sigma1() -> CnfFormula:
    """(a | b) & (-b | c) & (-b | -c) with a, b, c = 1, 2, 3."""
    return parse_dimacs(SIGMA1_TEXT)


@pytest.fixture
def sigma2() -> CnfFormula:
    """(-a) & (a | b) & (-b | c) & (-b | -c)."""
    return parse_dimacs(SIGMA2_TEXT)


@pytest.fixture(params=KERNELS)
def kernel(request):
    return request.param


_criteria = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None or (report.when != "call" and report.passed):
        return
    num, text = crit
    ok = report.passed if report.when == "call" else False
    if report.skipped:
        ok = None
    prev = _criteria.get(num, (text, True))[1]
    _criteria[num] = (text, ok if prev is not False else False)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args


def pytest_configure(config):
    config.addinivalue_line("markers",
                            "criterion(num, text): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        text, ok = _criteria[num]
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        terminalreporter.write_line(f"criterion {num}: {status}  {text}")
