import pytest

from epi_lab.densities import Gaussian, Laplace, QuarticGibbs, mixture_counterexample

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _CRITERIA.append((marker.args[0], marker.args[1], "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid, text, status in _CRITERIA:
        terminalreporter.write_line(f"{status}  {cid:<6} {text}")


@pytest.fixture(scope="session")
def family():
    """Analytic densities used across modules."""
    return {
        "g05": Gaussian(0.5),
        "g1": Gaussian(1.0),
        "g2": Gaussian(2.0),
        "g4": Gaussian(4.0),
        "lap": Laplace(1.0),
        "q005": QuarticGibbs(0.05),
        "q01": QuarticGibbs(0.1),
        "q02": QuarticGibbs(0.2),
        "mix01": mixture_counterexample(0.1),
        "mix03": mixture_counterexample(0.3),
    }
