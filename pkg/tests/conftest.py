import numpy as np
import pytest

from homgeo.algebra import pseudo_orthonormalize, signature
from homgeo.catalog import builtin, builtin_names
from homgeo.connection import koszul_coefficients

# criterion number -> (title, list of outcomes)
_ACCEPTANCE: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _ACCEPTANCE.setdefault(number, (title, []))[1].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, results = _ACCEPTANCE[number]
        verdict = "PASS" if results and all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number} ({title}): {verdict}")


def frame_connection(entry):
    sig = signature(entry.metric)
    frame = pseudo_orthonormalize(entry.metric, lorentzian=sig[1] == 1)
    return frame, koszul_coefficients(entry.algebra, frame)


@pytest.fixture(scope="session")
def e11_entry():
    return builtin("e11")


@pytest.fixture(scope="session")
def e11_gamma(e11_entry):
    return frame_connection(e11_entry)[1]


@pytest.fixture(scope="session")
def catalog():
    return {name: builtin(name) for name in builtin_names()}


@pytest.fixture(scope="session")
def catalog_gammas(catalog):
    return {name: frame_connection(entry)[1] for name, entry in catalog.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
