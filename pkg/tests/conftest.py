import dataclasses

import pytest

from vapor_front import BoundaryConditions, FluidParams, MediumParams
from vapor_front.scenario import reference_scenario

_ACCEPTANCE = []


@pytest.fixture
def ref():
    """Reference water-like scenario (1 mm pore, c ~ 0.9267)."""
    return reference_scenario()


@pytest.fixture
def ref_params(ref):
    return ref.medium, ref.fluid, ref.bc


@pytest.fixture
def steep_params():
    """Strong pressure gradient: the asymptotic line meets p_S at x2 = L/2."""
    m = MediumParams(L=1e-3, K=1e-6)
    f = FluidParams(lambda_i=5304.0, pi_S=10.0, eta_E=1e-2, psi=120.0)
    bc = BoundaryConditions(theta_E=313.15, theta_S=293.15, p_E=1001.0, p_S=1000.0, q=1e5)
    return m, f, bc


@pytest.fixture
def inapplicable_params(ref):
    # p_vs(theta_E) = 7428 Pa > p_S
    bc = dataclasses.replace(ref.bc, p_S=5000.0, p_E=2.0e5)
    return ref.medium, ref.fluid, bc


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and rep.when == "call":
        number, title = marker.args
        _ACCEPTANCE.append((number, title, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_ACCEPTANCE):
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{verdict}] AC{number}: {title}")
