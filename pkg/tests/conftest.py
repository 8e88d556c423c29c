import pytest

from ablation_heat.params import DESK_CASE, derive_params


@pytest.fixture
def desk():
    return DESK_CASE


@pytest.fixture
def desk_dp():
    return derive_params(DESK_CASE)


@pytest.fixture
def infinite():
    return DESK_CASE.replace(r1=None)


@pytest.fixture
def scale(desk, desk_dp):
    """Temperature scale ``b / (2 r0^2)`` used by the relative tolerances."""
    return desk_dp.b / (2.0 * desk.r0**2)


@pytest.fixture
def wave_shell():
    """Unit-coefficient shell a few wavelengths thick, where the front survives the damping."""
    from ablation_heat.params import PhysicalParams

    return PhysicalParams(r0=1.0, r1=3.0, kappa=1.0, rho=1.0, c=1.0, sigma=1.0, V0=1.0, tau=1.0,
                          T_ambient=0.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    results = getattr(sys.modules.get("test_acceptance"), "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
