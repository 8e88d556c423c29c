import math

import numpy as np
import pytest

from ablation_heat import fd_oracle as fd
from ablation_heat import finite_spectral as fs
from ablation_heat.errors import InstabilityError, ParameterError, ShapeError
from ablation_heat.params import derive_params
from ablation_heat.profile import Model, TemperatureProfile

PARA, HYPER = fd.Scheme.EXPLICIT_PARABOLIC, fd.Scheme.EXPLICIT_HYPERBOLIC


def first_rate(p, dp):
    return dp.a * fs.eigenvalues(p, 1)[0] ** 2


def test_grid_validation():
    with pytest.raises(ParameterError):
        fd.Grid(nr=2, nt=10, dr=0.1, dt=0.1, scheme=PARA)
    with pytest.raises(ParameterError):
        fd.Grid(nr=10, nt=0, dr=0.1, dt=0.1, scheme=PARA)
    with pytest.raises(ParameterError):
        fd.Grid(nr=10, nt=10, dr=-0.1, dt=0.1, scheme=PARA)
    with pytest.raises(ParameterError):
        fd.Grid(nr=10, nt=10, dr=0.1, dt=0.0, scheme=PARA)


def test_stability_limits(desk, desk_dp):
    dr = (desk.r1 - desk.r0) / 100
    ok = 0.5 * dr * dr / desk_dp.a
    fd.Grid(101, 1, dr, ok, PARA).check_stability(desk_dp, desk.tau)
    with pytest.raises(ParameterError):
        fd.Grid(101, 1, dr, 1.01 * ok, PARA).check_stability(desk_dp, desk.tau)
    cfl = dr * math.sqrt(desk.tau / desk_dp.a)
    fd.Grid(101, 1, dr, cfl, HYPER).check_stability(desk_dp, desk.tau)
    with pytest.raises(ParameterError):
        fd.Grid(101, 1, dr, 1.01 * cfl, HYPER).check_stability(desk_dp, desk.tau)


def test_make_grid_hits_end_time(desk, desk_dp):
    for scheme in (PARA, HYPER):
        g = fd.make_grid(desk, desk_dp, scheme, 101, 7.0, n_save=4)
        assert g.nt * g.dt == pytest.approx(7.0, rel=1e-12)
        assert g.nt % 4 == 0 and g.save_every == g.nt // 4
        g.check_stability(desk_dp, desk.tau)


def test_needs_outer_radius(infinite, desk_dp):
    g = fd.Grid(11, 1, 0.1, 1e-9, PARA)
    with pytest.raises(ParameterError):
        fd.solve_parabolic(infinite, desk_dp, g)


@pytest.mark.parametrize("scheme", [PARA, HYPER])
def test_equilibrium_preserved(desk, scheme):
    p = desk.replace(V0=0.0)
    dp = derive_params(p)
    g = fd.make_grid(p, dp, scheme, 201, 50.0, n_save=10)
    prof = fd._solver(scheme)(p, dp, g)
    assert np.max(np.abs(prof.T - p.T_ambient)) <= 1e-13


def test_steady_state_drift(desk):
    # the ghost-node residual of the continuous steady state scales as dr^3; dr / r0 = 3e-4 keeps it below the bound
    p = desk.replace(r1=2e-3)
    dp = derive_params(p)
    scale = dp.b / (2 * p.r0**2)
    nr = 3001
    dr = (p.r1 - p.r0) / (nr - 1)
    g = fd.Grid(nr, 1000, dr, 0.45 * dr * dr / dp.a, PARA, save_every=1000)
    r = np.linspace(p.r0, p.r1, nr)
    T_init = fs.steady_state(r, dp, p)
    prof = fd.solve_parabolic(p, dp, g, T_init=T_init)
    assert np.max(np.abs(prof.as_grid()[2][-1] - T_init)) <= 1e-8 * scale


@pytest.mark.parametrize("scheme,model", [(PARA, Model.PARABOLIC_FINITE), (HYPER, Model.HYPERBOLIC_FINITE)])
def test_agrees_with_series(desk, desk_dp, scale, scheme, model):
    t1 = 1.0 / first_rate(desk, desk_dp)
    orc = fd.oracle_profile(desk, desk_dp, scheme, [t1 / 4, t1 / 2, t1], nr=491)
    modes = fs.build_modes(desk, desk_dp, model)
    ser = fs.profile(orc.times(), orc.radii(), modes, desk, desk_dp, model)
    assert fd.compare(orc, ser) <= 1e-3 * scale


def test_second_order_convergence(desk, desk_dp):
    modes = fs.build_modes(desk, desk_dp, Model.PARABOLIC_FINITE)
    errs = []
    for nr in (121, 241, 481):
        orc = fd.oracle_profile(desk, desk_dp, PARA, [2.0, 4.0], nr=nr, refine=False)
        ser = fs.profile(orc.times(), orc.radii(), modes, desk, desk_dp, Model.PARABOLIC_FINITE)
        errs.append(fd.compare(orc, ser))
    assert errs[0] / errs[1] >= 3 and errs[1] / errs[2] >= 3


def test_maximum_principle(desk, desk_dp):
    g = fd.make_grid(desk, desk_dp, PARA, 241, 200.0, n_save=50)
    prof = fd.solve_parabolic(desk, desk_dp, g)
    assert np.min(prof.T) >= desk.T_ambient - 1e-12


@pytest.mark.parametrize("scheme", [PARA, HYPER])
def test_deterministic(desk, desk_dp, scheme):
    g = fd.make_grid(desk, desk_dp, scheme, 121, 5.0, n_save=5)
    a = fd._solver(scheme)(desk, desk_dp, g)
    b = fd._solver(scheme)(desk, desk_dp, g)
    assert a.to_csv() == b.to_csv()
    assert np.array_equal(a.T, b.T)


def test_small_tau_approaches_parabolic(desk, desk_dp, scale):
    par = fd.oracle_profile(desk, desk_dp, PARA, [1.0, 2.0], nr=491)
    gaps = []
    for tau in (0.1, 0.05):
        p = desk.replace(tau=tau)
        dp = derive_params(p)
        gaps.append(fd.compare(fd.oracle_profile(p, dp, HYPER, [1.0, 2.0], nr=491), par))
    assert gaps[1] / gaps[0] == pytest.approx(0.5, rel=0.4)
    assert gaps[0] < 1e-2 * scale


def test_hyperbolic_long_time(desk, desk_dp, scale):
    t = 10.0 / first_rate(desk, desk_dp)
    orc = fd.oracle_profile(desk, desk_dp, HYPER, [t], nr=241)
    steady = fs.steady_state(orc.radii(), desk_dp, desk)
    assert np.max(np.abs(orc.as_grid()[2][0] - steady)) <= 1e-3 * scale


def test_instability_is_reported(desk, desk_dp, monkeypatch):
    monkeypatch.setattr(fd.Grid, "check_stability", lambda self, dp, tau: None)
    dr = (desk.r1 - desk.r0) / 100
    g = fd.Grid(101, 2000, dr, 0.7 * dr * dr / desk_dp.a, PARA)
    with pytest.raises(InstabilityError) as exc:
        fd.solve_parabolic(desk, desk_dp, g)
    assert exc.value.step > 0
    assert exc.value.diagnostics["max_deviation"] > exc.value.diagnostics["limit"]


def test_oracle_profile_rejects_zero_time(desk, desk_dp):
    with pytest.raises(ParameterError):
        fd.oracle_profile(desk, desk_dp, PARA, [0.0, 1.0])


def test_resample(desk, desk_dp):
    orc = fd.oracle_profile(desk, desk_dp, PARA, [1.0], nr=241, refine=False)
    radii = orc.radii()
    again = fd.resample(orc, radii)
    assert np.allclose(again.T, orc.T, rtol=0, atol=1e-12)
    with pytest.raises(ShapeError):
        fd.resample(orc, [2 * desk.r1])


def _flat(values, times=(0.0, 1.0), radii=(1.0, 2.0, 3.0)):
    field = np.full((len(times), len(radii)), values, dtype=float)
    return TemperatureProfile.from_grid(Model.ORACLE_PARABOLIC, list(times), list(radii), field)


def test_compare_norms():
    a = _flat(1.0)
    assert fd.compare(a, a) == 0.0
    assert fd.compare(a, _flat(1.25)) == pytest.approx(0.25, rel=1e-15)
    assert fd.compare(a, _flat(1.25), norm="L2") == pytest.approx(0.25, rel=1e-15)
    with pytest.raises(ShapeError):
        fd.compare(a, _flat(1.0, radii=(1.0, 2.0)))
    with pytest.raises(ValueError):
        fd.compare(a, a, norm="L1")


@pytest.fixture(scope="module")
def fronts():
    from ablation_heat.params import PhysicalParams

    base = PhysicalParams(r0=1.0, r1=3.0, kappa=1.0, rho=1.0, c=1.0, sigma=1.0, V0=1.0, tau=1.0, T_ambient=0.0)
    out = {}
    for tau in (0.5, 1.0, 2.0):
        p = base.replace(tau=tau)
        dp = derive_params(p)
        t_end = (p.r1 - p.r0) / dp.wave_speed
        g = fd.make_grid(p, dp, HYPER, 801, t_end, n_save=800, safety=1.0)
        prof = fd.solve_hyperbolic(p, dp, g)
        out[tau] = (p, dp, prof, fd.detect_wavefront(prof, dp, tau))
    return out


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_front_speed(fronts, tau):
    p, dp, _, front = fronts[tau]
    assert len(front) > 100
    assert fd.fit_front_speed(front) == pytest.approx(math.sqrt(dp.a / tau), rel=0.05)


def test_front_speed_scaling(fronts):
    ratio = fd.fit_front_speed(fronts[1.0][3]) / fd.fit_front_speed(fronts[2.0][3])
    assert ratio == pytest.approx(math.sqrt(2), rel=0.05)


@pytest.mark.parametrize("r", [2.5, 2.0, 1.5])
def test_arrival_jump(fronts, r):
    p, dp, prof, _ = fronts[1.0]
    assert fd.arrival_jump(prof, r, (p.r1 - r) / dp.wave_speed) > 10


def test_parabolic_has_no_front(wave_shell):
    dp = derive_params(wave_shell)
    t_end = (wave_shell.r1 - wave_shell.r0) / dp.wave_speed
    g = fd.make_grid(wave_shell, dp, PARA, 401, t_end, n_save=100)
    assert fd.detect_wavefront(fd.solve_parabolic(wave_shell, dp, g), dp, wave_shell.tau) == []


def test_front_csv():
    text = fd.front_csv([(0.5, 2.5), (1.0, 2.0)])
    assert text.splitlines() == ["t,r_front", "0.5,2.5", "1.0,2.0"]
    assert fd.front_csv([]) == "t,r_front\n"
    assert math.isnan(fd.fit_front_speed([]))
