"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines
inline; they are also repeated in the terminal summary.
"""

import math
import time

import numpy as np
import pytest
from scipy import integrate

from ablation_heat import fd_oracle as fd
from ablation_heat import finite_spectral as fs
from ablation_heat import infinite_hyperbolic as ih
from ablation_heat import infinite_parabolic as ip
from ablation_heat import specfun as sf
from ablation_heat.errors import AccuracyError
from ablation_heat.params import DESK_CASE, PhysicalParams, derive_params
from ablation_heat.profile import Model

PAR, HYP = Model.PARABOLIC_FINITE, Model.HYPERBOLIC_FINITE
RESULTS = {}


def report(n, ok, detail, capsys):
    line = f"Criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


@pytest.fixture(scope="module")
def desk():
    return DESK_CASE, derive_params(DESK_CASE)


@pytest.fixture(scope="module")
def desk_modes(desk):
    p, dp = desk
    return {m: fs.build_modes(p, dp, m) for m in (PAR, HYP)}


def test_criterion_01_parabolic_undershoot(capsys):
    start = time.perf_counter()
    p = DESK_CASE.replace(r1=None)
    dp = derive_params(p)
    r = 2 * p.r0
    t_star = ip.undershoot_time(r, dp, p)
    root = abs(ip.transient(t_star, r, dp, p) - p.T_ambient)
    beyond = [ip.transient(f * t_star, r, dp, p) - p.T_ambient for f in (1.01, 1.5, 3.0, 10.0, 100.0)]
    elapsed = time.perf_counter() - start
    ok = (math.isfinite(t_star) and root <= 1e-9 * dp.b / p.r0**2 and all(v < 0 for v in beyond)
          and elapsed < 1.0)
    report(1, ok, f"t*={t_star:.6g}s |T(t*)-Tinf|={root:.2g}K max T-Tinf beyond={max(beyond):.3g}K "
                  f"runtime={elapsed:.3f}s", capsys)


def test_criterion_02_dawson_anchor(capsys):
    x = np.linspace(0.0, 2.0, 200001)
    d = sf.dawson(x)
    i = int(np.argmax(d))
    ok = abs(x[i] - 0.924) <= 2e-3 and abs(d[i] - 0.541) <= 1e-3
    report(2, ok, f"argmax={x[i]:.5f} max={d[i]:.6f}", capsys)


def _s1_stated_residual(s, u, h=1e-4):
    # u dS1/ds = s dS1/du + cos u - e^s
    ds = (sf.s1(s + h, u).value - sf.s1(s - h, u).value) / (2 * h)
    du = (sf.s1(s, u + h).value - sf.s1(s, u - h).value) / (2 * h)
    return u * ds - s * du - math.cos(u) + math.exp(s)


def test_criterion_03_s1_identity(capsys):
    start = time.perf_counter()
    worst = max(abs(_s1_stated_residual(s, u)) for s in np.linspace(-3, 3, 10) for u in np.linspace(0.1, 5, 10))
    elapsed = time.perf_counter() - start
    report(3, worst <= 1e-6 and elapsed < 10, f"max residual={worst:.3g} runtime={elapsed:.2f}s", capsys)


def test_criterion_04_bounds(capsys):
    fails = []
    us = (0.1, 0.5, 1.0, 3.0, 10.0, 30.0)
    for s in (0.5, 1.0, 2.0, 5.0, 10.0, 20.0):
        m = 2 * sf.conf_hyp_m_1_32(s)
        fails += [f"kummer s={s} u={u}" for u in us if not abs(sf.s1(s, u).value) < m]
    for s in (5.0, 10.0, 20.0, 30.0):
        lim = math.sqrt(math.pi) * 1.5
        fails += [f"growth s={s} u={u}" for u in us
                  if not abs(sf.s1(s, u).value) * math.exp(-s) * math.sqrt(s) < lim]
        fails += [f"negative s={s} u={u}" for u in us if not abs(sf.s1(-s, u).value) < 1.5 / s]
    ratios = []
    for sign in (+1, -1):
        vals = [sf.j2(sign, s, 1.0).value for s in (10.0, 20.0, 40.0)]
        rem = [abs(v + sign * math.sin(1.0) / s) for v, s in zip(vals, (10.0, 20.0, 40.0))]
        for a, b in zip(vals[:-1], vals[1:]):
            ratios.append(a / b)
            if abs(a / b - 2.0) > 0.6:
                fails.append(f"J2 sign={sign} ratio {a / b:.3g}")
        # the remainder after the leading term must fall at least as fast as 1/s
        fails += [f"J2 remainder sign={sign}" for a, b in zip(rem[:-1], rem[1:]) if a / b < 2.0 * 0.7]
    report(4, not fails, f"J2 ratios={np.round(ratios, 3).tolist()} failures={fails[:4]}", capsys)


def test_criterion_05_ci_identity(capsys):
    worst = {+1: 0.0, -1: 0.0}
    for sign in (+1, -1):
        for s in (0.5, 1.0, 2.0, 5.0):
            try:
                dev = abs(sf.j2(sign, s, s).value + sf.cosine_integral(s))
            except AccuracyError as exc:
                dev = abs(exc.value + sf.cosine_integral(s)) if math.isfinite(exc.value) else math.inf
            worst[sign] = max(worst[sign], dev)
    report(5, max(worst.values()) <= 1e-6,
           f"max |J2+Ci| plus={worst[+1]:.3g} minus={worst[-1]:.3g} (minus-sign integral diverges on s=u)", capsys)


def test_criterion_06_hyperbolic_consistency(capsys):
    p = DESK_CASE.replace(r1=None)
    dp = derive_params(p)
    scale = dp.b / (2 * p.r0**2)
    radii = np.geomspace(p.r0, 10 * p.r0, 10)
    start_dev = 0.0
    for r in radii:
        u = r / (2 * math.sqrt(dp.a * p.tau))
        start_dev = max(start_dev, abs(-dp.b / (2 * r * r) + dp.b / (4 * r) * ih.spectral_bracket(0.0, u, dp, p.tau)))
    late_dev = max(abs(ih.transient(1e8, r, dp, p) - ih.steady_state(r, dp, p)) for r in radii)
    ts = np.linspace(0.1, 5.0, 50) * p.tau
    rest = dp.b / (p.r0 * radii[3]) - ih.zero_mode(ts, radii[3], dp, p)
    tau_fit = -1.0 / np.polyfit(ts, np.log(rest), 1)[0]
    ok = start_dev <= 1e-4 * scale and late_dev <= 1e-4 * scale and abs(tau_fit / p.tau - 1) <= 0.02
    report(6, ok, f"t=0 dev={start_dev / scale:.2g}*scale t->inf dev={late_dev / scale:.2g}*scale "
                  f"fitted tau={tau_fit:.6g}s", capsys)


def test_criterion_07_small_tau(capsys):
    p0 = DESK_CASE.replace(r1=None)
    dp0 = derive_params(p0)
    t, r = 2.0, 2e-3
    target = ip.transient(t, r, dp0, p0) + dp0.b / (p0.r0 * r)
    gaps = []
    for tau in (0.01, 0.005):
        p = p0.replace(tau=tau)
        gaps.append(abs(ih.transient(t, r, derive_params(p), p) - target))
    ratio = gaps[1] / gaps[0]
    report(7, abs(ratio - 0.5) <= 0.5 * 0.3, f"gaps={gaps[0]:.4g},{gaps[1]:.4g}K ratio={ratio:.4f}", capsys)


def test_criterion_08_eigenvalues(capsys, desk):
    p, _ = desk
    k = fs.eigenvalues(p, 400)
    res = float(np.max(fs.eigen_residual(k, p)))
    n = np.arange(20, 400)
    dev = np.abs(k[20:] - fs.asymptotic_eigenvalue(n, p))
    C = dev[0] * 400
    asym_ok = bool(np.all(dev <= C / n**2 * (1 + 1e-9)))
    floor = 0.5 * 2 / math.pi
    lowest = {r1: fs.eigenvalues(PhysicalParams(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, r1=r1), 1)[0]
              for r1 in (10.0, 100.0, 1e3, 1e4)}
    gap_ok = all(v >= floor for v in lowest.values())
    ok = res <= 1e-12 and asym_ok and gap_ok
    report(8, ok, f"residual={res:.2g} asymptotic={'ok' if asym_ok else 'bad'} "
                  f"lowest k (r0=1)={ {int(a): round(float(b), 6) for a, b in lowest.items()} } floor={floor:.4f}", capsys)


def test_criterion_09_orthonormality_and_expansion(capsys, desk, desk_modes):
    p, dp = desk
    modes = desk_modes[PAR]
    worst = 0.0
    for i in range(10):
        for j in range(i, 10):
            val, _ = integrate.quad(lambda r: fs.eigenfunction(i, r, modes) * fs.eigenfunction(j, r, modes),
                                    p.r0, p.r1, epsabs=1e-13, epsrel=1e-13, limit=400)
            worst = max(worst, abs(val - (i == j)))
    r = np.linspace(p.r0, p.r1, 40001)
    errs = []
    for n in (100, 200, 400):
        T0 = fs.series_temperature(0.0, r, modes.truncated(n), p, dp, PAR)
        errs.append(math.sqrt(integrate.trapezoid((T0 - p.T_ambient) ** 2, r)))
    ok = worst <= 1e-10 and errs[1] < errs[0] and errs[2] < errs[1]
    report(9, ok, f"gram dev={worst:.2g} L2(t=0) n=100,200,400: {', '.join(f'{e:.3g}' for e in errs)}", capsys)


def test_criterion_10_oracle_agreement(capsys, desk, desk_modes):
    start = time.perf_counter()
    p, dp = desk
    scale = dp.b / (2 * p.r0**2)
    t1 = 1.0 / (dp.a * desk_modes[PAR].k[0] ** 2)
    times = [t1 / 4, t1 / 2, t1]
    dev = {}
    for scheme, model in ((fd.Scheme.EXPLICIT_PARABOLIC, PAR), (fd.Scheme.EXPLICIT_HYPERBOLIC, HYP)):
        orc = fd.oracle_profile(p, dp, scheme, times, nr=491, refine=True)
        ser = fs.profile(orc.times(), orc.radii(), desk_modes[model], p, dp, model)
        dev[model.value] = fd.compare(orc, ser) / scale
    elapsed = time.perf_counter() - start
    ok = max(dev.values()) <= 1e-3 and elapsed < 120
    report(10, ok, f"Linf/scale={ {k: float(f'{v:.3g}') for k, v in dev.items()} } at t={np.round(times, 1).tolist()}s "
                   f"runtime={elapsed:.1f}s", capsys)


def test_criterion_11_shared_decay_rate(capsys, desk):
    p0, _ = desk
    fitted = {}
    for tau in (1.0, 2.0):
        p = p0.replace(tau=tau)
        dp = derive_params(p)
        for model in (PAR, HYP):
            modes = fs.build_modes(p, dp, model)
            rate = dp.a * modes.k[0] ** 2
            ts = np.linspace(5 / rate, 10 / rate, 21)
            rm = 0.5 * (p.r0 + p.r1)
            dev = [abs(fs.series_temperature(t, rm, modes, p, dp, model) - fs.steady_state(rm, dp, p)) for t in ts]
            fitted[(tau, model)] = (np.polyfit(ts, np.log(dev), 1)[0], -rate)
    within = all(abs(f / ref - 1) <= 0.05 for f, ref in fitted.values())
    tau_same = all(abs(fitted[(1.0, m)][0] / fitted[(2.0, m)][0] - 1) <= 0.01 for m in (PAR, HYP))
    detail = " ".join(f"tau={t:g}/{m.value.split('-')[0]}:{f:.5g}" for (t, m), (f, _) in fitted.items())
    report(11, within and tau_same, f"-a k0^2={fitted[(1.0, PAR)][1]:.5g} fitted {detail}", capsys)


def test_criterion_12_wavefront(capsys):
    base = PhysicalParams(r0=1.0, r1=3.0, kappa=1.0, rho=1.0, c=1.0, sigma=1.0, V0=1.0, tau=1.0, T_ambient=0.0)
    speeds, jumps = {}, []
    for tau in (0.5, 1.0, 2.0):
        p = base.replace(tau=tau)
        dp = derive_params(p)
        t_end = (p.r1 - p.r0) / dp.wave_speed
        g = fd.make_grid(p, dp, fd.Scheme.EXPLICIT_HYPERBOLIC, 801, t_end, n_save=800, safety=1.0)
        prof = fd.solve_hyperbolic(p, dp, g)
        speeds[tau] = fd.fit_front_speed(fd.detect_wavefront(prof, dp, tau)) / dp.wave_speed
        if tau == 1.0:
            jumps = [fd.arrival_jump(prof, r, (p.r1 - r) / dp.wave_speed) for r in (2.5, 2.0, 1.5)]
    dp = derive_params(base)
    t_end = (base.r1 - base.r0) / dp.wave_speed
    gp = fd.make_grid(base, dp, fd.Scheme.EXPLICIT_PARABOLIC, 401, t_end, n_save=100)
    parabolic_fronts = fd.detect_wavefront(fd.solve_parabolic(base, dp, gp), dp, base.tau)
    ok = (all(abs(v - 1) <= 0.05 for v in speeds.values()) and min(jumps) > 10 and not parabolic_fronts)
    report(12, ok, f"speed/sqrt(a/tau)={ {t: round(float(v), 4) for t, v in speeds.items()} } "
                   f"arrival jumps={np.round(jumps, 1).tolist()} parabolic fronts={len(parabolic_fronts)}", capsys)


def test_criterion_13_initial_slope(capsys, desk, desk_modes):
    p, dp = desk
    rm = 0.5 * (p.r0 + p.r1)
    h = 1e-3 * p.tau
    slope = {m: (fs.series_temperature(h, rm, desk_modes[m], p, dp, m)
                 - fs.series_temperature(0.0, rm, desk_modes[m], p, dp, m)) / h for m in (PAR, HYP)}
    ratio = abs(slope[HYP]) / abs(slope[PAR])
    report(13, ratio <= 0.01, f"dT/dt parabolic={slope[PAR]:.4g} hyperbolic={slope[HYP]:.4g} K/s ratio={ratio:.2g}",
           capsys)
