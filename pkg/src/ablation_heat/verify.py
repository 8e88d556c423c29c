"""Quick built-in property checks, one suite per module (``verify`` command).

Each check returns ``(name, passed, detail)``. The suites are smoke-level:
the full evidence lives in the test suite.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Tuple

import numpy as np

from . import fd_oracle as fd
from . import finite_spectral as fs
from . import infinite_hyperbolic as ih
from . import infinite_parabolic as ip
from . import specfun as sf
from .params import (DESK_CASE, Branch, derive_params, dump_config, omega_roots,
                     params_from_mapping, parse_config)
from .profile import Model

Check = Tuple[str, bool, str]


def _check(name, value, limit) -> Check:
    return name, bool(value <= limit), f"{value:.3g} <= {limit:.3g}"


def suite_params() -> List[Check]:
    rng = np.random.default_rng(12345)
    worst = 0.0
    base = params_from_mapping({"r1": None})
    for _ in range(200):
        a, tau = 10 ** rng.uniform(-8, 2, 2)
        p = base.replace(kappa=a, rho=1.0, c=1.0, tau=tau)
        dp = derive_params(p)
        k = dp.k0 * 10 ** rng.uniform(-3, 3)
        w = omega_roots(k, dp, tau)
        worst = max(worst,
                    abs((w.omega_plus + w.omega_minus) * tau + 1.0),
                    abs(w.omega_plus * w.omega_minus / (a * k * k / tau) - 1.0))
    dp = derive_params(DESK_CASE)
    at = omega_roots(dp.k0, dp, DESK_CASE.tau).branch
    below = omega_roots(np.nextafter(dp.k0, 0), dp, DESK_CASE.tau).branch
    above = omega_roots(np.nextafter(dp.k0, np.inf), dp, DESK_CASE.tau).branch
    branch_ok = (below, at, above) == (Branch.SUBCRITICAL_REAL_PAIR, Branch.CRITICAL_DOUBLE,
                                       Branch.SUPERCRITICAL_COMPLEX_PAIR)
    again = derive_params(params_from_mapping(parse_config(dump_config(DESK_CASE))))
    return [
        _check("root sum/product identities", worst, 1e-12),
        ("branch switches at k0", branch_ok, f"{below.value}/{at.value}/{above.value}"),
        _check("wave_speed^2 eps = 1", abs(dp.wave_speed**2 * dp.eps - 1.0), 4e-16),
        ("config round trip", again == dp, "dump -> parse"),
    ]


def suite_specfun() -> List[Check]:
    x = np.linspace(0.0, 2.0, 20001)
    d = sf.dawson(x)
    h = 1e-4
    worst = 0.0
    for s in (-2.0, 0.5, 3.0):
        for u in (0.3, 1.0, 4.0):
            lhs = (u * sf.s1_ds(s, u).value + s * (sf.s1(s, u + h).value - sf.s1(s, u - h).value) / (2 * h))
            worst = max(worst, abs(lhs - (math.exp(s) - math.cos(u))) / max(1.0, math.exp(s)))
    ci = max(abs(sf.j2(+1, s, s).value + sf.cosine_integral(s)) for s in (0.5, 1.0, 2.0))
    u = 1.7
    return [
        _check("Dawson argmax", abs(x[np.argmax(d)] - ip.DAWSON_ARGMAX), 1e-4),
        _check("u dS1/ds + s dS1/du = e^s - cos u", worst, 1e-6),
        _check("J2+(s, s) = -Ci(s)", ci, 1e-8),
        _check("dS2/ds(0, u) = cos(u)/u", abs(sf.s2_ds(0.0, u).value - math.cos(u) / u), 1e-9),
    ]


def suite_infinite_parabolic() -> List[Check]:
    p = DESK_CASE.replace(r1=None)
    dp = derive_params(p)
    r = 2 * p.r0
    t_star = ip.undershoot_time(r, dp, p)
    closed = r * r / (4 * dp.a * ip.DAWSON_ARGMAX**2)
    late = ip.transient(4 * t_star, r, dp, p) - p.T_ambient
    tiny = ip.transient(1e-9, r, dp, p) - p.T_ambient
    return [
        _check("undershoot time matches Dawson argmax", abs(t_star / closed - 1.0), 1e-9),
        ("T < T_inf after undershoot", late < 0, f"{late:.3g}"),
        _check("T(0+) = T_inf", abs(tiny) / (dp.b / (2 * p.r0**2)), 1e-6),
    ]


def suite_infinite_hyperbolic() -> List[Check]:
    p = DESK_CASE.replace(r1=None)
    dp = derive_params(p)
    L = math.sqrt(dp.a * p.tau)
    worst = 0.0
    for r in (p.r0, 3 * p.r0, 10 * p.r0):
        u = r / (2 * L)
        worst = max(worst, abs(ih.spectral_bracket(0.0, u, dp, p.tau) * r / 2 - 1.0))
    late = ih.transient(60 * p.tau, 2 * p.r0, dp, p) - ih.steady_state(2 * p.r0, dp, p)
    return [
        _check("bracket = 2/r at t = 0", worst, 1e-9),
        ("finite value at t = 60 tau", math.isfinite(late), f"{late:.3g}"),
    ]


def suite_finite_spectral() -> List[Check]:
    p = DESK_CASE
    dp = derive_params(p)
    modes = fs.build_modes(p, dp, Model.PARABOLIC_FINITE)
    res = float(np.max(fs.eigen_residual(modes.k, p)))
    r = np.linspace(p.r0, p.r1, 2001)
    phi = fs._phi_matrix(r, modes.truncated(10))
    w = np.full(r.size, r[1] - r[0])
    w[[0, -1]] *= 0.5
    gram = (phi * w[:, None]).T @ phi
    mid = np.linspace(5 * p.r0, p.r1 - 5 * p.r0, 50)
    t0 = fs.series_temperature(0.0, mid, modes, p, dp, Model.PARABOLIC_FINITE)
    return [
        _check("eigen residual, n <= 400", res, 1e-12),
        _check("Gram matrix = I (trapezoid)", float(np.max(np.abs(gram - np.eye(10)))), 1e-5),
        _check("series(t=0) = T01 in the interior", float(np.max(np.abs(t0 - p.T_ambient))), 1e-3),
    ]


def suite_fd_oracle() -> List[Check]:
    p = DESK_CASE
    dp = derive_params(p)
    scale = dp.b / (2 * p.r0**2)
    out = []
    for scheme, model in ((fd.Scheme.EXPLICIT_PARABOLIC, Model.PARABOLIC_FINITE),
                          (fd.Scheme.EXPLICIT_HYPERBOLIC, Model.HYPERBOLIC_FINITE)):
        orc = fd.oracle_profile(p, dp, scheme, [2.0, 4.0], nr=491)
        modes = fs.build_modes(p, dp, model)
        ser = fs.profile(orc.times(), orc.radii(), modes, p, dp, model)
        out.append(_check(f"{scheme.value} oracle vs series", fd.compare(orc, ser) / scale, 1e-3))
    flat = p.replace(V0=0.0)
    g = fd.make_grid(flat, derive_params(flat), fd.Scheme.EXPLICIT_PARABOLIC, 101, 10.0)
    prof = fd.solve_parabolic(flat, derive_params(flat), g)
    out.append(_check("equilibrium preserved", float(np.max(np.abs(prof.T - p.T_ambient))), 1e-13))
    return out


SUITES: Dict[str, Callable[[], List[Check]]] = {
    "params": suite_params,
    "specfun": suite_specfun,
    "infinite_parabolic": suite_infinite_parabolic,
    "infinite_hyperbolic": suite_infinite_hyperbolic,
    "finite_spectral": suite_finite_spectral,
    "fd_oracle": suite_fd_oracle,
}


def run_suites(names) -> List[Tuple[str, str, bool, str]]:
    rows = []
    for name in names:
        for check, ok, detail in SUITES[name]():
            rows.append((name, check, ok, detail))
    return rows
