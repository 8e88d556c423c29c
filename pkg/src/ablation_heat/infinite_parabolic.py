"""Classical heat equation around a spherical electrode in an infinite medium.

The field is ``T = T_inf + b/(r0 r) - b/(2 r^2) + T2`` where ``T2`` is built
from ``sin(k r)/r`` modes. The ``1/r`` part of the initial data is carried by
a distribution concentrated at ``k = 0``; that mode never decays, so it
cancels ``b/(r0 r)`` for all times and only

    ``T = T_inf - b/(2 r^2) + (1/r) int_0^inf exp(-a k^2 t) f1(k) sin(k r) dk``

remains. With ``f1 = b/2`` (small electrode) the integral is a Dawson
function. As ``t -> inf`` this tends to ``T_inf - b/(2 r^2)``, not to the
steady state, and dips below ``T_inf`` on the way.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .params import DerivedParams, PhysicalParams
from .profile import Model, TemperatureProfile, grid_map
from .specfun import dawson

#: Location of the Dawson maximum; ``2 x D(x) = 1`` there.
DAWSON_ARGMAX = 0.92413887300459176


class Mode(enum.Enum):
    SMALL_ELECTRODE = "closed-form"
    FULL_QUADRATURE = "quadrature"


def steady_state(r, dp: DerivedParams, p: PhysicalParams):
    r = np.asarray(r, dtype=float)
    if np.any(r < p.r0):
        raise DomainError(f"steady state is defined for r >= r0 = {p.r0}")
    out = p.T_ambient + dp.b / (p.r0 * r) - dp.b / (2.0 * r * r)
    return out if out.ndim else float(out)


def _f1(k, b, r0):
    """Sine transform of the continued initial data, vectorised, ``k > 0``."""
    x = np.asarray(k, dtype=float) * r0
    si = special.sici(x)[0]
    small = x < 1e-2
    xs = np.where(small, 1.0, x)
    tail = (np.sin(xs) - xs * np.cos(xs)) / (xs * xs)
    # (sin x - x cos x)/x^2 = x/3 - x^3/30 + x^5/840
    series = x / 3.0 - x**3 / 30.0 + x**5 / 840.0
    tail = np.where(small, series, tail)
    return b / 2.0 - (b / math.pi) * si + (b / math.pi) * tail


def f1_exact(k: float, dp: DerivedParams, p: PhysicalParams) -> float:
    if k <= 0:
        raise DomainError(f"f1 is defined for k > 0, got {k!r}")
    return float(_f1(k, dp.b, p.r0))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def _k_integral(t, r, dp, p):
    """``int_0^K exp(-a k^2 t) f1(k) sin(k r) dk`` with ``exp(-a K^2 t) = 1e-16``."""
    at = dp.a * t
    kmax = math.sqrt(math.log(1e16) / at)
    nseg = max(4, math.ceil(kmax * max(r, p.r0) / math.pi))
    edges = np.linspace(0.0, kmax, nseg + 1)
    h = 0.5 * np.diff(edges)
    k = edges[:-1, None] + h[:, None] * (1.0 + _GL_NODES[None, :])
    f = np.exp(-at * k * k) * _f1(k, dp.b, p.r0) * np.sin(k * r)
    return float(np.sum(h * (f @ _GL_WEIGHTS)))


def dawson_term(t, r, dp: DerivedParams):
    """``(b / (2 r sqrt(a t))) D+(r / (2 sqrt(a t)))``, the small-electrode
    value of ``(1/r) int exp(-a k^2 t) (b/2) sin(k r) dk``."""
    sq = np.sqrt(dp.a * np.asarray(t, dtype=float))
    return dp.b / (2.0 * r * sq) * dawson(r / (2.0 * sq))


def transient(t: float, r: float, dp: DerivedParams, p: PhysicalParams,
              mode: Mode = Mode.SMALL_ELECTRODE) -> float:
    if r < p.r0:
        raise DomainError(f"r must be >= r0 = {p.r0}, got {r!r}")
    if t <= 0:
        return p.T_ambient
    return p.T_ambient + excess(t, r, dp, p, mode)


def excess(t, r, dp, p, mode=Mode.SMALL_ELECTRODE) -> float:
    """``T - T_inf`` without the rounding of adding ``T_inf``."""
    if mode is Mode.SMALL_ELECTRODE:
        return float(dawson_term(t, r, dp)) - dp.b / (2.0 * r * r)
    return _k_integral(t, r, dp, p) / r - dp.b / (2.0 * r * r)


class HorizonExceeded(RuntimeError):
    pass


def undershoot_time(r: float, dp: DerivedParams, p: PhysicalParams,
                    mode: Mode = Mode.SMALL_ELECTRODE, horizon: float = None) -> float:
    """First time at which ``T(t, r)`` drops below ``T_inf``.

    For the closed form this happens where the Dawson argument reaches its
    maximiser, ``t* = r^2 / (4 a x*^2)``; the root is nevertheless located
    numerically so that the quadrature mode can use the same routine.
    """
    if r <= p.r0:
        raise DomainError("undershoot is searched for r > r0")
    if horizon is None:
        horizon = 1e6 * r * r / dp.a
    g = lambda t: excess(t, r, dp, p, mode)  # noqa: E731
    lo = 1e-3 * r * r / dp.a
    while g(lo) <= 0:
        lo *= 0.5
        if lo < 1e-12 * r * r / dp.a:
            raise HorizonExceeded("no early positive excess found")
    hi = 2.0 * lo
    while g(hi) >= 0:
        lo, hi = hi, 2.0 * hi
        if hi > horizon:
            raise HorizonExceeded(f"T stays >= T_inf up to t = {horizon:g} s")
    return optimize.brentq(g, lo, hi, xtol=1e-14 * hi, rtol=4 * np.finfo(float).eps)


def profile(times, radii, dp: DerivedParams, p: PhysicalParams,
            mode: Mode = Mode.SMALL_ELECTRODE) -> TemperatureProfile:
    field = grid_map(lambda t, r: transient(t, r, dp, p, mode), times, radii)
    return TemperatureProfile.from_grid(Model.PARABOLIC_INFINITE, times, radii, field, dp)
