"""Explicit finite-difference solvers on the shell, used as an independent
check of the analytical solutions.

Both schemes march ``y = r (T - T01)`` on a uniform grid, where the
spherical Laplacian becomes ``y_rr / r``:

    parabolic:   y_t = a y_rr + beta / r^3
    hyperbolic:  tau y_tt + y_t = a y_rr + beta / r^3

``dT/dr = 0`` at ``r0`` is ``r0 y' = y``, imposed through a ghost node
``y[-1] = y[1] - 2 dr y[0] / r0``; ``y(r1) = 0``. Subtracting the uniform
state keeps it exact in floating point. The hyperbolic march
is leapfrog with the damping term centred on ``(y^{n+1} - y^{n-1}) / 2 dt``
and a Taylor first step that encodes ``T_t(0) = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import interpolate, ndimage

from .errors import InstabilityError, ParameterError, ShapeError
from .params import DerivedParams, PhysicalParams
from .profile import Model, TemperatureProfile


class Scheme(enum.Enum):
    EXPLICIT_PARABOLIC = "parabolic"
    EXPLICIT_HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class Grid:
    nr: int
    nt: int
    dr: float
    dt: float
    scheme: Scheme
    save_every: int = 1

    def __post_init__(self):
        if self.nr < 3:
            raise ParameterError("nr", "need at least 3 radial points")
        if self.nt < 1:
            raise ParameterError("nt", "need at least one time step")
        if self.save_every < 1:
            raise ParameterError("save_every", "must be >= 1")
        for name in ("dr", "dt"):
            if not getattr(self, name) > 0:
                raise ParameterError(name, "spacing must be positive")

    def check_stability(self, dp: DerivedParams, tau: float):
        if self.scheme is Scheme.EXPLICIT_PARABOLIC:
            number = dp.a * self.dt / self.dr**2
            if number > 0.5:
                raise ParameterError("dt", f"a dt / dr^2 = {number:.4g} exceeds 0.5")
        else:
            limit = self.dr * math.sqrt(tau / dp.a)
            if self.dt > limit * (1 + 1e-12):
                raise ParameterError("dt", f"dt = {self.dt:.4g} violates CFL limit {limit:.4g}")


def make_grid(p: PhysicalParams, dp: DerivedParams, scheme: Scheme, nr: int,
              t_end: float, n_save: int = 1, safety: float = 0.9) -> Grid:
    """Stable grid reaching ``t_end`` exactly, with ``n_save`` equally
    spaced snapshots after ``t = 0``."""
    dr = (p.r1 - p.r0) / (nr - 1)
    if scheme is Scheme.EXPLICIT_PARABOLIC:
        dt_max = 0.5 * safety * dr * dr / dp.a
    else:
        dt_max = safety * dr * math.sqrt(p.tau / dp.a)
    per_save = max(1, math.ceil(t_end / (n_save * dt_max)))
    nt = per_save * n_save
    return Grid(nr, nt, dr, t_end / nt, scheme, save_every=per_save)


def _setup(p, dp, grid):
    if p.r1 is None:
        raise ParameterError("r1", "finite-difference oracle needs an outer radius")
    grid.check_stability(dp, p.tau)
    r = np.linspace(p.r0, p.r1, grid.nr)
    if not math.isclose(r[1] - r[0], grid.dr, rel_tol=1e-9):
        raise ParameterError("dr", f"dr={grid.dr} inconsistent with nr={grid.nr} on the shell")
    return r


class _Watch:
    """Blow-up guard: non-finite values or growth past 10x the dynamic range."""

    def __init__(self, p, dp):
        self.limit = 10.0 * max(abs(dp.b) / p.r0**2, 1e-9 * abs(p.T_ambient), 1e-300)

    def __call__(self, excess, step):
        dev = np.max(np.abs(excess))
        if not np.isfinite(dev) or dev > self.limit:
            raise InstabilityError(f"solution blew up at step {step}", step,
                                   {"max_deviation": float(dev), "limit": self.limit})


def _laplacian(y, dr, r0, out):
    """``y_rr`` on all nodes but the Dirichlet one, ghost node at ``r0``."""
    out[1:] = y[2:] - 2.0 * y[1:-1] + y[:-2]
    out[0] = 2.0 * y[1] - 2.0 * y[0] - 2.0 * dr * y[0] / r0
    out /= dr * dr


def _initial(r, p, T_init):
    if T_init is None:
        return np.zeros_like(r)
    T_init = np.broadcast_to(np.asarray(T_init, dtype=float), r.shape)
    return r * (T_init - p.T_ambient)


def solve_parabolic(p: PhysicalParams, dp: DerivedParams, grid: Grid, T_init=None) -> TemperatureProfile:
    """March the heat equation from ``T = T01`` or from ``T_init`` sampled on
    the grid nodes."""
    r = _setup(p, dp, grid)
    y = _initial(r, p, T_init)
    src = dp.beta / r[:-1] ** 3
    lap = np.empty(grid.nr - 1)
    watch = _Watch(p, dp)
    times, snaps = [0.0], [p.T_ambient + y / r]
    for step in range(1, grid.nt + 1):
        _laplacian(y, grid.dr, p.r0, lap)
        lap *= dp.a
        lap += src
        lap *= grid.dt
        y[:-1] += lap
        if step % grid.save_every == 0 or step == grid.nt:
            ex = y / r
            watch(ex, step)
            times.append(step * grid.dt)
            snaps.append(p.T_ambient + ex)
        elif step % 256 == 0:
            watch(y / r, step)
    return TemperatureProfile.from_grid(Model.ORACLE_PARABOLIC, _dedupe(times), r, _stack(times, snaps), dp)


def solve_hyperbolic(p: PhysicalParams, dp: DerivedParams, grid: Grid, T_init=None) -> TemperatureProfile:
    """March the damped wave equation from ``T = T01`` (or ``T_init``) at rest."""
    r = _setup(p, dp, grid)
    dt, tau = grid.dt, p.tau
    src = dp.beta / r[:-1] ** 3
    lap = np.empty(grid.nr - 1)
    watch = _Watch(p, dp)

    y_old = _initial(r, p, T_init)
    _laplacian(y_old, grid.dr, p.r0, lap)
    y = y_old.copy()
    y[:-1] += dt * dt / (2.0 * tau) * (dp.a * lap + src)

    A = tau / (dt * dt)
    B = 1.0 / (2.0 * dt)
    inv = 1.0 / (A + B)
    times, snaps = [0.0], [p.T_ambient + y_old / r]
    if grid.save_every == 1 or grid.nt == 1:
        times.append(dt)
        snaps.append(p.T_ambient + y / r)
    y_new = y.copy()
    for step in range(2, grid.nt + 1):
        _laplacian(y, grid.dr, p.r0, lap)
        lap *= dp.a
        lap += src
        lap += 2.0 * A * y[:-1]
        lap -= (A - B) * y_old[:-1]
        y_new[:-1] = lap * inv
        y_old, y, y_new = y, y_new, y_old
        if step % grid.save_every == 0 or step == grid.nt:
            ex = y / r
            watch(ex, step)
            times.append(step * dt)
            snaps.append(p.T_ambient + ex)
        elif step % 256 == 0:
            watch(y / r, step)
    return TemperatureProfile.from_grid(Model.ORACLE_HYPERBOLIC, _dedupe(times), r, _stack(times, snaps), dp)


def _dedupe(times):
    return np.array(sorted(set(times)))


def _stack(times, snaps):
    seen = {}
    for t, s in zip(times, snaps):
        seen[t] = s
    return np.array([seen[t] for t in sorted(seen)])


def _solver(scheme):
    return solve_parabolic if scheme is Scheme.EXPLICIT_PARABOLIC else solve_hyperbolic


def _uniform_multiples(times):
    """``n`` when ``times`` are exactly ``t_max * i / n`` for integer ``i``."""
    t_max = times[-1]
    for n in range(1, 1025):
        steps = times * n / t_max
        if np.allclose(steps, np.round(steps), rtol=0, atol=1e-9):
            return n
    return None


def _sample(p, dp, scheme, times, nr, safety):
    n = _uniform_multiples(times)
    if n is not None:
        grid = make_grid(p, dp, scheme, nr, times[-1], n_save=n, safety=safety)
        full_t, radii, field = _solver(scheme)(p, dp, grid).as_grid()
        rows = [int(np.argmin(np.abs(full_t - t))) for t in times]
        return radii, field[rows]
    rows = []
    for t in times:
        grid = make_grid(p, dp, scheme, nr, t, n_save=1, safety=safety)
        _, radii, field = _solver(scheme)(p, dp, grid).as_grid()
        rows.append(field[-1])
    return radii, np.array(rows)


def oracle_profile(p: PhysicalParams, dp: DerivedParams, scheme: Scheme, times, nr: int = 981,
                   refine: bool = True, safety: float = 0.9) -> TemperatureProfile:
    """Oracle field at ``times`` (all > 0) on the ``nr`` grid nodes.

    With ``refine`` the run is repeated with half the spacing and combined
    as ``(4 T_fine - T_coarse) / 3``, which removes the ``dr^2`` error term.
    """
    times = np.unique(np.asarray(times, dtype=float))
    if times.size == 0 or times[0] <= 0:
        raise ParameterError("times", "sample times must be positive")
    radii, coarse = _sample(p, dp, scheme, times, nr, safety)
    field = coarse
    if refine:
        _, fine = _sample(p, dp, scheme, times, 2 * nr - 1, safety)
        field = (4.0 * fine[:, ::2] - coarse) / 3.0
    model = Model.ORACLE_PARABOLIC if scheme is Scheme.EXPLICIT_PARABOLIC else Model.ORACLE_HYPERBOLIC
    return TemperatureProfile.from_grid(model, times, radii, field, dp)


def resample(profile: TemperatureProfile, radii) -> TemperatureProfile:
    """Cubic-spline the profile onto ``radii`` (inside the node range) per
    time slice; spline error is far below the ``dr^2`` scheme error."""
    times, nodes, field = profile.as_grid()
    radii = np.asarray(radii, dtype=float)
    if radii.min() < nodes[0] * (1 - 1e-12) or radii.max() > nodes[-1] * (1 + 1e-12):
        raise ShapeError("requested radii outside the oracle grid")
    radii = np.clip(radii, nodes[0], nodes[-1])
    spline = interpolate.CubicSpline(nodes, field, axis=1)
    return TemperatureProfile.from_grid(profile.model, times, radii, spline(radii), profile.meta)


# ---------------------------------------------------------------------------
# post-processing


def compare(profile_a: TemperatureProfile, profile_b: TemperatureProfile, norm: str = "Linf") -> float:
    """Discrepancy between two profiles on identical ``(t, r)`` samples.

    ``L2`` is the root-mean-square difference over the samples.
    """
    if profile_a.t.shape != profile_b.t.shape or not (
        np.array_equal(profile_a.t, profile_b.t) and np.array_equal(profile_a.r, profile_b.r)
    ):
        raise ShapeError("profiles are sampled at different (t, r) points")
    diff = profile_a.T - profile_b.T
    norm = norm.lower()
    if norm == "linf":
        return float(np.max(np.abs(diff)))
    if norm == "l2":
        return float(np.sqrt(np.mean(diff * diff)))
    raise ValueError(f"unknown norm {norm!r}")


def time_derivative(profile: TemperatureProfile):
    """``(t_mid, r, dT/dt)`` by differencing consecutive snapshots."""
    times, radii, field = profile.as_grid()
    dT = np.diff(field, axis=0) / np.diff(times)[:, None]
    return 0.5 * (times[1:] + times[:-1]), radii, dT


def kink_strength(values, axis=-1):
    """``|second difference|`` along ``axis``; a slope jump makes it O(h),
    smooth variation O(h^2)."""
    v = np.moveaxis(np.asarray(values, dtype=float), axis, -1)
    return np.moveaxis(np.abs(v[..., 2:] - 2.0 * v[..., 1:-1] + v[..., :-2]), -1, axis)


def detect_wavefront(profile: TemperatureProfile, dp: DerivedParams, tau: float,
                     threshold: float = 10.0, window: int = 10):
    """Locate the travelling discontinuity of ``dT/dt``.

    Per time slice the indicator ``|second difference in r of dT/dt|`` is
    divided by its median over ``2 window + 1`` neighbouring nodes; the node
    with the largest ratio is the front when that ratio exceeds
    ``threshold``. Returns ``[(t, r_front), ...]``, empty when nothing
    qualifies. Leapfrog keeps the front sharp only near ``dt = dr sqrt(tau/a)``
    (see :func:`make_grid` with ``safety=1``).
    """
    t_mid, radii, dT = time_derivative(profile)
    K = kink_strength(dT, axis=1)
    med = ndimage.median_filter(K, size=(1, 2 * window + 1), mode="nearest")
    with np.errstate(divide="ignore", invalid="ignore"):
        contrast = np.where(med > 0, K / med, np.where(K > 0, np.inf, 0.0))
    j = np.argmax(contrast, axis=1)
    best = contrast[np.arange(K.shape[0]), j]
    hit = best > threshold
    return [(float(t), float(radii[jj + 1])) for t, jj in zip(t_mid[hit], j[hit])]


def arrival_jump(profile: TemperatureProfile, r: float, t_arrival: float, window: int = 10) -> float:
    """Kink ratio of ``dT/dt`` in time at radius ``r``.

    The largest ``|second difference in t of dT/dt|`` within ``window``
    samples of ``t_arrival``, divided by the median of that indicator over
    the whole record.
    """
    times, radii, field = profile.as_grid()
    j = int(np.argmin(np.abs(radii - r)))
    t_mid = 0.5 * (times[1:] + times[:-1])
    dT = np.diff(field[:, j]) / np.diff(times)
    K = kink_strength(dT)
    i0 = int(np.argmin(np.abs(t_mid[1:-1] - t_arrival)))
    lo, hi = max(0, i0 - window), min(K.size, i0 + window + 1)
    background = float(np.median(K))
    peak = float(np.max(K[lo:hi]))
    return peak / background if background > 0 else math.inf


def fit_front_speed(front):
    """Least-squares slope ``|dr/dt|`` of a detected front."""
    if len(front) < 2:
        return math.nan
    t, r = np.array(front).T
    return abs(float(np.polyfit(t, r, 1)[0]))


def front_csv(front) -> str:
    lines = ["t,r_front"] + [f"{t!r},{r!r}" for t, r in front]
    return "\n".join(lines) + "\n"
