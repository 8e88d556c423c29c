"""Series solution on the shell ``r0 <= r <= r1``.

``T(t, r) = T1(r) + (1/r) sum_n A_n(t) phi_n(r)`` where ``T1`` is the
stationary field, ``phi_n(r) = sin(k_n (r1 - r)) / N_n`` are the orthonormal
eigenfunctions of ``-y'' = k^2 y`` with ``y(r1) = 0`` and
``r0 y'(r0) = y(r0)``, and ``A_n(0) = c_n = <g, phi_n>`` with

    ``g(r) = b/(2r) - b/r0 + r (b/(r0 r1) - b/(2 r1^2))``.

The eigenvalues solve ``sin(k L) + k r0 cos(k L) = 0`` (``L = r1 - r0``),
one in each interval ``k L in ((n + 1/2) pi, (n + 1) pi)``.

Time factors:

* parabolic: ``A_n = c_n exp(-a k_n^2 t)``;
* hyperbolic, ``k_n < k0``: ``a_n exp(w+ t) + b_n exp(w- t)`` with
  ``a_n + b_n = c_n`` and ``w+ a_n + w- b_n = 0``;
* hyperbolic, ``k_n > k0``:
  ``c_n exp(-t/(2 tau)) [cos(nu t) + sin(nu t) / (2 tau nu)]``.

``g`` satisfies both boundary conditions, so ``c_n = -<g'', phi_n> / k_n^2``
decays like ``n^-3``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate, optimize

from .errors import AccuracyError, DomainError, ParameterError
from .params import Branch, DerivedParams, PhysicalParams, omega_roots
from .profile import Model, TemperatureProfile, fmt
from .specfun import QuadratureControl


class SeriesTruncationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SeriesControl:
    n_max: int = 400
    coeff_quadrature: QuadratureControl = field(
        default_factory=lambda: QuadratureControl(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=2000)
    )

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


@dataclass(frozen=True)
class EigenMode:
    n: int
    k_n: float
    norm: float
    c_n: float = math.nan
    a_n: complex = complex(math.nan)
    b_n: complex = complex(math.nan)
    branch: Optional[Branch] = None


class ModeSet:
    """Immutable table of shell modes, stored column-wise."""

    def __init__(self, r0, r1, k, norm, c=None, a=None, b=None, branches=None):
        self.r0 = float(r0)
        self.r1 = float(r1)
        self.k = _frozen(k)
        self.norm = _frozen(norm)
        n = self.k.size
        self.c = _frozen(np.full(n, np.nan) if c is None else c)
        self.a = _frozen(np.full(n, np.nan, dtype=complex) if a is None else a, complex)
        self.b = _frozen(np.full(n, np.nan, dtype=complex) if b is None else b, complex)
        self.branches = tuple(branches) if branches is not None else (None,) * n

    def __len__(self):
        return self.k.size

    def __getitem__(self, n) -> EigenMode:
        return EigenMode(n, float(self.k[n]), float(self.norm[n]), float(self.c[n]),
                         complex(self.a[n]), complex(self.b[n]), self.branches[n])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def with_(self, **cols) -> "ModeSet":
        data = dict(k=self.k, norm=self.norm, c=self.c, a=self.a, b=self.b, branches=self.branches)
        data.update(cols)
        return ModeSet(self.r0, self.r1, **data)

    def truncated(self, n_max) -> "ModeSet":
        return ModeSet(self.r0, self.r1, self.k[:n_max], self.norm[:n_max], self.c[:n_max],
                       self.a[:n_max], self.b[:n_max], self.branches[:n_max])

    def to_csv(self) -> str:
        lines = ["n,k_n,norm,c_n,branch"]
        for i in range(len(self)):
            br = self.branches[i].value if self.branches[i] is not None else ""
            lines.append(f"{i},{fmt(self.k[i])},{fmt(self.norm[i])},{fmt(self.c[i])},{br}")
        return "\n".join(lines) + "\n"


def _frozen(x, dtype=float):
    arr = np.array(x, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _shell(p: PhysicalParams):
    if p.r1 is None:
        raise ParameterError("r1", "finite-shell computation needs an outer radius")
    return p.r0, p.r1, p.r1 - p.r0


# ---------------------------------------------------------------------------
# eigenvalues and eigenfunctions


def eigen_residual(k, p: PhysicalParams):
    """Scaled residual ``|sin(kL) + k r0 cos(kL)| / (1 + k r0)``."""
    r0, _, L = _shell(p)
    k = np.asarray(k, dtype=float)
    return np.abs(np.sin(k * L) + k * r0 * np.cos(k * L)) / (1.0 + k * r0)


def eigenvalues(p: PhysicalParams, n_max: int) -> np.ndarray:
    """First ``n_max`` positive roots of ``tan(k L) = -k r0``."""
    r0, _, L = _shell(p)
    lam = r0 / L
    out = np.empty(n_max)
    for n in range(n_max):
        lo, hi = (n + 0.5) * math.pi, (n + 1.0) * math.pi
        theta = optimize.brentq(lambda th: math.sin(th) + lam * th * math.cos(th),
                                lo, hi, xtol=1e-15 * hi, rtol=4 * np.finfo(float).eps)
        out[n] = theta / L
    return out


def asymptotic_eigenvalue(n, p: PhysicalParams):
    """Two-term large-``n`` approximation of ``k_n``."""
    r0, _, L = _shell(p)
    m = (2 * np.asarray(n, dtype=float) + 1) * math.pi
    return m / (2.0 * L) + 2.0 / (m * r0)


def mode_norm(k, p: PhysicalParams):
    """``sqrt(int_{r0}^{r1} sin^2(k (r1 - r)) dr)`` in closed form."""
    _, _, L = _shell(p)
    k = np.asarray(k, dtype=float)
    return np.sqrt(L / 2.0 - np.sin(2.0 * k * L) / (4.0 * k))


def modes_for(p: PhysicalParams, n_max: int) -> ModeSet:
    k = eigenvalues(p, n_max)
    return ModeSet(p.r0, p.r1, k, mode_norm(k, p))


def eigenfunction(n: int, r, modes: ModeSet):
    r = np.asarray(r, dtype=float)
    if np.any(r < modes.r0 * (1 - 1e-15)) or np.any(r > modes.r1 * (1 + 1e-15)):
        raise DomainError(f"r outside the shell [{modes.r0}, {modes.r1}]")
    out = np.sin(modes.k[n] * (modes.r1 - r)) / modes.norm[n]
    return out if out.ndim else float(out)


def _phi_matrix(r, modes):
    r = np.atleast_1d(np.asarray(r, dtype=float))
    return np.sin(np.outer(modes.r1 - r, modes.k)) / modes.norm


# ---------------------------------------------------------------------------
# Fourier coefficients and the two time evolutions


def initial_target(r, dp: DerivedParams, p: PhysicalParams):
    """``g(r) = r (T01 - T1(r))``, expanded in the eigenfunctions."""
    r0, r1, _ = _shell(p)
    b = dp.b
    return b / (2.0 * r) - b / r0 + r * (b / (r0 * r1) - b / (2.0 * r1 * r1))


def fourier_coefficients(modes: ModeSet, p: PhysicalParams, dp: DerivedParams,
                         sc: SeriesControl = SeriesControl()) -> ModeSet:
    """``c_n = <g, phi_n>`` by oscillatory-weight adaptive quadrature in the
    variable ``rho = r1 - r``."""
    r0, r1, L = _shell(p)
    qc = sc.coeff_quadrature
    g = lambda rho: initial_target(r1 - rho, dp, p)  # noqa: E731
    c = np.empty(len(modes))
    for i, (k, nrm) in enumerate(zip(modes.k, modes.norm)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(g, 0.0, L, weight="sin", wvar=k,
                                      epsabs=qc.abs_tol, epsrel=qc.rel_tol, limit=qc.max_subdivisions)
        if err > qc.target(val):
            raise AccuracyError(f"coefficient {i}: quadrature error {err:.3g} above tolerance", val / nrm, err / nrm)
        c[i] = val / nrm
    return modes.with_(c=c)


def coefficient_split_finite(modes: ModeSet, dp: DerivedParams, tau: float, model: Model) -> ModeSet:
    c = modes.c
    if model in (Model.PARABOLIC_FINITE, Model.ORACLE_PARABOLIC):
        return modes.with_(a=c.astype(complex), b=np.zeros(len(modes), dtype=complex),
                           branches=[Branch.SUBCRITICAL_REAL_PAIR] * len(modes))
    a = np.empty(len(modes), dtype=complex)
    b = np.empty(len(modes), dtype=complex)
    branches = []
    for i, k in enumerate(modes.k):
        roots = omega_roots(float(k), dp, tau)
        branches.append(roots.branch)
        if roots.branch is Branch.CRITICAL_DOUBLE:
            a[i] = b[i] = complex(math.nan)
            continue
        wp, wm = roots.omega_plus, roots.omega_minus
        a[i] = c[i] * wm / (wm - wp)
        b[i] = -(wp / wm) * a[i]
    return modes.with_(a=a, b=b, branches=branches)


def _time_factors(t, modes: ModeSet, dp: DerivedParams, tau: float, model: Model):
    """``A_n(t)`` for every mode (length-n array)."""
    k, c = modes.k, modes.c
    if model in (Model.PARABOLIC_FINITE, Model.ORACLE_PARABOLIC):
        return c * np.exp(-dp.a * k * k * t)
    ratio = k / dp.k0
    out = np.empty_like(c)
    sub = ratio < 1.0
    sup = ratio > 1.0
    crit = ~(sub | sup)
    if np.any(sub):
        q = np.sqrt((1.0 - ratio[sub]) * (1.0 + ratio[sub]))
        wp = -2.0 * dp.a * k[sub] ** 2 / (1.0 + q)
        wm = -(1.0 + q) / (2.0 * tau)
        an = c[sub] * wm / (wm - wp)
        bn = -(wp / wm) * an
        out[sub] = an * np.exp(wp * t) + bn * np.exp(wm * t)
    if np.any(sup):
        nu = np.sqrt((ratio[sup] - 1.0) * (ratio[sup] + 1.0)) / (2.0 * tau)
        out[sup] = c[sup] * math.exp(-t / (2.0 * tau)) * (
            np.cos(nu * t) + np.sin(nu * t) / (2.0 * tau * nu))
    if np.any(crit):
        out[crit] = c[crit] * math.exp(-t / (2.0 * tau)) * (1.0 + t / (2.0 * tau))
    return out


def steady_state(r, dp: DerivedParams, p: PhysicalParams):
    r0, r1, _ = _shell(p)
    b = dp.b
    return p.T_ambient - b / (r0 * r1) + b / (2 * r1 * r1) + b / (r0 * np.asarray(r)) - b / (2 * np.asarray(r) ** 2)


def series_transient(t, r, modes: ModeSet, dp: DerivedParams, tau: float, model: Model):
    """``(1/r) sum_n A_n(t) phi_n(r)`` (the departure from steady state)."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    vals = _phi_matrix(r_arr, modes) @ _time_factors(t, modes, dp, tau, model) / r_arr
    return vals if np.ndim(r) else float(vals[0])


def truncation_estimate(r, modes: ModeSet):
    return abs(modes.c[-1]) * math.sqrt(2.0 / (modes.r1 - modes.r0)) / np.asarray(r)


def series_temperature(t, r, modes: ModeSet, p: PhysicalParams, dp: DerivedParams,
                       model: Model, tol: Optional[float] = None):
    """Shell temperature from the truncated series.

    A :class:`SeriesTruncationWarning` is issued when the tail estimate
    ``|c_N| max|phi| / r`` exceeds ``tol``.
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < p.r0 * (1 - 1e-15)) or np.any(r_arr > p.r1 * (1 + 1e-15)):
        raise DomainError(f"r outside the shell [{p.r0}, {p.r1}]")
    if tol is not None:
        est = float(np.max(truncation_estimate(r_arr, modes)))
        if est > tol:
            warnings.warn(f"series truncation estimate {est:.3g} exceeds {tol:.3g}",
                          SeriesTruncationWarning, stacklevel=2)
    return steady_state(r_arr, dp, p) + series_transient(t, r_arr, modes, dp, p.tau, model)


def build_modes(p: PhysicalParams, dp: DerivedParams, model: Model,
                sc: SeriesControl = SeriesControl()) -> ModeSet:
    modes = fourier_coefficients(modes_for(p, sc.n_max), p, dp, sc)
    return coefficient_split_finite(modes, dp, p.tau, model)


def profile(times, radii, modes, p, dp, model) -> TemperatureProfile:
    field_ = np.array([series_temperature(t, radii, modes, p, dp, model) for t in times])
    return TemperatureProfile.from_grid(model, times, radii, field_, dp)


class DecayRate(NamedTuple):
    rate: float
    branch: Branch


def slowest_decay_rate(modes: ModeSet, dp: DerivedParams, tau: float, model: Model,
                       exact: bool = False) -> DecayRate:
    """Rate of the mode closest to zero frequency.

    On the subcritical branch the leading-order rate ``-a k_0^2`` is returned
    for both equations; ``exact=True`` gives the hyperbolic root
    ``w+ = -a k_0^2 (1 + O(a tau k_0^2))`` instead.
    """
    k0 = float(modes.k[0])
    roots = omega_roots(k0, dp, tau)
    if roots.branch is Branch.SUBCRITICAL_REAL_PAIR:
        if exact and model in (Model.HYPERBOLIC_FINITE, Model.ORACLE_HYPERBOLIC):
            return DecayRate(roots.omega_plus.real, roots.branch)
        return DecayRate(-dp.a * k0 * k0, roots.branch)
    return DecayRate(-1.0 / (2.0 * tau), roots.branch)


__all__ = [
    "DecayRate",
    "EigenMode",
    "ModeSet",
    "SeriesControl",
    "SeriesTruncationWarning",
    "asymptotic_eigenvalue",
    "build_modes",
    "coefficient_split_finite",
    "eigen_residual",
    "eigenfunction",
    "eigenvalues",
    "fourier_coefficients",
    "initial_target",
    "mode_norm",
    "modes_for",
    "profile",
    "series_temperature",
    "series_transient",
    "slowest_decay_rate",
    "steady_state",
    "truncation_estimate",
]
