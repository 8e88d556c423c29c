"""Special functions used by the closed-form transients.

Standard functions (Dawson, sine and cosine integrals, Kummer's M(1, 3/2, s))
are thin wrappers over :mod:`scipy.special`. The quadrature-defined functions
are evaluated here:

``S1(s, u) = int_0^1 exp(s sqrt(1-x^2)) sin(u x) / sqrt(1-x^2) dx``
    evaluated in ``y = sqrt(1-x^2)``, where it becomes
    ``int_0^1 exp(s y) g(y) dy`` with ``g(y) = sin(u sqrt(1-y^2)) / sqrt(1-y^2)``.
    ``g`` is an analytic function of ``1 - y^2``, so the integrand is smooth.
    ``dS1/ds`` is the same integral with an extra factor ``y``.

``J2+-(s, u) = int_0^inf cos(u sqrt(y^2+1) +- s y) / sqrt(y^2+1) dy``
    (equivalently ``2 int_0^1 cos((u x^2 +- 2 s x + u)/(1-x^2)) / (1-x^2) dx``).
    A finite head is integrated adaptively, the oscillatory tail by
    half-period segmentation plus repeated averaging.

``S2(s, u) = (J2- - J2+) / 2``.

Two identities are worth keeping in mind:

* ``u dS1/ds + s dS1/du = exp(s) - cos(u)`` (integrate
  ``d/dtheta[exp(s cos t) cos(u sin t)]`` over ``[0, pi/2]``).
* ``J2+(s, s) = -Ci(s)``, while ``J2-(s, s)`` diverges logarithmically: its
  phase ``s (sqrt(y^2+1) - y)`` tends to zero. ``u = s`` is the position
  of the damped thermal wavefront, where ``S2`` is singular.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from ._oscillatory import oscillatory_tail
from .errors import AccuracyError, DomainError


@dataclass(frozen=True)
class QuadratureControl:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_QC = QuadratureControl()


@dataclass(frozen=True)
class SpecfunValue:
    value: float
    est_error: float

    def __float__(self):
        return float(self.value)


# ---------------------------------------------------------------------------
# library-backed special functions


def dawson(x):
    """Dawson's integral ``D+(x) = exp(-x^2) int_0^x exp(y^2) dy``."""
    return special.dawsn(x)


def dawson_derivative(x):
    return 1.0 - 2.0 * np.asarray(x) * special.dawsn(x)


def sine_integral(x):
    return special.sici(x)[0]


def cosine_integral(x):
    """``Ci(x) = -int_x^inf cos(z)/z dz`` for ``x > 0``."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError("cosine integral is defined for x > 0 only")
    return special.sici(x)[1]


def conf_hyp_m_1_32(s):
    """Kummer's function ``M(1, 3/2, s)``."""
    return special.hyp1f1(1.0, 1.5, s)


# ---------------------------------------------------------------------------
# S1 and the I1 kernels


def _g(y, u):
    z = np.sqrt(np.maximum(0.0, (1.0 - y) * (1.0 + y)))
    return u * np.sinc(u * z / math.pi)


def _quad(f, qc, points=None):
    # quad needs more subintervals than break points
    limit = max(qc.max_subdivisions, len(points) + 1) if points else qc.max_subdivisions
    with warnings.catch_warnings():
        # non-convergence is reported through AccuracyError below
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(
            f, 0.0, 1.0, epsabs=qc.abs_tol, epsrel=qc.rel_tol, limit=limit, points=points,
        )
    if err > qc.target(value):
        raise AccuracyError(f"quadrature error {err:.3g} above tolerance", value, err)
    return SpecfunValue(value, err)


def _peak_points(s):
    # integrand ~ exp(s y): mass sits within ~1/|s| of one endpoint
    if abs(s) <= 20.0:
        return None
    w = 1.0 / abs(s)
    pts = [w, 4 * w, 16 * w, 64 * w]
    pts = [p for p in pts if p < 0.5]
    return pts if s < 0 else [1.0 - p for p in pts]


def _s1_shifted(s, u, shift, qc, moment):
    """``exp(-shift) * int_0^1 y^moment exp(s y) g(y) dy``."""
    if moment:
        f = lambda y: y * np.exp(s * y - shift) * _g(y, u)  # noqa: E731
    else:
        f = lambda y: np.exp(s * y - shift) * _g(y, u)  # noqa: E731
    return _quad(f, qc, _peak_points(s))


def s1(s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    return _s1_shifted(s, u, 0.0, qc, moment=False)


def s1_ds(s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """Partial derivative of :func:`s1` with respect to ``s``."""
    return _s1_shifted(s, u, 0.0, qc, moment=True)


def s1_du(s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """Partial derivative of :func:`s1` with respect to ``u``."""
    f = lambda y: np.exp(s * y) * np.cos(u * np.sqrt(np.maximum(0.0, 1.0 - y * y)))  # noqa: E731
    return _quad(f, qc, _peak_points(s))


def i1_kernel(sign: int, s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """Dimensionless subcritical kernel

    ``I1+-(s, u) = int_0^1 (1 +- 1/sqrt(1-x^2)) exp(-s +- s sqrt(1-x^2)) sin(u x) dx``

    assembled as ``+- exp(-s) (d/ds + 1) S1(+-s, u)``. The exponential
    prefactor is folded into the integrands so that large ``s`` does not
    overflow.
    """
    if s < 0:
        raise DomainError(f"i1_kernel needs s >= 0, got {s!r}")
    if sign > 0:
        # exp(-s) [S1_s(s) + S1(s)]
        ds = _s1_shifted(s, u, s, qc, moment=True)
        v = _s1_shifted(s, u, s, qc, moment=False)
        return SpecfunValue(ds.value + v.value, ds.est_error + v.est_error)
    # exp(-s) [S1_s(-s) - S1(-s)]
    ds = _s1_shifted(-s, u, s, qc, moment=True)
    v = _s1_shifted(-s, u, s, qc, moment=False)
    return SpecfunValue(ds.value - v.value, ds.est_error + v.est_error)


# ---------------------------------------------------------------------------
# J2, S2 and their s-derivatives


def _wave_integral(sign, s, u, qc, kind):
    """``int_0^inf amp(y) trig(u sqrt(y^2+1) + sign s y) dy`` with
    ``amp = 1/sqrt(y^2+1), trig = cos`` (kind 'j') or
    ``amp = y/sqrt(y^2+1), trig = sin`` (kind 'k', Abel-summed)."""
    if u <= 0 or s < 0:
        raise DomainError(f"need s >= 0 and u > 0, got s={s!r}, u={u!r}")
    rate = u + sign * s
    if rate == 0.0:
        raise AccuracyError("integral diverges on the wavefront u = s", math.inf, math.inf)

    def phase(y):
        return u * np.sqrt(y * y + 1.0) + sign * s * y

    def dphase(y):
        return u * y / np.sqrt(y * y + 1.0) + sign * s

    if kind == "j":
        amp = lambda y: 1.0 / np.sqrt(y * y + 1.0)  # noqa: E731
        trig, tkind = np.cos, "cos"
    else:
        amp = lambda y: y / np.sqrt(y * y + 1.0)  # noqa: E731
        trig, tkind = np.sin, "sin"

    # the phase is monotone beyond its stationary point (only for sign < 0, u > s)
    y_stat = s / math.sqrt((u - s) * (u + s)) if (sign < 0 and u > s) else 0.0
    y0 = y_stat + 4.0 * math.pi / abs(rate)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        head, head_err = integrate.quad(
            lambda y: amp(y) * trig(phase(y)), 0.0, y0,
            epsabs=0.1 * qc.abs_tol, epsrel=0.1 * qc.rel_tol, limit=qc.max_subdivisions,
        )
    tail, tail_err, ok = oscillatory_tail(
        amp, phase, dphase, tkind, y0,
        tol=lambda v: 0.5 * qc.target(v + head), max_segments=qc.max_subdivisions,
    )
    value, err = head + tail, head_err + tail_err
    if not ok or err > qc.target(value):
        raise AccuracyError(f"oscillatory tail did not converge (err {err:.3g})", value, err)
    return SpecfunValue(value, err)


def j2(sign: int, s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """``J2+-(s, u)``; ``sign`` is +1 or -1.

    Raises :class:`AccuracyError` (value ``inf``) for ``sign=-1, u=s``,
    where the integral diverges.
    """
    return _wave_integral(1 if sign > 0 else -1, s, u, qc, "j")


def j2_ds(sign: int, s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """``dJ2+-/ds = -+ int_0^inf sin(u sqrt(y^2+1) +- s y) y / sqrt(y^2+1) dy``
    (Abel sense: the amplitude tends to one)."""
    sgn = 1 if sign > 0 else -1
    k = _wave_integral(sgn, s, u, qc, "k")
    return SpecfunValue(-sgn * k.value, k.est_error)


def s2(s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """``S2(s, u) = int_0^inf sin(u sqrt(y^2+1)) sin(s y) / sqrt(y^2+1) dy``."""
    if s == 0.0:
        return SpecfunValue(0.0, 0.0)
    jm = j2(-1, s, u, qc)
    jp = j2(+1, s, u, qc)
    return SpecfunValue(0.5 * (jm.value - jp.value), 0.5 * (jm.est_error + jp.est_error))


def s2_ds(s: float, u: float, qc: QuadratureControl = DEFAULT_QC) -> SpecfunValue:
    """``dS2/ds = int_1^inf cos(s sqrt(x^2-1)) sin(u x) dx`` (Abel sense)."""
    km = j2_ds(-1, s, u, qc)
    kp = j2_ds(+1, s, u, qc)
    return SpecfunValue(0.5 * (km.value - kp.value), 0.5 * (km.est_error + kp.est_error))
