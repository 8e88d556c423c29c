"""Cattaneo-Vernotte transient around a spherical electrode, infinite medium.

With ``s = t/(2 tau)``, ``u = r/(2 L)`` and ``L = sqrt(a tau)``:

    T = T_inf + b/(r0 r) (1 - exp(-t/tau)) - b/(2 r^2)
        + b/(4 r) [I1+ + I1- + I2]

    I1+- = I1+-(s, u) / (2 L)                      (k < k0, real roots)
    I2   = exp(-s) (d/ds + 1) S2(s, u) / L         (k > k0, thermal waves)

The ``b/(r0 r)`` term is switched on by the ``k = 0`` mode with the fast
root ``-1/tau``. Every ``k > 0`` mode has zero initial slope, so the total
initial slope is ``b/(r0 r tau)``. At ``t = 0`` the bracket equals ``2/r``.
On the wavefront ``r = t sqrt(a/tau)`` the wave part is singular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, DomainError
from .params import DerivedParams, PhysicalParams, omega_roots, Branch
from .profile import Model, TemperatureProfile, grid_map
from .specfun import DEFAULT_QC, QuadratureControl, dawson, dawson_derivative, i1_kernel, s2, s2_ds

# exp(-s) underflows past this; the wave part is then exactly zero in doubles
_MAX_S = 745.0


@dataclass(frozen=True)
class DimensionlessPoint:
    s: float
    u: float

    @classmethod
    def from_physical(cls, t, r, dp: DerivedParams, tau: float):
        L = math.sqrt(dp.a * tau)
        return cls(t / (2.0 * tau), r / (2.0 * L))


def subcritical_part(s, u, dp, tau, qc=DEFAULT_QC) -> float:
    """``I1+ + I1-`` in physical units [1/m]."""
    L = math.sqrt(dp.a * tau)
    return (i1_kernel(+1, s, u, qc).value + i1_kernel(-1, s, u, qc).value) / (2.0 * L)


def wave_part(s, u, dp, tau, qc=DEFAULT_QC) -> float:
    """``I2 = exp(-s) (dS2/ds + S2) / L`` [1/m]."""
    if s > _MAX_S:
        return 0.0
    L = math.sqrt(dp.a * tau)
    return math.exp(-s) * (s2_ds(s, u, qc).value + s2(s, u, qc).value) / L


def spectral_bracket(s, u, dp, tau, qc=DEFAULT_QC) -> float:
    """``I1+ + I1- + I2``; equals ``2/r`` at ``s = 0``."""
    return subcritical_part(s, u, dp, tau, qc) + wave_part(s, u, dp, tau, qc)


def zero_mode(t, r, dp: DerivedParams, p: PhysicalParams):
    return dp.b / (p.r0 * r) * -np.expm1(-np.asarray(t, dtype=float) / p.tau)


def excess(t, r, dp, p, qc=DEFAULT_QC) -> float:
    """``T - T_inf`` for ``t > 0``."""
    pt = DimensionlessPoint.from_physical(t, r, dp, p.tau)
    k_part = dp.b / (4.0 * r) * spectral_bracket(pt.s, pt.u, dp, p.tau, qc)
    return float(zero_mode(t, r, dp, p)) - dp.b / (2.0 * r * r) + k_part


def transient(t: float, r: float, dp: DerivedParams, p: PhysicalParams,
              qc: QuadratureControl = DEFAULT_QC) -> float:
    if r < p.r0:
        raise DomainError(f"r must be >= r0 = {p.r0}, got {r!r}")
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0:
        return p.T_ambient
    return p.T_ambient + excess(t, r, dp, p, qc)


def steady_state(r, dp: DerivedParams, p: PhysicalParams):
    return p.T_ambient + dp.b / (p.r0 * r) - dp.b / (2.0 * r * r)


def coefficient_split(k: float, dp: DerivedParams, tau: float):
    """Amplitudes ``(f1, g1)`` of the slow and fast real roots for
    ``0 < k < k0`` with ``f1 + g1 = b/2`` and zero initial slope."""
    if not k > 0 or omega_roots(k, dp, tau).branch is not Branch.SUBCRITICAL_REAL_PAIR:
        raise BranchError(f"real split needs 0 < k < k0 = {dp.k0}, got {k!r}")
    roots = omega_roots(k, dp, tau)
    wp, wm = roots.omega_plus.real, roots.omega_minus.real
    denom = wm - wp
    return dp.b / 2.0 * wm / denom, -dp.b / 2.0 * wp / denom


def small_tau_kernel(t: float, r: float, dp: DerivedParams, tau: float) -> float:
    """``2 (1 - tau d/dt) [D+(x) / sqrt(a t)]``, ``x = r / (2 sqrt(a t))``.

    Leading-order replacement of ``I1+`` for small ``tau``; at ``tau = 0`` it
    is twice the parabolic Dawson kernel.
    """
    if t <= 0:
        raise DomainError("t must be > 0")
    sq = math.sqrt(dp.a * t)
    x = r / (2.0 * sq)
    F = float(dawson(x)) / sq
    dF = -F / (2.0 * t) - float(dawson_derivative(x)) * x / (2.0 * t * sq)
    return 2.0 * (F - tau * dF)


def profile(times, radii, dp: DerivedParams, p: PhysicalParams,
            qc: QuadratureControl = DEFAULT_QC) -> TemperatureProfile:
    field = grid_map(lambda t, r: transient(t, r, dp, p, qc), times, radii)
    return TemperatureProfile.from_grid(Model.HYPERBOLIC_INFINITE, times, radii, field, dp)
