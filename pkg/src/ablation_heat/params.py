"""Physical constants, derived constants and the characteristic roots.

Conventions used everywhere in the package:

* ``a = kappa / (rho c)`` is the thermal diffusivity.
* ``beta = sigma (V0 r0)^2 / (rho c)`` is the Joule source strength, so the
  volumetric heating divided by ``rho c`` is ``beta / r^4``.
* ``b = beta / a`` sets the steady-state temperature rise ``b / (2 r0^2)``.
* ``eps = tau / a`` multiplies the second time derivative in the
  Cattaneo-Vernotte equation written as ``eps T_tt + T_t / a = Laplacian T``.
* ``d = beta / tau`` is the source constant of the damped-wave form.
* ``k0 = 1 / (2 sqrt(a tau))`` separates real from complex time constants.
* ``wave_speed = sqrt(a / tau)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Mapping, Optional

from .errors import ParameterError

CONFIG_KEYS = ("r0", "r1", "kappa", "rho", "c", "sigma", "V0", "tau", "T_ambient")


@dataclass(frozen=True)
class PhysicalParams:
    """Geometry, material and source constants (SI units).

    ``r1`` is the radius of the outer isothermal shell; ``None`` selects the
    infinite medium. ``T_ambient`` is the temperature at infinity for the
    infinite problem and the outer-wall temperature for the shell.
    """

    r0: float
    kappa: float
    rho: float
    c: float
    sigma: float
    V0: float
    tau: float
    T_ambient: float
    r1: Optional[float] = None

    @property
    def is_finite(self) -> bool:
        return self.r1 is not None

    def validate(self) -> None:
        for name in ("r0", "kappa", "rho", "c", "sigma", "tau"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(name, f"must be finite and > 0, got {value!r}")
        for name in ("V0", "T_ambient"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(name, f"must be finite, got {value!r}")
        if self.r1 is not None and not (math.isfinite(self.r1) and self.r1 > self.r0):
            raise ParameterError("r1", f"must exceed r0={self.r0!r}, got {self.r1!r}")

    def replace(self, **changes) -> "PhysicalParams":
        data = asdict(self)
        data.update(changes)
        return PhysicalParams(**data)


#: Desk-scale case used by the CLI defaults and the acceptance suite.
DESK_CASE = PhysicalParams(
    r0=1e-3,
    r1=50e-3,
    kappa=0.5,
    rho=1000.0,
    c=4000.0,
    sigma=0.5,
    V0=20.0,
    tau=1.0,
    T_ambient=310.0,
)


@dataclass(frozen=True)
class DerivedParams:
    a: float
    beta: float
    b: float
    eps: float
    k0: float
    d: float
    wave_speed: float


def derive_params(p: PhysicalParams) -> DerivedParams:
    """Compute every derived constant from the physical record.

    Raises:
        ParameterError: if a physical constant is out of range; the
            ``field`` attribute names the offending entry.
    """
    p.validate()
    rho_c = p.rho * p.c
    a = p.kappa / rho_c
    beta = p.sigma * (p.V0 * p.r0) ** 2 / rho_c
    return DerivedParams(
        a=a,
        beta=beta,
        b=beta / a,
        eps=p.tau / a,
        k0=1.0 / (2.0 * math.sqrt(a * p.tau)),
        d=beta / p.tau,
        wave_speed=math.sqrt(a / p.tau),
    )


class Branch(enum.Enum):
    SUBCRITICAL_REAL_PAIR = "subcritical"
    CRITICAL_DOUBLE = "critical"
    SUPERCRITICAL_COMPLEX_PAIR = "supercritical"


@dataclass(frozen=True)
class OmegaRoots:
    k: float
    branch: Branch
    omega_plus: complex
    omega_minus: complex


def omega_roots(k: float, dp: DerivedParams, tau: float) -> OmegaRoots:
    """Roots of ``eps w^2 + w / a + k^2 = 0`` for one wavenumber.

    The discriminant is formed as ``(1 - k/k0)(1 + k/k0)`` and the small root
    through the product identity, so neither root loses digits when
    ``k << k0``.
    """
    if k < 0:
        raise ParameterError("k", f"wavenumber must be >= 0, got {k!r}")
    ratio = k / dp.k0
    disc = (1.0 - ratio) * (1.0 + ratio)
    half = -1.0 / (2.0 * tau)
    if ratio < 1.0:
        q = math.sqrt(disc)
        w_minus = -(1.0 + q) / (2.0 * tau)
        w_plus = -2.0 * dp.a * k * k / (1.0 + q)
        return OmegaRoots(k, Branch.SUBCRITICAL_REAL_PAIR, complex(w_plus), complex(w_minus))
    if ratio == 1.0:
        return OmegaRoots(k, Branch.CRITICAL_DOUBLE, complex(half), complex(half))
    nu = math.sqrt(-disc) / (2.0 * tau)
    return OmegaRoots(k, Branch.SUPERCRITICAL_COMPLEX_PAIR, complex(half, nu), complex(half, -nu))


def damped_frequency(k: float, dp: DerivedParams, tau: float) -> float:
    """Angular frequency ``sqrt(a k^2 / tau - 1 / (4 tau^2))`` above ``k0``."""
    ratio = k / dp.k0
    return math.sqrt((ratio - 1.0) * (ratio + 1.0)) / (2.0 * tau)


# ---------------------------------------------------------------------------
# flat "name = value" configuration files


def parse_config(text: str) -> dict:
    """Parse ``name = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}", f"expected 'name = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ParameterError(key, f"unknown key (line {lineno})")
        out[key] = _parse_value(key, value)
    return out


def _parse_value(key: str, value: str):
    if key == "r1" and value.lower() in ("", "none", "inf", "infinite"):
        return None
    try:
        return float(value)
    except ValueError:
        raise ParameterError(key, f"not a number: {value!r}") from None


def params_from_mapping(values: Mapping, base: PhysicalParams = DESK_CASE) -> PhysicalParams:
    data = asdict(base)
    for key, value in values.items():
        if key not in CONFIG_KEYS:
            raise ParameterError(key, "unknown key")
        data[key] = _parse_value(key, value) if isinstance(value, str) else value
    return PhysicalParams(**data)


def load_config(path, base: PhysicalParams = DESK_CASE) -> PhysicalParams:
    return params_from_mapping(parse_config(Path(path).read_text()), base)


def dump_config(p: PhysicalParams) -> str:
    lines = ["# ablation_heat parameters (SI units)"]
    for f in fields(PhysicalParams):
        value = getattr(p, f.name)
        lines.append(f"{f.name} = {'none' if value is None else repr(float(value))}")
    return "\n".join(lines) + "\n"


def roots_satisfy_quadratic(roots: OmegaRoots, dp: DerivedParams) -> float:
    """Largest scaled residual of the characteristic quadratic (diagnostic)."""
    worst = 0.0
    for w in (roots.omega_plus, roots.omega_minus):
        res = dp.eps * w * w + w / dp.a + roots.k ** 2
        scale = abs(dp.eps * w * w) + abs(w / dp.a) + roots.k ** 2
        worst = max(worst, abs(res) / scale if scale else abs(res))
    return worst


__all__ = [
    "Branch",
    "CONFIG_KEYS",
    "DESK_CASE",
    "DerivedParams",
    "OmegaRoots",
    "PhysicalParams",
    "damped_frequency",
    "derive_params",
    "dump_config",
    "load_config",
    "omega_roots",
    "params_from_mapping",
    "parse_config",
    "roots_satisfy_quadratic",
]
