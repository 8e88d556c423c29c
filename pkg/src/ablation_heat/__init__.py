"""Transient temperature around a spherical RF-ablation electrode.

Closed-form and spectral solutions of the parabolic (Fourier) and hyperbolic
(Cattaneo-Vernotte) heat equations, in an infinite medium and in a finite
shell, with the special functions they need and an explicit
finite-difference reference solver.
"""

from .errors import (AccuracyError, BranchError, DomainError, InstabilityError,
                     ParameterError, ShapeError)
from .params import (DESK_CASE, Branch, DerivedParams, OmegaRoots, PhysicalParams,
                     derive_params, load_config, omega_roots)
from .profile import Model, TemperatureProfile
from .specfun import QuadratureControl, SpecfunValue

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "Branch",
    "BranchError",
    "DESK_CASE",
    "DerivedParams",
    "DomainError",
    "InstabilityError",
    "Model",
    "OmegaRoots",
    "ParameterError",
    "PhysicalParams",
    "QuadratureControl",
    "ShapeError",
    "SpecfunValue",
    "TemperatureProfile",
    "derive_params",
    "load_config",
    "omega_roots",
]
