"""Generalized scattering functions, deviation factors and divergence regularization."""

__version__ = "0.1.0"

from .errors import (ConfigError, DegenerateDesignError, DomainError, GenScatterError,
                     InadmissiblePotentialError, IntegrationError, MatchingError, NumericalError,
                     PoleError, PreconditionError, QuadratureError)
from .specfun import digamma, legendre_q, log_gamma
from .coulomb import CoulombParams, coulomb_deviation, kernel_R, s1_coefficient, s_dyn, s_st
from .potentials import PotentialSpec, coulomb, dirac_coulomb, zero_potential
from .radial import (extract_s_dirac, extract_s_dirac_type, extract_s_schrodinger,
                     integrate_dirac, integrate_dirac_type, integrate_schrodinger)

__all__ = [
    "__version__",
    "ConfigError", "DegenerateDesignError", "DomainError", "GenScatterError",
    "InadmissiblePotentialError", "IntegrationError", "MatchingError", "NumericalError",
    "PoleError", "PreconditionError", "QuadratureError",
    "digamma", "legendre_q", "log_gamma",
    "CoulombParams", "coulomb_deviation", "kernel_R", "s1_coefficient", "s_dyn", "s_st",
    "PotentialSpec", "coulomb", "dirac_coulomb", "zero_potential",
    "extract_s_dirac", "extract_s_dirac_type", "extract_s_schrodinger",
    "integrate_dirac", "integrate_dirac_type", "integrate_schrodinger",
]
