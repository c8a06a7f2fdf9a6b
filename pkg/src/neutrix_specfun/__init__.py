"""Neutrix-regularized incomplete gamma, gamma* and polygamma functions.

Every function is defined for all real orders: at the nonpositive integers,
where the classical integrals diverge, the neutrix limit (finite part) is
returned.  Results come back as :class:`Evaluation` records carrying an
absolute error estimate and the method used.
"""

from .errors import ConvergenceFailure, DomainError, FitRejected, IllConditioned, SpecfunError
from .incgamma import DEFAULT_CONFIG, EvalConfig, classify, lower_gamma, lower_gamma_deriv
from .incgamma_star import NegativeArgument, gamma_star, gamma_star_deriv
from .neutrix import (
    EpsilonGrid,
    IntegralFamily,
    NegligibleTerm,
    NeutrixFit,
    basis_for_integrand,
    extract_finite_part,
    verify_case,
)
from .polygamma import EULER_GAMMA, polygamma_any, polygamma_neg_int, psi_neg_int, zeta_int
from .quadrature import Evaluation, Method, QuadratureConfig, integrate

__all__ = [
    "ConvergenceFailure",
    "DomainError",
    "FitRejected",
    "IllConditioned",
    "SpecfunError",
    "DEFAULT_CONFIG",
    "EvalConfig",
    "classify",
    "lower_gamma",
    "lower_gamma_deriv",
    "NegativeArgument",
    "gamma_star",
    "gamma_star_deriv",
    "EpsilonGrid",
    "IntegralFamily",
    "NegligibleTerm",
    "NeutrixFit",
    "basis_for_integrand",
    "extract_finite_part",
    "verify_case",
    "EULER_GAMMA",
    "polygamma_any",
    "polygamma_neg_int",
    "psi_neg_int",
    "zeta_int",
    "Evaluation",
    "Method",
    "QuadratureConfig",
    "integrate",
]
