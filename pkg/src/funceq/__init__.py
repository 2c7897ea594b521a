"""Exact symbolic and concrete analysis of mixed additive functional equations
sum_i s_i f_i(x^p_i) g_i(x)^q_i = 0."""

from .analysis import (SolutionFamily, brute_force_two_term, classify_two_term, sample_family,
                       two_exponential_family, vandermonde_certificate, verify_family)
from .concrete import AdditiveModel, RationalFunction, check_equation_samples, difference_polarize
from .corollaries import corollary_specialization
from .equation import (EquationSpec, FunctionSpec, Term, build_lhs, check_conditions,
                       extract_constraints, grade_by_scaling, homogenize, symmetrize,
                       verify_solution)
from .errors import FunctionalEquationError, ParseError
from .expansion import derive, expand_deriv_power, expand_deriv_power_partition, leibniz_oracle
from .parsing import parse_equation, render_equation
from .scan import conjecture_scan
from .sympoly import G, Generator, Monomial, SymPoly, UnknownPoly

__version__ = "0.1.0"

__all__ = [
    "AdditiveModel", "EquationSpec", "FunctionSpec", "FunctionalEquationError", "G",
    "Generator", "Monomial", "ParseError", "RationalFunction", "SolutionFamily", "SymPoly",
    "Term", "UnknownPoly", "brute_force_two_term", "build_lhs", "check_conditions",
    "check_equation_samples", "classify_two_term", "conjecture_scan", "corollary_specialization",
    "derive", "difference_polarize", "expand_deriv_power", "expand_deriv_power_partition",
    "extract_constraints", "grade_by_scaling", "homogenize", "leibniz_oracle", "parse_equation",
    "render_equation", "sample_family", "symmetrize", "two_exponential_family",
    "vandermonde_certificate", "verify_family", "verify_solution",
]
