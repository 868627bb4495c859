"""Exact dimensional analysis over quantity spaces.

Dimensions are integer exponent vectors, quantities are (measure, dimension)
pairs over a chosen field, and :mod:`pi_lattice.engine` turns a dimensional
signature plus a scalar model into pi-groups, the reduced function and
scaling laws.
"""

from .dimensions import (
    BaseDimensionSet,
    Dimension,
    ExponentMatrix,
    dim_inv,
    dim_mul,
    dim_pow,
    is_dimensionless,
    minimal_power,
    solve_representation,
)
from .engine import (
    CheckReport,
    PiGroup,
    RegularModel,
    ScalarModel,
    ScalingLaw,
    analyze_regularity,
    auto_select_repeating,
    build_model,
    check_covariance,
    compute_pi_groups,
    construct_psi,
    evaluate_pi,
    scalar_model,
    scaling_law,
    verify_representation,
)
from .errors import *  # noqa: F401,F403
from .config import CheckConfig
from .fields import COMPLEX, FLOAT, RATIONAL, GaussianRational, get_field
from .quantity import Quantity, UnitTuple, measure_wrt, nu_measure, q_inv, q_mul, q_pow, q_scale

__version__ = "0.1.0"
