"""Numerical toolkit around the inverse of the Langevin function
coth(y) - 1/y: exact Taylor series, singularity estimation from
coefficients, rational-approximant pole maps, exact complex branch
points, and the limited-stretch elasticity functions built on the
inverse.
"""

__version__ = "0.1.0"

from .branchpoints import (
    BranchPoint,
    PrecisionContext,
    ellipse_deviation,
    ellipse_fit_semi_minor,
    euler_transform,
    first_quadrant_root_census,
    langevin_complex,
    langevin_derivative,
    seed,
    solve_branch_point,
    sqrt_expansion_coefficient,
    verify_consistency,
)
from .elasticity import (
    MaterialParams,
    StretchState,
    cohen_approx,
    inv_langevin,
    langevin,
    reduced_eval,
    rickaby_scott_approx,
    strain_energy,
    stress_response,
)
from .errors import (
    AtSingularity,
    DomainError,
    InsufficientOrder,
    NearPole,
    NegativeRatio,
    NoConvergence,
    NoCycleFound,
    NumericalError,
    QuadrantEscape,
    SingularJacobian,
    TooFewPoints,
    ZeroCoefficient,
    ZeroLinearCoefficient,
)
from .estimation import (
    CoefficientWindow,
    DombSykesFit,
    SingularityEstimate,
    asymptotic_coefficient,
    domb_sykes_B,
    domb_sykes_C,
    fit_domb_sykes,
    model_coefficients,
    three_term_approx,
    three_term_exact,
)
from .rational import (
    ContinuedFraction,
    PoleZeroSet,
    RationalFunction,
    cf_convergent,
    filter_froissart,
    pade,
    pole_zero_set,
    series_to_cf,
)
from .series import (
    RationalSeries,
    SignCycle,
    bernoulli_numbers,
    compose,
    h_series,
    inverse_langevin_series,
    langevin_series,
    reduce_additive,
    reduce_multiplicative,
    revert_series,
    revert_series_lagrange,
    sign_cycle,
    singularity_argument,
)

__all__ = [name for name in dir() if not name.startswith("_")]
