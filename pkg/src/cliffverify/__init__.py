"""Exact-arithmetic engine for Clifford analysis verification.

Core layers: algebra (Cl_m over exact rationals), poly (multivector-valued
polynomials and radial forms), spaces (harmonic/monogenic bases and the
Almansi-Fischer split), operators (Rarita-Schwinger type operators),
moebius (Vahlen maps and conformal weights), integrate (exact sphere/ball
integration and Stokes checks) and the verify CLI on top.
"""

from .algebra import (
    Multivector,
    conjugate,
    geometric_product,
    reverse,
    vector_inverse,
    reflect,
    witt_basis,
)
from .poly import (
    MVPolynomial,
    RadialForm,
    VarGroup,
    dirac_left,
    dirac_left_radial,
    dirac_right,
    euler,
    evaluate,
    inversion_image,
    p_add,
    p_mul,
    substitute_linear,
)
from .scalars import ComplexRational
from .spaces import (
    PolySpaceBasis,
    almansi_fischer_split,
    harmonic_basis,
    monogenic_basis,
    project_Pk,
)
from .operators import (
    OperatorKind,
    apply_Qk,
    apply_Rk,
    apply_Tk,
    apply_TkStar,
    apply_right,
    stein_weiss_residual,
)
from .moebius import MoebiusMap, apply_map, intertwine_residual, j1_weight, \
    jm1_weight, transform_function, validate_vahlen
from .integrate import IntegralReport, ball_integral, pairing_u, sphere_moment, \
    stokes_check

__version__ = "0.1.0"

__all__ = [
    "ComplexRational",
    "IntegralReport",
    "MoebiusMap",
    "Multivector",
    "MVPolynomial",
    "OperatorKind",
    "PolySpaceBasis",
    "RadialForm",
    "VarGroup",
    "almansi_fischer_split",
    "apply_map",
    "apply_Qk",
    "apply_Rk",
    "apply_Tk",
    "apply_TkStar",
    "apply_right",
    "ball_integral",
    "conjugate",
    "dirac_left",
    "dirac_left_radial",
    "dirac_right",
    "euler",
    "evaluate",
    "geometric_product",
    "harmonic_basis",
    "intertwine_residual",
    "inversion_image",
    "j1_weight",
    "jm1_weight",
    "monogenic_basis",
    "p_add",
    "p_mul",
    "pairing_u",
    "project_Pk",
    "reflect",
    "reverse",
    "sphere_moment",
    "stein_weiss_residual",
    "stokes_check",
    "substitute_linear",
    "transform_function",
    "validate_vahlen",
    "vector_inverse",
    "witt_basis",
]
