"""Exact Poisson calculus on manifolds and their tangent bundles."""

from .brackets import (
    AlgebroidSymTensor,
    LieAlgebroid,
    cotangent_algebroid,
    koszul_bracket,
    lichnerowicz_coboundary,
    lie_bracket,
    lie_derivative,
    poisson_bracket,
    schouten_bracket,
    sym_bracket,
    tangent_algebroid,
)
from .errors import ConventionError, StructuralError
from .geometry import (
    Chart,
    ContravariantConnection,
    LinearConnection,
    Metric,
    Multivector,
    NonlinearConnection,
    OneForm,
    SymCovariant,
    VolumeForm,
    interior_product,
    sharp,
    sym_product,
    wedge,
)
from .lifts import (
    Semispray,
    complete_lift,
    euler_field,
    geodesic_spray,
    graded_nabla_lift,
    horizontal_lift_bivector,
    iota,
    iota_inverse,
    vertical_lift,
)
from .poisson import (
    Decision,
    Report,
    check_graded_poisson,
    is_poisson,
    is_transversal_poisson,
    modular_field,
    shape_analysis,
)
from .ring import BACKEND, Poly, RatFunc

__all__ = [
    "AlgebroidSymTensor", "BACKEND", "Chart", "ContravariantConnection", "ConventionError",
    "Decision", "LieAlgebroid", "LinearConnection", "Metric", "Multivector",
    "NonlinearConnection", "OneForm", "Poly", "RatFunc", "Report", "Semispray",
    "StructuralError", "SymCovariant", "VolumeForm", "check_graded_poisson", "complete_lift",
    "cotangent_algebroid", "euler_field", "geodesic_spray", "graded_nabla_lift",
    "horizontal_lift_bivector", "interior_product", "iota", "iota_inverse", "is_poisson",
    "is_transversal_poisson", "koszul_bracket", "lichnerowicz_coboundary", "lie_bracket",
    "lie_derivative", "modular_field", "poisson_bracket", "schouten_bracket", "shape_analysis",
    "sharp", "sym_bracket", "sym_product", "tangent_algebroid", "vertical_lift", "wedge",
]
