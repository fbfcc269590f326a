"""dh-lab: exact Duistermaat-Heckman densities from circle-action
fixed-point data, log-concavity verdicts, model equivariant cohomology with
hard Lefschetz checks, and an independent polytope-slicing oracle.
"""

from .errors import InputError, InvariantViolation
from .polynomial import (
    PiecewisePoly,
    Poly,
    SignVerdict,
    count_distinct_roots,
    piecewise_smoothness,
    sign_on_interval,
)
from .fixedpoints import (
    FixedPointDatum,
    FixedPointSet,
    LabelMatchingError,
    ValidationReport,
    gen_spheres,
    gen_toric,
    localization_identity,
    reconstruct_labels,
    validate,
)
from .dh import (
    JumpCheck,
    LogConcavityReport,
    ResidueSums,
    dh_eval,
    dh_piecewise,
    gls_jump_check,
    log_concavity_check,
    residue_sum,
    residue_sums,
)
from .cohomology import (
    LefschetzReport,
    RingElement,
    Subspace,
    ambient_lefschetz_check,
    equivariant_symplectic_class,
    hard_lefschetz_check,
    kirwan_kernel,
    monomial_basis,
    normalize,
    reduced_betti,
    residue_integrate,
)
from .polytope import (
    Box,
    ExplicitSimplices,
    PolytopeSpec,
    Product,
    Simplex,
    StandardSimplex,
    VertexHull,
    slice_density,
    sublevel_volume,
    toric_data,
    triangulate,
)
from .montecarlo import DensityEstimate, mc_density

__all__ = [
    "Box",
    "DensityEstimate",
    "ExplicitSimplices",
    "FixedPointDatum",
    "FixedPointSet",
    "InputError",
    "InvariantViolation",
    "JumpCheck",
    "LabelMatchingError",
    "LefschetzReport",
    "LogConcavityReport",
    "PiecewisePoly",
    "Poly",
    "PolytopeSpec",
    "Product",
    "ResidueSums",
    "RingElement",
    "SignVerdict",
    "Simplex",
    "StandardSimplex",
    "Subspace",
    "ValidationReport",
    "VertexHull",
    "ambient_lefschetz_check",
    "count_distinct_roots",
    "dh_eval",
    "dh_piecewise",
    "equivariant_symplectic_class",
    "gen_spheres",
    "gen_toric",
    "gls_jump_check",
    "hard_lefschetz_check",
    "kirwan_kernel",
    "localization_identity",
    "log_concavity_check",
    "mc_density",
    "monomial_basis",
    "normalize",
    "piecewise_smoothness",
    "reconstruct_labels",
    "reduced_betti",
    "residue_integrate",
    "residue_sum",
    "residue_sums",
    "sign_on_interval",
    "slice_density",
    "sublevel_volume",
    "toric_data",
    "triangulate",
    "validate",
]

__version__ = "0.1.0"
