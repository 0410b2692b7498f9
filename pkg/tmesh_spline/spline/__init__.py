"""Conformality vectors, dimension paths, l-edge ordering and basis construction."""

from .basis import (
    COMBINED,
    BasisFn,
    BasisProvenance,
    Combination,
    VerificationReport,
    construct_basis,
    direct_tensor,
    local_region,
    projection_ranks,
    two_spline_combination,
    verify_basis,
)
from .conformality import (
    CofactorTriple,
    ConformalityVector,
    SplineFn,
    assemble_W,
    bspline_conformality,
    cofactors_at,
    eval_spline,
    extract_cofactors,
    lay_tensor,
    ledge_system,
    outer_polynomials,
    piecewise_polynomials,
    smoothing_cofactor,
    spline_of,
    tensor_conformality,
    vanished_vertices,
    w_nullspace,
)
from .dimension import (
    PATHS,
    Census,
    DimensionReport,
    census,
    cellwise_system,
    dim_cellwise_oracle,
    dim_conformality_oracle,
    dim_formula,
    dim_spline_space,
    dim_unrestricted_formula,
)
from .ordering import (
    PHASES,
    LevelLedger,
    OrderedLEdges,
    OrderedStep,
    classify_A,
    ledger,
    level_partition,
    order_ledges,
    position_label,
    telescoping_check,
    telescoping_drops,
)

__all__ = [
    "COMBINED",
    "BasisFn",
    "BasisProvenance",
    "Combination",
    "VerificationReport",
    "construct_basis",
    "direct_tensor",
    "local_region",
    "projection_ranks",
    "two_spline_combination",
    "verify_basis",
    "CofactorTriple",
    "ConformalityVector",
    "SplineFn",
    "assemble_W",
    "bspline_conformality",
    "cofactors_at",
    "eval_spline",
    "extract_cofactors",
    "lay_tensor",
    "ledge_system",
    "outer_polynomials",
    "piecewise_polynomials",
    "smoothing_cofactor",
    "spline_of",
    "tensor_conformality",
    "vanished_vertices",
    "w_nullspace",
    "PATHS",
    "Census",
    "DimensionReport",
    "census",
    "cellwise_system",
    "dim_cellwise_oracle",
    "dim_conformality_oracle",
    "dim_formula",
    "dim_spline_space",
    "dim_unrestricted_formula",
    "PHASES",
    "LevelLedger",
    "OrderedLEdges",
    "OrderedStep",
    "classify_A",
    "ledger",
    "level_partition",
    "order_ledges",
    "position_label",
    "telescoping_check",
    "telescoping_drops",
]
