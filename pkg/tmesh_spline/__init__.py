"""Hierarchical T-meshes, spline space dimensions and B-spline-based bases.

The package re-exports the public surface of its subpackages so callers can
write ``from tmesh_spline import generate, dim_spline_space``.
"""

from .config import oracle_config, render_config, spline_config
from .errors import TMeshError
from .mesh import (
    HierarchicalMesh,
    HierSpec,
    Segment,
    TMesh,
    build_tmesh,
    extend,
    generate,
    tensor_mesh,
)
from .spline import (
    ConformalityVector,
    SplineFn,
    construct_basis,
    dim_spline_space,
    eval_spline,
    order_ledges,
    verify_basis,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "oracle_config",
    "render_config",
    "spline_config",
    "TMeshError",
    "HierarchicalMesh",
    "HierSpec",
    "Segment",
    "TMesh",
    "build_tmesh",
    "extend",
    "generate",
    "tensor_mesh",
    "ConformalityVector",
    "SplineFn",
    "construct_basis",
    "dim_spline_space",
    "eval_spline",
    "order_ledges",
    "verify_basis",
]
