"""T-mesh construction, hierarchical refinement and extension."""

from .core import (
    BOUNDARY,
    BOUNDARY_COPY,
    CROSSING,
    EXTENDED,
    ORIGINAL,
    TVERTEX,
    Cell,
    LEdge,
    Segment,
    TMesh,
    Vertex,
    VertexCensus,
    associated_tensor_mesh,
    build_tmesh,
    interior_ledges,
    remove_ledge,
    restrict,
    tensor_mesh,
    tensor_segments,
    vertex_census,
)
from .extension import copy_counts, extend
from .hierarchy import (
    HierarchicalMesh,
    HierarchyBuilder,
    HierSpec,
    LocalGrid,
    cross_segments,
    Subdomain,
    SubdomainForest,
    format_address,
    generate,
    isolated_counts,
    parse_address,
    partition_subdomains,
    random_hierspec,
    subdivide_subdomain,
)
from ._base import HORIZONTAL, VERTICAL, Rect, as_coord, format_coord

__all__ = [
    "BOUNDARY",
    "BOUNDARY_COPY",
    "CROSSING",
    "EXTENDED",
    "ORIGINAL",
    "TVERTEX",
    "HORIZONTAL",
    "VERTICAL",
    "Cell",
    "LEdge",
    "Rect",
    "Segment",
    "TMesh",
    "Vertex",
    "VertexCensus",
    "as_coord",
    "format_coord",
    "associated_tensor_mesh",
    "build_tmesh",
    "interior_ledges",
    "remove_ledge",
    "restrict",
    "tensor_mesh",
    "tensor_segments",
    "vertex_census",
    "copy_counts",
    "extend",
    "HierarchicalMesh",
    "HierarchyBuilder",
    "HierSpec",
    "LocalGrid",
    "cross_segments",
    "Subdomain",
    "SubdomainForest",
    "format_address",
    "generate",
    "isolated_counts",
    "parse_address",
    "partition_subdomains",
    "random_hierspec",
    "subdivide_subdomain",
]
