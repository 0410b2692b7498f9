"""Reading and writing mesh and vector documents.

Documents are JSON with every rational written as a "num/den" string (or an
integer), so parsing is exact. Malformed text raises MeshSyntaxError with the
line and column of the offending token; well-formed documents describing an
invalid mesh or script raise MeshSemanticError.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

from pydantic import ValidationError

from cli.models import MeshDocument, RectModel, SegmentModel, VectorEntry, VectorsDocument
from tmesh_spline.errors import (
    AlreadySubdividedError,
    DanglingSegmentError,
    DegenerateRegionError,
    MeshSemanticError,
    MeshSyntaxError,
    NotRegularError,
    OverlapError,
    StaleAddressError,
)
from tmesh_spline.mesh import HierarchicalMesh, HierSpec, Rect, Segment, TMesh, as_coord, build_tmesh, format_coord, generate
from tmesh_spline.spline import ConformalityVector

logger = logging.getLogger(__name__)

_SEMANTIC = (
    AlreadySubdividedError,
    DanglingSegmentError,
    DegenerateRegionError,
    NotRegularError,
    OverlapError,
    StaleAddressError,
)


class LoadedMesh(NamedTuple):
    mesh: Union[TMesh, HierarchicalMesh]
    m: int
    n: int
    pairing: str

    @property
    def tmesh(self) -> TMesh:
        return self.mesh.mesh if isinstance(self.mesh, HierarchicalMesh) else self.mesh

    @property
    def hierarchical(self) -> Optional[HierarchicalMesh]:
        return self.mesh if isinstance(self.mesh, HierarchicalMesh) else None


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


def _load_json(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MeshSyntaxError(e.msg, e.lineno, e.colno)
    if not isinstance(data, dict):
        raise MeshSyntaxError("document must be a JSON object", 1, 1)
    return data


def _validated(model, text: str, data: dict):
    """Validate, turning rational syntax errors into positioned syntax errors."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        for error in errors:
            if error["type"] == "rational_syntax":
                token = json.dumps(error["input"]) if isinstance(error["input"], str) else str(error["input"])
                offset = text.find(token)
                line, column = _position(text, offset) if offset >= 0 else (0, 0)
                raise MeshSyntaxError(
                    f"malformed rational {error['input']!r} at {'.'.join(map(str, error['loc']))}", line, column
                )
        first = errors[0]
        raise MeshSemanticError(
            f"{'.'.join(map(str, first['loc'])) or 'document'}: {first['msg']}",
            {"errors": len(errors)},
        )


def _rect(model: Optional[RectModel]) -> Optional[Rect]:
    if model is None:
        return None
    return Rect(model.xmin, model.xmax, model.ymin, model.ymax)


def mesh_from_document(doc: MeshDocument) -> LoadedMesh:
    try:
        if doc.kind == "hierarchical":
            mesh = generate(doc.spec)
        else:
            mesh = build_tmesh(
                [Segment(s.orientation, s.fixed, s.lo, s.hi, s.level, s.provenance) for s in doc.segments],
                inner_domain=_rect(doc.inner_domain),
            )
    except _SEMANTIC as e:
        raise MeshSemanticError(e.message, {"cause": type(e).__name__, **e.details})
    return LoadedMesh(mesh, doc.m, doc.n, doc.extension_pairing)


def parse_mesh(text: str) -> LoadedMesh:
    """Rebuild the mesh a document describes; hierarchical scripts go through ``generate``."""
    doc = _validated(MeshDocument, text, _load_json(text))
    loaded = mesh_from_document(doc)
    logger.info(f"Parsed {doc.kind} mesh document for degrees ({doc.m}, {doc.n})")
    return loaded


def parse_spec(text: str) -> HierSpec:
    """A bare refinement script document."""
    return _validated(HierSpec, text, _load_json(text))


def read_mesh(path: Union[str, Path]) -> LoadedMesh:
    return parse_mesh(Path(path).read_text(encoding="utf-8"))


def mesh_document(
    mesh: Union[TMesh, HierarchicalMesh], m: Optional[int] = None, n: Optional[int] = None, pairing: str = "algebraic"
) -> MeshDocument:
    if isinstance(mesh, HierarchicalMesh):
        return MeshDocument(m=mesh.m, n=mesh.n, extension_pairing=pairing, kind="hierarchical", spec=mesh.spec)
    d = mesh.inner_domain
    return MeshDocument(
        m=m,
        n=n,
        extension_pairing=pairing,
        kind="segments",
        segments=[
            SegmentModel(orientation=e.orientation, fixed=e.fixed, lo=e.lo, hi=e.hi, level=e.level, provenance=e.provenance)
            for e in mesh.ledges
        ],
        inner_domain=None if d is None else RectModel(xmin=d.xmin, xmax=d.xmax, ymin=d.ymin, ymax=d.ymax),
    )


def _dump(model) -> str:
    return json.dumps(model.model_dump(mode="json", exclude_none=True), indent=2) + "\n"


def serialize_mesh(
    mesh: Union[TMesh, HierarchicalMesh], m: Optional[int] = None, n: Optional[int] = None, pairing: str = "algebraic"
) -> str:
    return _dump(mesh_document(mesh, m, n, pairing))


def point_key(x: Fraction, y: Fraction) -> str:
    return f"{format_coord(x)},{format_coord(y)}"


def _parse_point_key(key: str, text: str) -> tuple[Fraction, Fraction]:
    try:
        x, y = key.split(",")
        return as_coord(x), as_coord(y)
    except ValueError:
        offset = text.find(json.dumps(key))
        line, column = _position(text, offset) if offset >= 0 else (0, 0)
        raise MeshSyntaxError(f"malformed point key {key!r}", line, column)


def serialize_vectors(
    mesh: TMesh,
    m: int,
    n: int,
    vectors: Sequence[ConformalityVector],
    labels: Sequence[str],
    provenances: Sequence[dict],
    pairing: str = "algebraic",
) -> str:
    """Vectors on ``mesh``, each keyed by vertex position."""
    doc = VectorsDocument(
        m=m,
        n=n,
        mesh=mesh_document(mesh, m, n, pairing),
        vectors=[
            VectorEntry(
                label=label,
                provenance=provenance,
                entries={point_key(x, y): k for (x, y), k in sorted(cv.by_point().items(), key=lambda i: (i[0][1], i[0][0]))},
            )
            for cv, label, provenance in zip(vectors, labels, provenances)
        ],
    )
    return _dump(doc)


class LoadedVectors(NamedTuple):
    mesh: TMesh
    vectors: list[ConformalityVector]
    labels: list[str]
    provenances: list[dict]


def parse_vectors(text: str) -> LoadedVectors:
    doc = _validated(VectorsDocument, text, _load_json(text))
    mesh = mesh_from_document(doc.mesh).tmesh
    vectors = []
    for entry in doc.vectors:
        points = {_parse_point_key(key, text): k for key, k in entry.entries.items()}
        vectors.append(ConformalityVector.from_points(mesh, doc.m, doc.n, points))
    logger.info(f"Parsed {len(vectors)} conformality vectors")
    return LoadedVectors(mesh, vectors, [e.label for e in doc.vectors], [e.provenance for e in doc.vectors])


def read_vectors(path: Union[str, Path]) -> LoadedVectors:
    return parse_vectors(Path(path).read_text(encoding="utf-8"))


def document_format(text: str) -> str:
    """The ``format`` field of a document, for commands accepting either kind."""
    return str(_load_json(text).get("format", ""))
