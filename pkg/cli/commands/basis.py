"""Basis and evaluation commands."""
import logging
import random
from collections import Counter

from cli.commands import CommandResult
from cli.meshfile import point_key, read_mesh, read_vectors, serialize_vectors
from cli.models import VerificationReportModel
from tmesh_spline.config import spline_config
from tmesh_spline.errors import MeshSemanticError, NotInClassError
from tmesh_spline.mesh import as_coord, extend, format_coord
from tmesh_spline.spline import (
    BasisFn,
    SplineFn,
    census,
    construct_basis,
    dim_formula,
    eval_spline,
    order_ledges,
    verify_basis,
)

logger = logging.getLogger(__name__)


def _provenance(fn: BasisFn) -> dict:
    p = fn.provenance
    orientation, fixed, lo, hi = p.ledge
    return {
        "level": p.level,
        "step": p.step,
        "ledge": [orientation, format_coord(fixed), format_coord(lo), format_coord(hi)],
        "label": p.label,
        "window": [format_coord(t) for t in p.window],
        "transverse": [format_coord(t) for t in p.transverse],
        "alpha": p.alpha,
        "correction_used": p.correction_used,
        "cut_points": [point_key(x, y) for x, y in p.cut_points],
        "case": p.case,
        "corrector": [format_coord(t) for t in p.corrector],
        "k1": None if p.k1 is None else format_coord(p.k1),
        "k2": None if p.k2 is None else format_coord(p.k2),
    }


def run_basis(args) -> CommandResult:
    loaded = read_mesh(args.mesh)
    hm = loaded.hierarchical
    if hm is None:
        raise NotInClassError("basis construction needs a mesh generated from a refinement script")
    pairing = args.extension_pairing or loaded.pairing
    seed = args.seed if args.seed is not None else spline_config.random_seed
    extended = extend(hm.mesh, hm.m, hm.n, pairing=pairing, spacing=args.spacing, rng=random.Random(seed))
    ordered = order_ledges(extended, hm.forest, hm.m, hm.n, tie_break=args.tie_break)
    fns = construct_basis(extended, ordered)
    expected = dim_formula(census(extended, hm.forest), hm.m, hm.n)
    verification = verify_basis(fns, extended, hm.m, hm.n, expected)

    per_level = Counter(f.provenance.level for f in fns)
    model = VerificationReportModel(
        status="ok" if verification.passed else "failed",
        count=verification.count,
        expected=verification.expected,
        count_ok=verification.count_ok,
        independent=verification.independent,
        conformal=verification.conformal,
        span_ok=verification.span_ok,
        per_level={str(level): per_level[level] for level in sorted(per_level)},
        corrections=sum(1 for f in fns if f.provenance.correction_used),
    )
    document = serialize_vectors(
        extended,
        hm.m,
        hm.n,
        [f.cv for f in fns],
        [f"N{i + 1}" for i in range(len(fns))],
        [_provenance(f) for f in fns],
        pairing,
    )
    levels = " + ".join(str(per_level[level]) for level in sorted(per_level))
    summary = f"basis: {levels} = {len(fns)} functions, verification {'passed' if verification.passed else 'FAILED'}"
    return CommandResult(0 if verification.passed else 1, model.model_dump(mode="json"), summary, document)


def parse_point(text: str):
    x, y = text.split(",")
    return as_coord(x), as_coord(y)


def run_eval(args) -> CommandResult:
    loaded = read_vectors(args.vectors)
    chosen = args.index if args.index else range(len(loaded.vectors))
    missing = [i for i in chosen if not 0 <= i < len(loaded.vectors)]
    if missing:
        raise MeshSemanticError(f"no vectors at indices {missing}; the document has {len(loaded.vectors)}")
    values = {}
    for i in chosen:
        f = SplineFn(loaded.vectors[i])
        values[loaded.labels[i]] = {
            point_key(x, y): format_coord(eval_spline(f, x, y, check=not args.no_check)) for x, y in args.point
        }
    report = {"status": "ok", "values": values}
    return CommandResult(0, report, f"eval: {len(values)} splines at {len(args.point)} points")
