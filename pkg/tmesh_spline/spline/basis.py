"""B-spline-based basis of the spline space on an extended hierarchical mesh.

For every non-trivial l-edge E in the removal order and every window of
d + 2 consecutive vertices of E (in the mesh E is removed from), one spline
is built whose conformality vector restricted to E is the window's univariate
B-spline vector. Which construction applies depends on E's level l, its
A-phase and alpha, the number of window vertices where two level-l l-edges
cross:

- level 0 and phases A1 to A3: a tensor-product B-spline whose transverse
  knots are lines of the level-(l - 1) subdomains holding the window;
- A4/A5 with alpha = 0, or l = 1: the same over the level-(l - 2) subdomains
  (the whole mesh when l = 1);
- alpha >= 1 with l >= 2: for the (l, l)-vertex Q, let V be the transverse
  l-edge through Q and S the level-(l - 2) subdomain holding Q. If V spans S
  the direct construction is used. Otherwise V is prolonged to the point P
  where it meets the far side of S, and f = N1 - (k1 / k2) N2, with N1 over
  R, n vertices of V inside S and P, and N2 over the n + 2 points of
  V and P nearest P, Q excluded. k1 and k2 are the factors of N1 and N2 at P.

Every precondition that fails raises UnhandledConfigurationError, as does a
resulting vector that is not conformal on the mesh E is removed from.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from tmesh_spline.algebra.linear import normalize_integer, vectors_rank
from tmesh_spline.errors import NotConformalError, UnhandledConfigurationError
from tmesh_spline.mesh import HORIZONTAL, VERTICAL, LEdge, Rect, SubdomainForest, TMesh
from tmesh_spline.spline.conformality import (
    ConformalityVector,
    SplineFn,
    assemble_W,
    bspline_conformality,
    lay_tensor,
    w_nullspace,
)
from tmesh_spline.spline.ordering import OrderedLEdges, OrderedStep, level_of

logger = logging.getLogger(__name__)

TENSOR = "tensor"
ALPHA_ZERO = "alpha0"
THROUGH = "through"
COMBINED = "combined"


class BasisProvenance(NamedTuple):
    level: int
    step: int
    ledge: tuple
    label: Optional[str]
    window: tuple[Fraction, ...]
    transverse: tuple[Fraction, ...]
    alpha: int
    correction_used: bool
    cut_points: tuple[tuple[Fraction, Fraction], ...] = ()
    case: str = TENSOR
    corrector: tuple[Fraction, ...] = ()
    k1: Optional[Fraction] = None
    k2: Optional[Fraction] = None


@dataclass(frozen=True, eq=False)
class BasisFn:
    spline: SplineFn
    provenance: BasisProvenance

    @property
    def cv(self) -> ConformalityVector:
        return self.spline.cv


class Combination(NamedTuple):
    """N1 - (k1 / k2) N2 for one window; knots are transverse coordinates."""

    cv: ConformalityVector
    p: tuple[Fraction, Fraction]
    r: Fraction
    knots_n1: tuple[Fraction, ...]
    knots_n2: tuple[Fraction, ...]
    k1: Fraction
    k2: Fraction
    value_at_p: Fraction


def _perpendicular(orientation: str) -> str:
    return VERTICAL if orientation == HORIZONTAL else HORIZONTAL


def _across(rect: Rect, orientation: str) -> tuple[Fraction, Fraction]:
    """Extent of ``rect`` transverse to lines of ``orientation``."""
    return (rect.ymin, rect.ymax) if orientation == HORIZONTAL else (rect.xmin, rect.xmax)


def _unhandled(message: str, details: dict) -> UnhandledConfigurationError:
    return UnhandledConfigurationError(message, details)


def _parallels_covering(mesh: TMesh, ledge: LEdge, lo: Fraction, hi: Fraction, window) -> list[Fraction]:
    """Fixed coordinates in [lo, hi] of l-edges parallel to ``ledge`` spanning the whole window."""
    coords = mesh.y_lines if ledge.orientation == HORIZONTAL else mesh.x_lines
    found = []
    for c in coords:
        if lo <= c <= hi:
            line = mesh.covering(ledge.orientation, c, window[0])
            if line is not None and line.hi >= window[-1]:
                found.append(c)
    return found


def _central_run(rows: Sequence[Fraction], target: Fraction, size: int):
    """The run of ``size`` consecutive rows containing ``target`` that is most central on it."""
    if target not in rows:
        return None
    idx = list(rows).index(target)
    starts = range(max(0, idx - size + 1), min(idx, len(rows) - size) + 1)
    best = min(starts, key=lambda s: (abs(2 * (idx - s) - (size - 1)), s), default=None)
    return None if best is None else tuple(rows[best:best + size])


def _transverse_span(mesh: TMesh, ledge: LEdge, window) -> tuple[Fraction, Fraction]:
    """Intersection of the spans of the transverse l-edges through the window points."""
    perpendicular = _perpendicular(ledge.orientation)
    lo, hi = None, None
    for t in window:
        line = mesh.covering(perpendicular, t, ledge.fixed)
        lo = line.lo if lo is None else max(lo, line.lo)
        hi = line.hi if hi is None else min(hi, line.hi)
    return lo, hi


def local_region(
    mesh: TMesh, forest: Optional[SubdomainForest], ledge: LEdge, window, level: int
) -> Optional[tuple[Fraction, Fraction]]:
    """Transverse extent of the level-``level`` subdomains holding a window point.

    A side on the boundary of the original domain is widened to the edge of
    the extended mesh. None when no subdomain of that level holds the window.
    """
    if forest is None or not 0 <= level < len(forest.levels):
        return None
    points = [ledge.segment.point(t) for t in window]
    rects = [s.rect for s in forest.levels[level] if any(s.rect.contains(x, y) for x, y in points)]
    if not rects:
        return None
    lo = min(_across(r, ledge.orientation)[0] for r in rects)
    hi = max(_across(r, ledge.orientation)[1] for r in rects)
    if mesh.inner_domain is not None:
        inner_lo, inner_hi = _across(mesh.inner_domain, ledge.orientation)
        outer_lo, outer_hi = _across(mesh.domain, ledge.orientation)
        lo = outer_lo if lo <= inner_lo else lo
        hi = outer_hi if hi >= inner_hi else hi
    return lo, hi


def _lay(mesh: TMesh, ledge: LEdge, window, transverse, k_along, k_across, m: int, n: int) -> ConformalityVector:
    if ledge.orientation == HORIZONTAL:
        return lay_tensor(mesh, m, n, window, transverse, k_along, k_across)
    return lay_tensor(mesh, m, n, transverse, window, k_across, k_along)


def _degrees(ledge: LEdge, m: int, n: int) -> tuple[int, int]:
    """(degree along ``ledge``, degree across it)."""
    return (m, n) if ledge.orientation == HORIZONTAL else (n, m)


def direct_tensor(
    mesh: TMesh, ledge: LEdge, window, m: int, n: int, region: Optional[tuple[Fraction, Fraction]] = None
):
    """Tensor-product B-spline through the window, as (vector, transverse knots), or None.

    Transverse knots are parallels spanning the window inside ``region`` and
    inside every transverse line through the window.
    """
    along, across = _degrees(ledge, m, n)
    lo, hi = _transverse_span(mesh, ledge, window)
    if region is not None:
        lo, hi = max(lo, region[0]), min(hi, region[1])
    transverse = _central_run(_parallels_covering(mesh, ledge, lo, hi, window), ledge.fixed, across + 2)
    if transverse is None:
        return None
    k_along = bspline_conformality(window, along)
    cv = _lay(mesh, ledge, window, transverse, k_along, bspline_conformality(transverse, across), m, n)
    return cv, transverse


def _alpha(mesh: TMesh, ledge: LEdge, window) -> int:
    """Number of window vertices formed by two l-edges of the l-edge's own level."""
    return len(_ll_vertices(mesh, ledge, window))


def _ll_vertices(mesh: TMesh, ledge: LEdge, window) -> list[Fraction]:
    level = level_of(ledge)
    if level == 0:
        return []
    perpendicular = _perpendicular(ledge.orientation)
    return [t for t in window if level_of(mesh.covering(perpendicular, t, ledge.fixed)) == level]


def _holding_subdomain(forest: SubdomainForest, level: int, x: Fraction, y: Fraction):
    for sub in forest.levels[level] if 0 <= level < len(forest.levels) else ():
        if sub.rect.contains(x, y):
            return sub
    return None


def _spans(line: LEdge, lo: Fraction, hi: Fraction) -> bool:
    return line.lo <= lo and line.hi >= hi


def two_spline_combination(
    mesh: TMesh,
    forest: SubdomainForest,
    ledge: LEdge,
    window,
    q_at: Fraction,
    level: int,
    m: int,
    n: int,
    details: Optional[dict] = None,
) -> Combination:
    """f = N1 - (k1 / k2) N2 for a window whose (l, l)-vertex at ``q_at`` has a short transverse l-edge.

    Raises:
        UnhandledConfigurationError: a precondition of the construction fails or f is not conformal
    """
    details = dict(details or {})
    along, across = _degrees(ledge, m, n)
    q = ledge.segment.point(q_at)
    sigma = _holding_subdomain(forest, level - 2, *q)
    if sigma is None:
        raise _unhandled(f"no level-{level - 2} subdomain holds the (l, l)-vertex {q}", details)
    s_lo, s_hi = _across(sigma.rect, ledge.orientation)
    v = mesh.covering(_perpendicular(ledge.orientation), q_at, ledge.fixed)
    if _spans(v, s_lo, s_hi):
        raise _unhandled(f"transverse l-edge through {q} spans its level-{level - 2} subdomain", details)
    if v.lo <= s_lo < v.hi < s_hi:
        r, p_across = s_lo, s_hi
    elif s_lo < v.lo < s_hi <= v.hi:
        r, p_across = s_hi, s_lo
    else:
        raise _unhandled(f"transverse l-edge through {q} has both ends inside its level-{level - 2} subdomain", details)

    inside = sorted((t for t in v.knots if s_lo < t < s_hi), key=lambda t: (abs(t - p_across), t))[:across]
    if len(inside) < across or ledge.fixed not in inside:
        raise _unhandled(
            f"{len(inside)} vertices of the transverse l-edge through {q} lie inside its subdomain "
            f"nearest the cut point; {across} including the vertex itself are needed",
            details,
        )
    knots_n1 = tuple(sorted({r, p_across, *inside}))
    pool = sorted(({p_across} | set(v.knots)) - {ledge.fixed}, key=lambda t: (abs(t - p_across), t))
    if len(pool) < across + 2:
        raise _unhandled(f"too few vertices left on the transverse l-edge through {q} without it", details)
    knots_n2 = tuple(sorted(pool[: across + 2]))

    k_along = bspline_conformality(window, along)
    ky1 = dict(zip(knots_n1, bspline_conformality(knots_n1, across)))
    ky2 = dict(zip(knots_n2, bspline_conformality(knots_n2, across)))
    q_weight = k_along[list(window).index(q_at)]
    k1, k2 = q_weight * ky1[p_across], q_weight * ky2[p_across]
    if k2 == 0:
        raise _unhandled(f"corrector vanishes at the cut point of {q}", details)
    ratio = k1 / k2
    rows = tuple(sorted(set(knots_n1) | set(knots_n2)))
    combined = [ky1.get(t, Fraction(0)) - ratio * ky2.get(t, Fraction(0)) for t in rows]
    value_at_p = q_weight * combined[rows.index(p_across)]

    p = (q_at, p_across) if ledge.orientation == HORIZONTAL else (p_across, q_at)
    try:
        cv = _lay(mesh, ledge, window, rows, k_along, combined, m, n)
    except NotConformalError as error:
        raise _unhandled(f"combination for the (l, l)-vertex {q} leaves the mesh: {error}", details) from error
    if not cv.is_conformal():
        raise _unhandled(f"combination for the (l, l)-vertex {q} is not conformal on the current mesh", details)
    return Combination(cv, p, r, knots_n1, knots_n2, k1, k2, value_at_p)


def _normalized(cv: ConformalityVector, lead_vertex: int) -> ConformalityVector:
    support = cv.support
    values = normalize_integer([cv.entries[v] for v in support])
    if values[support.index(lead_vertex)] < 0:
        values = [-v for v in values]
    return ConformalityVector(dict(zip(support, values)), cv.mesh, cv.m, cv.n)


def _window_function(
    mesh: TMesh, forest: Optional[SubdomainForest], ledge: LEdge, window, step: OrderedStep, index: int, m: int, n: int
) -> tuple[ConformalityVector, BasisProvenance]:
    level = step.level
    alpha = _alpha(mesh, ledge, window)
    details = {"step": index, "alpha": alpha, "label": step.label, "level": level}
    base = dict(level=level, step=index, ledge=step.key, label=step.label, window=tuple(window), alpha=alpha)

    if level == 0 or step.label in ("A1", "A2", "A3"):
        case, region = TENSOR, local_region(mesh, forest, ledge, window, level - 1) if level >= 1 else None
    elif level == 1 or alpha == 0:
        case, region = ALPHA_ZERO, local_region(mesh, forest, ledge, window, level - 2) if level >= 2 else None
    else:
        if forest is None:
            raise _unhandled("an (l, l)-vertex needs the subdomain forest", details)
        short = []
        for q_at in _ll_vertices(mesh, ledge, window):
            sigma = _holding_subdomain(forest, level - 2, *ledge.segment.point(q_at))
            v = mesh.covering(_perpendicular(ledge.orientation), q_at, ledge.fixed)
            if sigma is None or not _spans(v, *_across(sigma.rect, ledge.orientation)):
                short.append(q_at)
        if len(short) > 1:
            raise _unhandled(
                f"window {[str(t) for t in window]} of the {ledge.orientation} l-edge at {ledge.fixed} has "
                f"{len(short)} (l, l)-vertices whose transverse l-edges stop inside their subdomain",
                details,
            )
        if short:
            combo = two_spline_combination(mesh, forest, ledge, window, short[0], level, m, n, details)
            logger.info(
                f"Combined window at {ledge.orientation} l-edge {ledge.fixed} (level {level}, {step.label}, "
                f"alpha={alpha}): cut point {combo.p}, k1={combo.k1}, k2={combo.k2}"
            )
            return combo.cv, BasisProvenance(
                **base,
                transverse=combo.knots_n1,
                correction_used=True,
                cut_points=(combo.p,),
                case=COMBINED,
                corrector=combo.knots_n2,
                k1=combo.k1,
                k2=combo.k2,
            )
        case, region = THROUGH, local_region(mesh, forest, ledge, window, level - 2)

    found = direct_tensor(mesh, ledge, window, m, n, region)
    if found is None:
        raise _unhandled(
            f"no tensor-product B-spline for window {[str(t) for t in window]} of the {ledge.orientation} "
            f"l-edge at {ledge.fixed} (level {level}, {step.label}, alpha={alpha}, {case})",
            details,
        )
    cv, transverse = found
    if not cv.is_conformal():
        raise _unhandled(f"tensor-product B-spline for window {[str(t) for t in window]} is not conformal", details)
    return cv, BasisProvenance(**base, transverse=tuple(transverse), correction_used=False, case=case)


def construct_basis(extended: TMesh, ordered: OrderedLEdges) -> list[BasisFn]:
    m, n = ordered.m, ordered.n
    functions: list[BasisFn] = []
    for index, step in enumerate(ordered.steps):
        if step.dim == 0:
            continue
        mesh = ordered.meshes[index]
        ledge = mesh.find_ledge(step.key)
        d = _degrees(ledge, m, n)[0]
        for start in range(ledge.size - d - 1):
            window = ledge.knots[start:start + d + 2]
            cv, provenance = _window_function(mesh, ordered.forest, ledge, window, step, index, m, n)
            lead = mesh.point_index[ledge.segment.point(window[0])]
            functions.append(BasisFn(SplineFn(_normalized(cv, lead).transfer(extended)), provenance))
    logger.info(f"Constructed {len(functions)} basis functions")
    return functions


@dataclass
class VerificationReport:
    count: int
    expected: int
    count_ok: bool
    independent: bool
    conformal: bool
    span_ok: bool

    @property
    def passed(self) -> bool:
        return self.count_ok and self.independent and self.conformal and self.span_ok


def verify_basis(fns: Sequence[BasisFn], extended: TMesh, m: int, n: int, expected: Optional[int] = None) -> VerificationReport:
    """Count, exact independence, membership in W and equality of spans with the oracle nullspace."""
    columns = [v.id for v in extended.vertices]
    vectors = [f.cv.transfer(extended).entries for f in fns]
    oracle = [cv.entries for cv in w_nullspace(extended, m, n)]
    dim_w = len(oracle)
    expected = dim_w if expected is None else expected
    system = assemble_W(extended, m, n)
    rank_fns = vectors_rank(vectors, columns) if vectors else 0
    stacked = vectors_rank(list(vectors) + oracle, columns) if (vectors or oracle) else 0
    report = VerificationReport(
        count=len(fns),
        expected=expected,
        count_ok=len(fns) == expected,
        independent=rank_fns == len(fns),
        conformal=all(system.satisfied_by(v) for v in vectors),
        span_ok=rank_fns == dim_w == stacked,
    )
    logger.info(f"Basis verification: {report}")
    return report


def projection_ranks(fns: Sequence[BasisFn], ordered: OrderedLEdges) -> dict[int, tuple[int, int]]:
    """Step index -> (rank of the step's functions restricted to its l-edge, dim W[E])."""
    out = {}
    for index, step in enumerate(ordered.steps):
        if step.dim == 0:
            continue
        mesh = ordered.meshes[index]
        ledge = mesh.find_ledge(step.key)
        points = [ledge.segment.point(t) for t in ledge.knots]
        rows = []
        for f in fns:
            if f.provenance.step != index:
                continue
            by_point = f.cv.by_point()
            rows.append({i: by_point.get(p, Fraction(0)) for i, p in enumerate(points)})
        out[index] = (vectors_rank(rows, list(range(len(points)))) if rows else 0, step.dim)
    return out
