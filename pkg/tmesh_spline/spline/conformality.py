"""Conformality vectors and the splines they represent.

A conformality vector assigns a factor to every vertex of a T-mesh. It lies in
the conformality space W[T] when, along every l-edge with vertices at
t_1 < ... < t_r, the moments sum(k_i t_i^j) vanish for j = 0..d, with d = m on
horizontal l-edges and d = n on vertical ones.

The spline of a vector is the truncated-power sum

    f(x, y) = sum_v k_v (x - x_v)_+^m (y - y_v)_+^n

which is a C^(m-1, n-1) piecewise polynomial on the mesh, vanishing outside it,
exactly when the vector lies in W.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple, Optional, Sequence

from tmesh_spline.algebra.linear import LinearSystem, normalize_integer, nullspace_basis
from tmesh_spline.algebra.polynomial import (
    POLY_RING,
    X,
    Y,
    at,
    coefficients,
    divisible_by_power,
    scaled_derivative,
    truncated_term,
)
from tmesh_spline.config import oracle_config, spline_config
from tmesh_spline.errors import DegenerateKnotsError, NotConformalError, NotInteriorError
from tmesh_spline.mesh import HORIZONTAL, VERTICAL, LEdge, TMesh

logger = logging.getLogger(__name__)

Point = tuple[Fraction, Fraction]


def ledge_degree(ledge: LEdge, m: int, n: int) -> int:
    return m if ledge.orientation == HORIZONTAL else n


def ledge_system(ledge: LEdge, degree: int, *, shifted: bool = False) -> LinearSystem:
    """Moment rows sum(k_i t_i^j) = 0, j = 0..degree, over the l-edge's vertices."""
    origin = ledge.knots[0] if shifted else Fraction(0)
    rows = tuple(
        tuple((vid, (t - origin) ** j) for vid, t in zip(ledge.vertices, ledge.knots))
        for j in range(degree + 1)
    )
    return LinearSystem(tuple(ledge.vertices), rows, tuple((ledge.id, j) for j in range(degree + 1)))


def assemble_W(mesh: TMesh, m: int, n: int, *, shifted: Optional[bool] = None) -> LinearSystem:
    """Moment systems of every l-edge, boundary ones included, over all vertices."""
    shifted = oracle_config.shifted_moments if shifted is None else shifted
    columns = tuple(v.id for v in mesh.vertices)
    rows, origins = [], []
    for ledge in mesh.ledges:
        local = ledge_system(ledge, ledge_degree(ledge, m, n), shifted=shifted)
        rows.extend(local.rows)
        origins.extend(local.origins)
    return LinearSystem(columns, tuple(rows), tuple(origins))


@dataclass(frozen=True, eq=False)
class ConformalityVector:
    """Per-vertex factors; absent vertices carry factor zero."""

    entries: Mapping[int, Fraction]
    mesh: TMesh
    m: int
    n: int

    def __getitem__(self, vertex_id: int) -> Fraction:
        return self.entries.get(vertex_id, Fraction(0))

    @property
    def support(self) -> list[int]:
        return sorted(v for v, k in self.entries.items() if k != 0)

    @property
    def is_zero(self) -> bool:
        return not self.support

    def residuals(self) -> dict[tuple[int, int], Fraction]:
        """Nonzero moment residuals keyed by (l-edge id, j)."""
        sums: dict[tuple[int, int], Fraction] = {}
        for vid in self.support:
            v, k = self.mesh.vertices[vid], self.entries[vid]
            for orientation, ledge_id in self.mesh.vertex_lines[vid].items():
                t = v.x if orientation == HORIZONTAL else v.y
                degree = self.m if orientation == HORIZONTAL else self.n
                for j in range(degree + 1):
                    sums[(ledge_id, j)] = sums.get((ledge_id, j), Fraction(0)) + k * t ** j
        return {key: value for key, value in sums.items() if value != 0}

    def is_conformal(self) -> bool:
        return not self.residuals()

    def by_point(self) -> dict[Point, Fraction]:
        vertices = self.mesh.vertices
        return {(vertices[v].x, vertices[v].y): self.entries[v] for v in self.support}

    def restricted(self, vertex_ids: Sequence[int]) -> list[Fraction]:
        return [self[v] for v in vertex_ids]

    def scaled(self, factor: Fraction) -> "ConformalityVector":
        return ConformalityVector({v: k * factor for v, k in self.entries.items()}, self.mesh, self.m, self.n)

    def transfer(self, mesh: TMesh) -> "ConformalityVector":
        """Same factors at the same points of another mesh."""
        return ConformalityVector.from_points(mesh, self.m, self.n, self.by_point())

    @classmethod
    def from_points(cls, mesh: TMesh, m: int, n: int, points: Mapping[Point, Fraction]) -> "ConformalityVector":
        entries = {}
        for (x, y), k in points.items():
            if k == 0:
                continue
            vid = mesh.point_index.get((x, y))
            if vid is None:
                raise NotConformalError(f"nonzero factor at ({x}, {y}), which is not a vertex of the mesh")
            entries[vid] = Fraction(k)
        return cls(entries, mesh, m, n)


def bspline_conformality(knots: Sequence[Fraction], degree: int) -> tuple[Fraction, ...]:
    """The conformality vector of the univariate B-spline on ``degree + 2`` knots.

    Minimal integer vector, first entry positive; entries alternate in sign.
    """
    knots = [Fraction(t) for t in knots]
    if len(knots) != degree + 2:
        raise DegenerateKnotsError(f"degree {degree} needs {degree + 2} knots, got {len(knots)}")
    if any(a >= b for a, b in zip(knots, knots[1:])):
        raise DegenerateKnotsError(f"knots must be strictly increasing: {[str(t) for t in knots]}")
    rows = tuple(tuple((i, t ** j) for i, t in enumerate(knots)) for j in range(degree + 1))
    (vector,) = nullspace_basis(LinearSystem(tuple(range(len(knots))), rows))
    return tuple(normalize_integer([vector.get(i, Fraction(0)) for i in range(len(knots))]))


def tensor_conformality(k1: Sequence[Fraction], k2: Sequence[Fraction]) -> list[list[Fraction]]:
    """Outer product, entry [p][q] = k1[p] * k2[q]."""
    return [[Fraction(a) * Fraction(b) for b in k2] for a in k1]


def lay_tensor(
    mesh: TMesh,
    m: int,
    n: int,
    xs: Sequence[Fraction],
    ys: Sequence[Fraction],
    k1: Sequence[Fraction],
    k2: Sequence[Fraction],
) -> ConformalityVector:
    """Place k1 (x) k2 on the grid points (xs[p], ys[q]) of ``mesh``."""
    grid = tensor_conformality(k1, k2)
    points = {(x, y): grid[p][q] for p, x in enumerate(xs) for q, y in enumerate(ys)}
    return ConformalityVector.from_points(mesh, m, n, points)


@dataclass(frozen=True, eq=False)
class SplineFn:
    cv: ConformalityVector

    @property
    def mesh(self) -> TMesh:
        return self.cv.mesh

    @property
    def m(self) -> int:
        return self.cv.m

    @property
    def n(self) -> int:
        return self.cv.n


def _require_conformal(cv: ConformalityVector, check: Optional[bool]) -> None:
    check = spline_config.check_conformality if check is None else check
    if check:
        residuals = cv.residuals()
        if residuals:
            (ledge_id, j), value = next(iter(sorted(residuals.items())))
            raise NotConformalError(
                f"moment {j} of l-edge {ledge_id} is {value}, not zero",
                {"failing_rows": len(residuals)},
            )


def spline_of(cv: ConformalityVector, *, check: Optional[bool] = None) -> SplineFn:
    _require_conformal(cv, check)
    return SplineFn(cv)


def _positive_power(t: Fraction, d: int) -> Fraction:
    return t ** d if t > 0 else Fraction(0)


def eval_spline(f: SplineFn, x: Fraction, y: Fraction, *, check: Optional[bool] = None) -> Fraction:
    _require_conformal(f.cv, check)
    x, y = Fraction(x), Fraction(y)
    total = Fraction(0)
    vertices = f.mesh.vertices
    for vid in f.cv.support:
        v = vertices[vid]
        total += f.cv.entries[vid] * _positive_power(x - v.x, f.m) * _positive_power(y - v.y, f.n)
    return total


def _polynomial_where(f: SplineFn, active: Callable[[Fraction, Fraction], bool]):
    poly = POLY_RING.zero
    vertices = f.mesh.vertices
    for vid in f.cv.support:
        v = vertices[vid]
        if active(v.x, v.y):
            poly += truncated_term(f.cv.entries[vid], v.x, v.y, f.m, f.n)
    return poly


def polynomial_at(f: SplineFn, x: Fraction, y: Fraction):
    """Polynomial piece containing a point that lies on no mesh line."""
    return _polynomial_where(f, lambda vx, vy: vx < x and vy < y)


def piecewise_polynomials(f: SplineFn, *, check: Optional[bool] = None) -> dict[int, object]:
    """Cell id -> polynomial of bidegree at most (m, n)."""
    _require_conformal(f.cv, check)
    return {cell.id: polynomial_at(f, *cell.center) for cell in f.mesh.cells}


def outer_polynomials(f: SplineFn) -> dict[str, object]:
    """Pieces beyond the right and upper sides of the mesh, band by band."""
    d = f.mesh.domain
    beyond_x, beyond_y = d.xmax + 1, d.ymax + 1
    ys = sorted({v.y for v in f.mesh.vertices})
    xs = sorted({v.x for v in f.mesh.vertices})
    pieces = {}
    for a, b in zip(ys, ys[1:]):
        pieces[f"right:{a}..{b}"] = polynomial_at(f, beyond_x, (a + b) / 2)
    for a, b in zip(xs, xs[1:]):
        pieces[f"top:{a}..{b}"] = polynomial_at(f, (a + b) / 2, beyond_y)
    pieces["corner"] = polynomial_at(f, beyond_x, beyond_y)
    return pieces


class CofactorTriple(NamedTuple):
    """a(y) and b(x) as coefficient lists by ascending power, and the factor k."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    k: Fraction


def extract_cofactors(f1, f2, f3, f4, x0: Fraction, y0: Fraction, m: int, n: int) -> CofactorTriple:
    """Cofactors at (x0, y0) from the four surrounding pieces.

    f1 upper-left, f2 lower-left, f3 lower-right, f4 upper-right. Then
    f3 - f2 = a(y) (x - x0)^m, f1 - f2 = b(x) (y - y0)^n and k is the
    x^m y^n coefficient of f2 + f4 - f1 - f3.
    """
    a_poly = at(scaled_derivative(f3 - f2, X, m), X, x0)
    b_poly = at(scaled_derivative(f1 - f2, Y, n), Y, y0)
    a_coeffs, b_coeffs = coefficients(a_poly), coefficients(b_poly)
    mixed = coefficients(f2 + f4 - f1 - f3)
    return CofactorTriple(
        a=tuple(a_coeffs.get((0, j), Fraction(0)) for j in range(n + 1)),
        b=tuple(b_coeffs.get((i, 0), Fraction(0)) for i in range(m + 1)),
        k=mixed.get((m, n), Fraction(0)),
    )


def quadrant_polynomials(f: SplineFn, x0: Fraction, y0: Fraction):
    """(upper-left, lower-left, lower-right, upper-right) pieces around (x0, y0)."""
    return (
        _polynomial_where(f, lambda vx, vy: vx < x0 and vy <= y0),
        _polynomial_where(f, lambda vx, vy: vx < x0 and vy < y0),
        _polynomial_where(f, lambda vx, vy: vx <= x0 and vy < y0),
        _polynomial_where(f, lambda vx, vy: vx <= x0 and vy <= y0),
    )


def cofactors_at(f: SplineFn, vertex_id: int) -> CofactorTriple:
    v = f.mesh.vertices[vertex_id]
    if not v.interior:
        raise NotInteriorError(f"vertex {vertex_id} at ({v.x}, {v.y}) lies on the boundary")
    return extract_cofactors(*quadrant_polynomials(f, v.x, v.y), v.x, v.y, f.m, f.n)


def smoothing_cofactor(f: SplineFn, edge: tuple[int, int]):
    """c with (right - left) = c(y) (x - x0)^m across a vertical edge, or
    (upper - lower) = c(x) (y - y0)^n across a horizontal one."""
    a, b = (f.mesh.vertices[i] for i in edge)
    cx, cy = (a.x + b.x) / 2, (a.y + b.y) / 2
    if a.x == b.x:
        jump = _polynomial_where(f, lambda vx, vy: vx <= cx and vy < cy) - polynomial_at(f, cx, cy)
        gen, root, power = X, cx, f.m
    else:
        jump = _polynomial_where(f, lambda vx, vy: vx < cx and vy <= cy) - polynomial_at(f, cx, cy)
        gen, root, power = Y, cy, f.n
    if not divisible_by_power(jump, gen, root, power):
        raise NotConformalError(f"jump across edge {edge} is not divisible by the {power}-th power of the edge line")
    return scaled_derivative(jump, gen, power)


def vanished_vertices(cv: ConformalityVector) -> list[int]:
    """Interior vertices whose factor is zero."""
    return [v.id for v in cv.mesh.vertices if v.interior and cv[v.id] == 0]


def w_nullspace(mesh: TMesh, m: int, n: int) -> list[ConformalityVector]:
    """Oracle basis of W[mesh]."""
    return [ConformalityVector(vec, mesh, m, n) for vec in nullspace_basis(assemble_W(mesh, m, n))]
