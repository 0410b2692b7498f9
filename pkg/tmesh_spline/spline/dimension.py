"""Spline space dimension: closed form on generated meshes and two exact oracles.

Three paths compute dim S(m, n, m-1, n-1, T):

- ``formula``: (m-1)(n-1) + V+ - (m-1) E_H - (n-1) E_V + delta on the census of
  the extended mesh; only for meshes produced by hierarchical generation.
- ``conformality``: nullity of the l-edge moment system of the extended mesh.
- ``cellwise``: nullity of the cell-by-cell smoothness system on T itself.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import TopologicalSorter
from math import comb, factorial
from typing import Optional, Sequence, Union

from tmesh_spline.algebra.linear import LinearSystem, echelon_rank, nullspace_dim
from tmesh_spline.algebra.polynomial import falling
from tmesh_spline.config import spline_config
from tmesh_spline.errors import NegativeResultError, NotInClassError
from tmesh_spline.mesh import (
    HierarchicalMesh,
    SubdomainForest,
    TMesh,
    extend,
    interior_ledges,
    isolated_counts,
    vertex_census,
)
from tmesh_spline.spline.conformality import assemble_W

logger = logging.getLogger(__name__)

PATHS = ("formula", "conformality", "cellwise")


@dataclass(frozen=True)
class Census:
    Vplus: int
    E_H: int
    E_V: int
    delta: int
    delta_per_level: tuple[int, ...] = ()

    def __post_init__(self):
        if min(self.Vplus, self.E_H, self.E_V, self.delta) < 0:
            raise ValueError("census counts must be nonnegative")
        if self.delta_per_level and sum(self.delta_per_level) != self.delta:
            raise ValueError("delta must equal the sum of the per-level counts")


def census(extended: TMesh, forest: Optional[SubdomainForest]) -> Census:
    """Crossing vertices and interior l-edges of the extended mesh, isolated subdomains of the forest."""
    horizontal, vertical = interior_ledges(extended)
    if forest is None:
        delta, per_level = 0, [0]
    else:
        delta, per_level = isolated_counts(forest)
    return Census(
        Vplus=vertex_census(extended).crossing,
        E_H=len(horizontal),
        E_V=len(vertical),
        delta=delta,
        delta_per_level=tuple(per_level),
    )


def dim_formula(c: Census, m: int, n: int) -> int:
    value = (m - 1) * (n - 1) + c.Vplus - (m - 1) * c.E_H - (n - 1) * c.E_V + c.delta
    if value < 0:
        raise NegativeResultError(
            f"closed form gave {value} for census {c}; the mesh is not of class T_{{{m},{n}}}",
            {"value": value},
        )
    return value


def dim_unrestricted_formula(c: Census) -> int:
    """Biquadratic count V+ - E + delta + 1."""
    return c.Vplus - (c.E_H + c.E_V) + c.delta + 1


def dim_conformality_oracle(extended: TMesh, m: int, n: int) -> int:
    return nullspace_dim(assemble_W(extended, m, n))


def _neighbours(cells, lower_side, upper_side, lo, hi):
    """Pairs of cells whose ``upper_side`` meets the other's ``lower_side`` along a positive-length piece."""
    by_side: dict[Fraction, list] = {}
    for cell in cells:
        by_side.setdefault(getattr(cell, lower_side), []).append(cell)
    pairs = []
    for cell in cells:
        for other in by_side.get(getattr(cell, upper_side), []):
            if min(getattr(cell, hi), getattr(other, hi)) > max(getattr(cell, lo), getattr(other, lo)):
                pairs.append((cell, other))
    return pairs


def _jump_rows(near, far, m: int, n: int, across_x: bool):
    """Rows forcing d^j/ds^j (P_far - P_near) = 0 on the line between two cells, j below the degree in s.

    Unknown ``(cell, a, b)`` is the coefficient of (x - x0)^a (y - y0)^b about
    the cell's lower-left corner. ``near`` lies left of or below the line and
    ``far`` beyond it; either is None on the boundary. Both sides are written in
    powers of the tangential coordinate about the corner of ``far`` (of
    ``near`` without one), so the far cell enters every row once.
    """
    d_normal, d_tangent = (m, n) if across_x else (n, m)
    ref = far if far is not None else near

    def key(cell, normal: int, tangent: int):
        return (cell.id, normal, tangent) if across_x else (cell.id, tangent, normal)

    if near is not None:
        width = near.x1 - near.x0 if across_x else near.y1 - near.y0
        shift = ref.y0 - near.y0 if across_x else ref.x0 - near.x0
    rows = []
    for j in range(d_normal):
        for k in range(d_tangent + 1):
            row = []
            if far is not None:
                row.append((key(far, j, k), Fraction(factorial(j))))
            if near is not None:
                for a in range(j, d_normal + 1):
                    for b in range(k, d_tangent + 1):
                        c = falling(a, j) * width ** (a - j) * comb(b, k) * shift ** (b - k)
                        if c:
                            row.append((key(near, a, b), -Fraction(c)))
            rows.append(tuple(row))
    return rows


def sweep_order(mesh: TMesh) -> list:
    """Cells with every left and lower neighbour ahead of them."""
    sorter: TopologicalSorter = TopologicalSorter()
    for cell in sorted(mesh.cells, key=lambda c: (c.x0, c.y0)):
        sorter.add(cell.id)
    for near, far in _neighbours(mesh.cells, "x0", "x1", "y0", "y1") + _neighbours(mesh.cells, "y0", "y1", "x0", "x1"):
        sorter.add(far.id, near.id)
    by_id = {cell.id: cell for cell in mesh.cells}
    return [by_id[i] for i in sorter.static_order()]


def cellwise_system(mesh: TMesh, m: int, n: int, homogeneous: bool = False) -> LinearSystem:
    """Cell-by-cell smoothness system in shifted local monomials.

    Rows follow the sweep order of their far cell; columns run against it with
    the (m, n) coefficient of each cell first.
    """
    order = sweep_order(mesh)
    position = {cell.id: i for i, cell in enumerate(order)}
    monomials = sorted(((a, b) for a in range(m + 1) for b in range(n + 1)), reverse=True)
    columns = tuple((cell.id, a, b) for cell in reversed(order) for a, b in monomials)

    pairs = [(near, far, True) for near, far in _neighbours(mesh.cells, "x0", "x1", "y0", "y1")]
    pairs += [(near, far, False) for near, far in _neighbours(mesh.cells, "y0", "y1", "x0", "x1")]
    if homogeneous:
        d = mesh.domain
        for cell in mesh.cells:
            if cell.x0 == d.xmin:
                pairs.append((None, cell, True))
            if cell.x1 == d.xmax:
                pairs.append((cell, None, True))
            if cell.y0 == d.ymin:
                pairs.append((None, cell, False))
            if cell.y1 == d.ymax:
                pairs.append((cell, None, False))
    pairs.sort(key=lambda p: position[(p[1] if p[1] is not None else p[0]).id])
    rows = [row for near, far, across_x in pairs for row in _jump_rows(near, far, m, n, across_x)]
    return LinearSystem(columns, tuple(rows))


def dim_cellwise_oracle(mesh: TMesh, m: int, n: int, homogeneous: bool = False) -> int:
    system = cellwise_system(mesh, m, n, homogeneous)
    logger.debug(f"Cellwise system: {system.shape[0]} rows x {system.shape[1]} unknowns")
    return len(system.columns) - echelon_rank(system)


@dataclass
class DimensionReport:
    m: int
    n: int
    pairing: str
    census: Optional[Census] = None
    formula: Optional[int] = None
    conformality: Optional[int] = None
    cellwise: Optional[int] = None
    formula_error: Optional[str] = None
    timings: dict[str, float] = field(default_factory=dict)
    ledger: Optional[list[dict]] = None

    @property
    def values(self) -> dict[str, int]:
        return {
            name: value
            for name, value in (
                ("formula", self.formula),
                ("conformality", self.conformality),
                ("cellwise", self.cellwise),
            )
            if value is not None
        }

    @property
    def agreement(self) -> bool:
        return len(set(self.values.values())) <= 1


def dim_spline_space(
    mesh: Union[TMesh, HierarchicalMesh],
    m: Optional[int] = None,
    n: Optional[int] = None,
    *,
    pairing: Optional[str] = None,
    spacing: Optional[str] = None,
    rng: Optional[random.Random] = None,
    paths: Sequence[str] = PATHS,
    with_ledger: bool = False,
) -> DimensionReport:
    """Run the requested dimension paths on T (and its extension).

    Raises:
        NotInClassError: the formula is the only requested path and ``mesh`` was not generated
        ValueError: ``mesh`` is a plain T-mesh and m or n is missing
    """
    unknown = set(paths) - set(PATHS)
    if unknown:
        raise ValueError(f"unknown dimension paths {sorted(unknown)}")
    hierarchical = mesh if isinstance(mesh, HierarchicalMesh) else None
    tmesh = hierarchical.mesh if hierarchical else mesh
    if hierarchical is None and (m is None or n is None):
        missing = " and ".join(name for name, value in (("m", m), ("n", n)) if value is None)
        raise ValueError(f"a plain T-mesh carries no bidegree; pass {missing}")
    m = m if m is not None else hierarchical.m
    n = n if n is not None else hierarchical.n
    pairing = pairing or spline_config.extension_pairing
    report = DimensionReport(m=m, n=n, pairing=pairing)

    if "formula" in paths and hierarchical is None:
        error = NotInClassError("the closed form applies only to meshes generated from a refinement script")
        if set(paths) == {"formula"}:
            raise error
        report.formula_error = type(error).__name__
        logger.warning(f"Formula path refused: {error.message}")

    extended = None
    if "formula" in paths or "conformality" in paths or with_ledger:
        start = time.perf_counter()
        extended = extend(tmesh, m, n, pairing=pairing, spacing=spacing, rng=rng)
        report.timings["extend"] = time.perf_counter() - start

    if "formula" in paths and hierarchical is not None:
        start = time.perf_counter()
        report.census = census(extended, hierarchical.forest)
        report.formula = dim_formula(report.census, m, n)
        report.timings["formula"] = time.perf_counter() - start
        logger.info(f"Closed form: {report.formula} from census {report.census}")

    if "conformality" in paths:
        start = time.perf_counter()
        report.conformality = dim_conformality_oracle(extended, m, n)
        report.timings["conformality"] = time.perf_counter() - start
        logger.info(f"Conformality oracle: {report.conformality}")

    if "cellwise" in paths:
        start = time.perf_counter()
        report.cellwise = dim_cellwise_oracle(tmesh, m, n)
        report.timings["cellwise"] = time.perf_counter() - start
        logger.info(f"Cellwise oracle: {report.cellwise}")

    if with_ledger and hierarchical is not None:
        from tmesh_spline.spline.ordering import ledger, order_ledges

        ordered = order_ledges(extended, hierarchical.forest, m, n)
        report.ledger = [entry._asdict() for entry in ledger(ordered, census(extended, hierarchical.forest), m, n)]

    if not report.agreement:
        logger.error(f"Dimension paths disagree: {report.values}")
    return report
