"""Exact sparse linear systems with zero right-hand side.

Nullspace bases and particular solutions come from sympy's fraction-free
reduced row echelon form over ZZ (``DomainMatrix.rref_den``); rows are
cleared of denominators first. ``echelon_rank`` is a forward-only sparse
elimination over QQ for large systems where only the rank is needed.
"""

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Row = tuple[tuple[Hashable, Fraction], ...]


@dataclass(frozen=True)
class LinearSystem:
    """Homogeneous system: one column per key, rows as sparse (key, coefficient) lists.

    ``origins[i]`` names what produced row ``i``, e.g. ``(ledge_id, j)``.
    """

    columns: tuple[Hashable, ...]
    rows: tuple[Row, ...] = ()
    origins: tuple[tuple, ...] = field(default=())

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.columns)

    def stack(self, other: "LinearSystem") -> "LinearSystem":
        if other.columns != self.columns:
            raise ValueError("stacked systems must share their columns")
        return LinearSystem(self.columns, self.rows + other.rows, self.origins + other.origins)

    def residuals(self, vector: Mapping[Hashable, Fraction]) -> list[Fraction]:
        return [sum((c * vector.get(k, 0) for k, c in row), Fraction(0)) for row in self.rows]

    def satisfied_by(self, vector: Mapping[Hashable, Fraction]) -> bool:
        return all(r == 0 for r in self.residuals(vector))


def _integer_row(row: Row, index: Mapping[Hashable, int], scale_extra: Optional[Fraction] = None):
    denominators = [c.denominator for _, c in row if c != 0]
    if scale_extra is not None and scale_extra != 0:
        denominators.append(scale_extra.denominator)
    factor = lcm(*denominators) if denominators else 1
    entries = {}
    for key, c in row:
        if c != 0:
            j = index[key]
            entries[j] = entries.get(j, 0) + int(c * factor)
    extra = int(scale_extra * factor) if scale_extra is not None else 0
    return {j: v for j, v in entries.items() if v != 0}, extra


def _rref(dod: dict, nrows: int, ncols: int):
    """(rref entries as dict of dicts, denominator, pivots) over ZZ."""
    matrix = DomainMatrix({i: {j: ZZ(v) for j, v in r.items()} for i, r in dod.items() if r}, (nrows, ncols), ZZ)
    reduced, den, pivots = matrix.rref_den()
    entries = {i: {j: int(v) for j, v in r.items()} for i, r in reduced.to_sdm().items()}
    return entries, int(den), tuple(pivots)


def _as_matrix(system: LinearSystem):
    index = {k: j for j, k in enumerate(system.columns)}
    dod = {}
    for i, row in enumerate(system.rows):
        entries, _ = _integer_row(row, index)
        if entries:
            dod[i] = entries
    return dod


def rank(system: LinearSystem) -> int:
    dod = _as_matrix(system)
    if not dod:
        return 0
    _, _, pivots = _rref(dod, len(system.rows), len(system.columns))
    return len(pivots)


def nullspace_dim(system: LinearSystem) -> int:
    """Number of columns minus the exact rank."""
    return len(system.columns) - rank(system)


def normalize_integer(values: Sequence[Fraction]) -> list[Fraction]:
    """Scale to the minimal integer vector whose first nonzero entry is positive."""
    nonzero = [Fraction(v) for v in values if v != 0]
    if not nonzero:
        return [Fraction(0) for _ in values]
    factor = lcm(*(v.denominator for v in nonzero))
    ints = [int(Fraction(v) * factor) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    sign = 1 if next(v for v in ints if v != 0) > 0 else -1
    return [Fraction(sign * v // g) for v in ints]


def nullspace_basis(system: LinearSystem) -> list[dict[Hashable, Fraction]]:
    """Exact nullspace basis, one vector per free column of the reduced echelon form.

    Each vector is the minimal integer vector whose first nonzero entry is positive.
    """
    ncols = len(system.columns)
    dod = _as_matrix(system)
    if dod:
        reduced, den, pivots = _rref(dod, len(system.rows), ncols)
    else:
        reduced, den, pivots = {}, 1, ()
    pivot_rows = {p: i for i, p in enumerate(pivots)}
    basis = []
    for free in range(ncols):
        if free in pivot_rows:
            continue
        values = [Fraction(0)] * ncols
        values[free] = Fraction(den)
        for p, i in pivot_rows.items():
            values[p] = Fraction(-reduced.get(i, {}).get(free, 0))
        values = normalize_integer(values)
        basis.append({system.columns[j]: v for j, v in enumerate(values) if v != 0})
    return basis


def solve(system: LinearSystem, rhs: Sequence[Fraction]) -> Optional[dict[Hashable, Fraction]]:
    """A particular solution of ``rows . x = rhs`` (free columns set to zero), or None."""
    if len(rhs) != len(system.rows):
        raise ValueError("right-hand side length does not match the row count")
    index = {k: j for j, k in enumerate(system.columns)}
    ncols = len(system.columns)
    dod = {}
    for i, (row, b) in enumerate(zip(system.rows, rhs)):
        entries, extra = _integer_row(row, index, Fraction(b))
        if extra:
            entries[ncols] = extra
        if entries:
            dod[i] = entries
    if not dod:
        return {}
    reduced, den, pivots = _rref(dod, len(system.rows), ncols + 1)
    if ncols in pivots:
        return None
    solution = {}
    for i, p in enumerate(pivots):
        value = Fraction(reduced.get(i, {}).get(ncols, 0), den)
        if value != 0:
            solution[system.columns[p]] = value
    return solution


def vectors_rank(vectors: Iterable[Mapping[Hashable, Fraction]], columns: Sequence[Hashable]) -> int:
    """Exact rank of the matrix whose rows are ``vectors``."""
    rows = tuple(tuple(v.items()) for v in vectors)
    return rank(LinearSystem(tuple(columns), rows))


def echelon_rank(system: LinearSystem) -> int:
    """Exact rank by sparse forward elimination over QQ.

    Rows are taken in order; each is reduced by the stored pivot rows at its
    leading (smallest-index) column until that column has no pivot, where it
    becomes one. Pivot rows are never back-substituted, so fill stays local
    when the column order puts each row's newest unknown first.
    """
    index = {k: j for j, k in enumerate(system.columns)}
    pivots: dict[int, dict[int, object]] = {}
    for row in system.rows:
        current: dict[int, object] = {}
        for key, c in row:
            if c != 0:
                j = index[key]
                current[j] = current.get(j, QQ.zero) + QQ(c.numerator, c.denominator)
        current = {j: v for j, v in current.items() if v}
        queue = list(current)
        heapq.heapify(queue)
        while queue:
            lead = heapq.heappop(queue)
            value = current.get(lead)
            if not value:
                continue
            pivot = pivots.get(lead)
            if pivot is None:
                inverse = QQ.one / value
                pivots[lead] = {j: v * inverse for j, v in current.items()}
                break
            for j, v in pivot.items():
                updated = current.get(j, QQ.zero) - value * v
                if updated:
                    if j not in current:
                        heapq.heappush(queue, j)
                    current[j] = updated
                else:
                    current.pop(j, None)
    logger.debug(f"Echelon rank {len(pivots)} of a {len(system.rows)} x {len(system.columns)} system")
    return len(pivots)
