"""Exact-rational regular T-meshes.

A mesh is built from axis-aligned segments. Colinear segments that touch are
merged into l-edges (maximal line segments), vertices are the points where a
horizontal and a vertical l-edge meet, and cells are recovered from their
lower-left corners. The resulting ``TMesh`` is an immutable value: every
derived lookup is a cached property.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence

from tmesh_spline.errors import DanglingSegmentError, NotRegularError, OverlapError
from tmesh_spline.mesh._base import (
    HORIZONTAL,
    VERTICAL,
    Coord,
    CoordLike,
    Rect,
    as_coord,
    logger,
)

CROSSING = "interior-crossing"
TVERTEX = "interior-T"
BOUNDARY = "boundary"

ORIGINAL = "original"
BOUNDARY_COPY = "boundary-copy"
EXTENDED = "extended"


@dataclass(frozen=True)
class Segment:
    """Axis-aligned segment ``fixed`` x [lo, hi] (or [lo, hi] x ``fixed``)."""

    orientation: str
    fixed: Coord
    lo: Coord
    hi: Coord
    level: Optional[int] = None
    provenance: str = ORIGINAL

    @classmethod
    def vertical(cls, x: CoordLike, y0: CoordLike, y1: CoordLike, **kwargs) -> "Segment":
        return cls(VERTICAL, as_coord(x), as_coord(y0), as_coord(y1), **kwargs)

    @classmethod
    def horizontal(cls, y: CoordLike, x0: CoordLike, x1: CoordLike, **kwargs) -> "Segment":
        return cls(HORIZONTAL, as_coord(y), as_coord(x0), as_coord(x1), **kwargs)

    def point(self, t: Coord) -> tuple[Coord, Coord]:
        """The point at varying coordinate ``t``."""
        return (t, self.fixed) if self.orientation == HORIZONTAL else (self.fixed, t)

    def covers(self, t: Coord) -> bool:
        return self.lo <= t <= self.hi


class Vertex(NamedTuple):
    id: int
    x: Coord
    y: Coord
    kind: str

    @property
    def interior(self) -> bool:
        return self.kind != BOUNDARY


@dataclass(frozen=True)
class LEdge:
    id: int
    orientation: str
    fixed: Coord
    lo: Coord
    hi: Coord
    vertices: tuple[int, ...]
    knots: tuple[Coord, ...]
    interior: bool
    level: Optional[int] = None
    provenance: str = ORIGINAL

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def segment(self) -> Segment:
        return Segment(self.orientation, self.fixed, self.lo, self.hi, self.level, self.provenance)

    def key(self) -> tuple:
        """Geometric identity, stable across rebuilds of the mesh."""
        return (self.orientation, self.fixed, self.lo, self.hi)


class Cell(NamedTuple):
    id: int
    x0: Coord
    x1: Coord
    y0: Coord
    y1: Coord

    @property
    def center(self) -> tuple[Coord, Coord]:
        return (self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2

    @property
    def rect(self) -> Rect:
        return Rect(self.x0, self.x1, self.y0, self.y1)

    @property
    def area(self) -> Coord:
        return (self.x1 - self.x0) * (self.y1 - self.y0)


class VertexCensus(NamedTuple):
    crossing: int
    tvertex: int
    boundary: int


@dataclass(frozen=True)
class TMesh:
    """Regular T-mesh on the rectangle ``domain``.

    ``inner_domain`` is set on extended meshes and records the rectangle the
    mesh was extended from.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[int, int], ...]
    ledges: tuple[LEdge, ...]
    cells: tuple[Cell, ...]
    domain: Rect
    inner_domain: Optional[Rect] = None

    @cached_property
    def point_index(self) -> dict[tuple[Coord, Coord], int]:
        return {(v.x, v.y): v.id for v in self.vertices}

    @cached_property
    def vertex_lines(self) -> dict[int, dict[str, int]]:
        """Vertex id -> {orientation: id of the l-edge through it}."""
        lines: dict[int, dict[str, int]] = defaultdict(dict)
        for ledge in self.ledges:
            for vid in ledge.vertices:
                lines[vid][ledge.orientation] = ledge.id
        return dict(lines)

    @cached_property
    def _lines_by_fixed(self) -> dict[tuple[str, Coord], list[LEdge]]:
        table: dict[tuple[str, Coord], list[LEdge]] = defaultdict(list)
        for ledge in self.ledges:
            table[(ledge.orientation, ledge.fixed)].append(ledge)
        for group in table.values():
            group.sort(key=lambda e: e.lo)
        return dict(table)

    @cached_property
    def x_lines(self) -> tuple[Coord, ...]:
        return tuple(sorted({e.fixed for e in self.ledges if e.orientation == VERTICAL}))

    @cached_property
    def y_lines(self) -> tuple[Coord, ...]:
        return tuple(sorted({e.fixed for e in self.ledges if e.orientation == HORIZONTAL}))

    @property
    def segments(self) -> tuple[Segment, ...]:
        return tuple(e.segment for e in self.ledges)

    @property
    def is_extended(self) -> bool:
        return self.inner_domain is not None

    @cached_property
    def is_tensor(self) -> bool:
        d = self.domain
        for e in self.ledges:
            span = (d.xmin, d.xmax) if e.orientation == HORIZONTAL else (d.ymin, d.ymax)
            if (e.lo, e.hi) != span:
                return False
        return True

    def vertex_at(self, x: Coord, y: Coord) -> Optional[Vertex]:
        vid = self.point_index.get((x, y))
        return None if vid is None else self.vertices[vid]

    def lines_at(self, orientation: str, fixed: Coord) -> list[LEdge]:
        return self._lines_by_fixed.get((orientation, fixed), [])

    def covering(self, orientation: str, fixed: Coord, t: Coord) -> Optional[LEdge]:
        """The l-edge on line ``fixed`` whose span contains ``t``."""
        for ledge in self.lines_at(orientation, fixed):
            if ledge.lo <= t <= ledge.hi:
                return ledge
        return None

    def ledge_through(self, vertex_id: int, orientation: str) -> LEdge:
        return self.ledges[self.vertex_lines[vertex_id][orientation]]

    def find_ledge(self, key: tuple) -> Optional[LEdge]:
        orientation, fixed, lo, hi = key
        for ledge in self.lines_at(orientation, fixed):
            if ledge.lo == lo and ledge.hi == hi:
                return ledge
        return None

    @property
    def boundary_ledges(self) -> list[LEdge]:
        return [e for e in self.ledges if not e.interior]


def _merge_level(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _merge_lines(segments: Iterable[Segment]) -> list[Segment]:
    groups: dict[tuple[str, Coord], list[Segment]] = defaultdict(list)
    for seg in segments:
        if seg.orientation not in (HORIZONTAL, VERTICAL):
            raise NotRegularError(f"unknown orientation {seg.orientation!r}")
        if seg.lo >= seg.hi:
            raise NotRegularError(
                f"zero-length {seg.orientation} segment at {seg.fixed}",
                {"segment": [str(seg.fixed), str(seg.lo), str(seg.hi)]},
            )
        groups[(seg.orientation, seg.fixed)].append(seg)

    lines: list[Segment] = []
    for (orientation, fixed), group in groups.items():
        group.sort(key=lambda s: (s.lo, s.hi))
        current = group[0]
        for seg in group[1:]:
            if seg.lo < current.hi:
                raise OverlapError(
                    f"colinear {orientation} segments overlap on line {fixed} over [{seg.lo}, {min(seg.hi, current.hi)}]",
                    {"fixed": str(fixed)},
                )
            if seg.lo == current.hi:
                provenance = current.provenance if current.provenance == seg.provenance else EXTENDED
                current = replace(
                    current, hi=seg.hi, level=_merge_level(current.level, seg.level), provenance=provenance
                )
            else:
                lines.append(current)
                current = seg
        lines.append(current)
    return lines


def _domain_of(lines: Sequence[Segment]) -> Rect:
    xs = [s.fixed for s in lines if s.orientation == VERTICAL]
    ys = [s.fixed for s in lines if s.orientation == HORIZONTAL]
    if not xs or not ys:
        raise NotRegularError("a T-mesh needs horizontal and vertical boundary lines")
    xs += [t for s in lines if s.orientation == HORIZONTAL for t in (s.lo, s.hi)]
    ys += [t for s in lines if s.orientation == VERTICAL for t in (s.lo, s.hi)]
    return Rect(min(xs), max(xs), min(ys), max(ys))


def _check_boundary(lines: Sequence[Segment], domain: Rect) -> None:
    expected = [
        (VERTICAL, domain.xmin, domain.ymin, domain.ymax),
        (VERTICAL, domain.xmax, domain.ymin, domain.ymax),
        (HORIZONTAL, domain.ymin, domain.xmin, domain.xmax),
        (HORIZONTAL, domain.ymax, domain.xmin, domain.xmax),
    ]
    for orientation, fixed, lo, hi in expected:
        on_line = [s for s in lines if s.orientation == orientation and s.fixed == fixed]
        if len(on_line) != 1 or (on_line[0].lo, on_line[0].hi) != (lo, hi):
            raise NotRegularError(
                f"boundary {orientation} line at {fixed} does not span [{lo}, {hi}]",
                {"orientation": orientation, "fixed": str(fixed)},
            )


def build_tmesh(segments: Iterable[Segment], inner_domain: Optional[Rect] = None) -> TMesh:
    """Build a regular T-mesh from axis-aligned segments.

    Raises:
        NotRegularError: boundary is not a rectangle or cells fail to tile it
        DanglingSegmentError: a segment end meets nothing
        OverlapError: colinear segments overlap
    """
    lines = _merge_lines(segments)
    domain = _domain_of(lines)
    _check_boundary(lines, domain)

    horizontals = sorted((s for s in lines if s.orientation == HORIZONTAL), key=lambda s: (s.fixed, s.lo))
    verticals = sorted((s for s in lines if s.orientation == VERTICAL), key=lambda s: (s.fixed, s.lo))
    vertical_x = [s.fixed for s in verticals]

    # point -> (horizontal line index, vertical line index)
    points: dict[tuple[Coord, Coord], tuple[int, int]] = {}
    on_horizontal: list[list[Coord]] = [[] for _ in horizontals]
    on_vertical: list[list[Coord]] = [[] for _ in verticals]
    for hi_idx, h in enumerate(horizontals):
        start, stop = bisect_left(vertical_x, h.lo), bisect_right(vertical_x, h.hi)
        for vi_idx in range(start, stop):
            v = verticals[vi_idx]
            if v.lo <= h.fixed <= v.hi:
                points[(v.fixed, h.fixed)] = (hi_idx, vi_idx)
                on_horizontal[hi_idx].append(v.fixed)
                on_vertical[vi_idx].append(h.fixed)

    for seg in lines:
        for t in (seg.lo, seg.hi):
            if seg.point(t) not in points:
                x, y = seg.point(t)
                raise DanglingSegmentError(
                    f"{seg.orientation} segment on line {seg.fixed} ends at ({x}, {y}) without meeting another segment",
                    {"x": str(x), "y": str(y)},
                )

    arms: dict[tuple[Coord, Coord], tuple[bool, bool, bool, bool]] = {}
    kinds: dict[tuple[Coord, Coord], str] = {}
    for (x, y), (hi_idx, vi_idx) in points.items():
        h, v = horizontals[hi_idx], verticals[vi_idx]
        right, left, up, down = h.hi > x, h.lo < x, v.hi > y, v.lo < y
        arms[(x, y)] = (right, left, up, down)
        if domain.on_boundary(x, y):
            kinds[(x, y)] = BOUNDARY
            continue
        degree = right + left + up + down
        if degree == 4:
            kinds[(x, y)] = CROSSING
        elif degree == 3:
            kinds[(x, y)] = TVERTEX
        else:
            raise DanglingSegmentError(
                f"segments meet only at a corner at ({x}, {y})", {"x": str(x), "y": str(y)}
            )

    ordered = sorted(points, key=lambda p: (p[1], p[0]))
    ids = {p: i for i, p in enumerate(ordered)}
    vertices = tuple(Vertex(ids[p], p[0], p[1], kinds[p]) for p in ordered)

    ledges: list[LEdge] = []
    edges: list[tuple[int, int]] = []
    for group, knots_per_line in ((horizontals, on_horizontal), (verticals, on_vertical)):
        for seg, knots in zip(group, knots_per_line):
            knots = sorted(knots)
            vids = tuple(ids[seg.point(t)] for t in knots)
            interior = not (
                (seg.orientation == HORIZONTAL and seg.fixed in (domain.ymin, domain.ymax))
                or (seg.orientation == VERTICAL and seg.fixed in (domain.xmin, domain.xmax))
            )
            ledges.append(
                LEdge(
                    id=len(ledges),
                    orientation=seg.orientation,
                    fixed=seg.fixed,
                    lo=seg.lo,
                    hi=seg.hi,
                    vertices=vids,
                    knots=tuple(knots),
                    interior=interior,
                    level=seg.level,
                    provenance=seg.provenance,
                )
            )
            edges.extend((min(a, b), max(a, b)) for a, b in zip(vids, vids[1:]))

    cells = _find_cells(ordered, arms, horizontals, verticals, on_horizontal, on_vertical, points)
    total = sum((c.area for c in cells), Coord(0))
    if total != domain.area:
        raise NotRegularError(
            f"cells cover area {total}, expected {domain.area}", {"covered": str(total), "domain": str(domain.area)}
        )

    mesh = TMesh(
        vertices=vertices,
        edges=tuple(sorted(edges)),
        ledges=tuple(ledges),
        cells=tuple(cells),
        domain=domain,
        inner_domain=inner_domain,
    )
    logger.debug(f"Built T-mesh: {len(vertices)} vertices, {len(ledges)} l-edges, {len(cells)} cells")
    return mesh


def _find_cells(ordered, arms, horizontals, verticals, on_horizontal, on_vertical, points) -> list[Cell]:
    sorted_h = [sorted(k) for k in on_horizontal]
    sorted_v = [sorted(k) for k in on_vertical]
    found = []
    for x, y in ordered:
        right, _, up, _ = arms[(x, y)]
        if not (right and up):
            continue
        hi_idx, vi_idx = points[(x, y)]
        row = sorted_h[hi_idx]
        x1 = next(t for t in row[row.index(x) + 1:] if arms[(t, y)][2])
        column = sorted_v[vi_idx]
        y1 = next(t for t in column[column.index(y) + 1:] if arms[(x, t)][0])
        found.append((y, x, x1, y1))
    found.sort()
    return [Cell(i, x0, x1, y0, y1) for i, (y0, x0, x1, y1) in enumerate(found)]


def tensor_mesh(xs: Sequence[CoordLike], ys: Sequence[CoordLike], level: Optional[int] = 0) -> TMesh:
    """Full tensor-product mesh on the given line coordinates."""
    xs = [as_coord(x) for x in xs]
    ys = [as_coord(y) for y in ys]
    return build_tmesh(tensor_segments(xs, ys, level))


def tensor_segments(xs: Sequence[Coord], ys: Sequence[Coord], level: Optional[int] = 0) -> list[Segment]:
    return [Segment(VERTICAL, x, ys[0], ys[-1], level) for x in xs] + [
        Segment(HORIZONTAL, y, xs[0], xs[-1], level) for y in ys
    ]


def vertex_census(mesh: TMesh) -> VertexCensus:
    counts = {CROSSING: 0, TVERTEX: 0, BOUNDARY: 0}
    for v in mesh.vertices:
        counts[v.kind] += 1
    return VertexCensus(counts[CROSSING], counts[TVERTEX], counts[BOUNDARY])


def interior_ledges(mesh: TMesh) -> tuple[list[LEdge], list[LEdge]]:
    """Interior l-edges split by orientation, each sorted by (fixed, lo)."""
    key = lambda e: (e.fixed, e.lo)
    horizontal = sorted((e for e in mesh.ledges if e.interior and e.orientation == HORIZONTAL), key=key)
    vertical = sorted((e for e in mesh.ledges if e.interior and e.orientation == VERTICAL), key=key)
    return horizontal, vertical


def associated_tensor_mesh(mesh: TMesh) -> TMesh:
    """Extend every l-edge to the boundary."""
    d = mesh.domain
    levels: dict[tuple[str, Coord], Optional[int]] = {}
    for e in mesh.ledges:
        k = (e.orientation, e.fixed)
        levels[k] = _merge_level(levels[k], e.level) if k in levels else e.level
    segments = [
        Segment(o, fixed, d.ymin, d.ymax, lvl) if o == VERTICAL else Segment(o, fixed, d.xmin, d.xmax, lvl)
        for (o, fixed), lvl in sorted(levels.items())
    ]
    return build_tmesh(segments, inner_domain=mesh.inner_domain)


def remove_ledge(mesh: TMesh, ledge_id: int) -> TMesh:
    """The mesh with one interior l-edge deleted."""
    target = mesh.ledges[ledge_id]
    if not target.interior:
        raise NotRegularError(f"cannot remove boundary l-edge {ledge_id}")
    return build_tmesh((e.segment for e in mesh.ledges if e.id != ledge_id), inner_domain=mesh.inner_domain)


def restrict(mesh: TMesh, rect: Rect) -> TMesh:
    """The part of ``mesh`` inside ``rect``; used to recover T from its extension."""
    segments = []
    for e in mesh.ledges:
        if e.orientation == VERTICAL:
            if not rect.xmin <= e.fixed <= rect.xmax:
                continue
            lo, hi = max(e.lo, rect.ymin), min(e.hi, rect.ymax)
        else:
            if not rect.ymin <= e.fixed <= rect.ymax:
                continue
            lo, hi = max(e.lo, rect.xmin), min(e.hi, rect.xmax)
        if lo < hi:
            segments.append(Segment(e.orientation, e.fixed, lo, hi, e.level, ORIGINAL))
    return build_tmesh(segments)
