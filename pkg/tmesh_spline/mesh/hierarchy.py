"""Hierarchical T-meshes refined subdomain by subdomain.

Each level's refined regions are split into (m, n)-subdomains of
(m-1) x (n-1) cells of the region's local tensor mesh, with a smaller
leftover block at the right and upper sides. A refinement script names, per
level, the subdomains whose cells are split at their midpoints.

Subdomain addresses are paths of (column, row) pairs, one pair per level,
written ``"1,1/0,0"``: subdomain (0, 0) of the refined level-0 subdomain (1, 1).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Annotated, NamedTuple, Optional, Sequence

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, field_validator, model_validator
from pydantic_core import PydanticCustomError

from tmesh_spline.errors import AlreadySubdividedError, DegenerateRegionError, StaleAddressError
from tmesh_spline.mesh._base import HORIZONTAL, VERTICAL, Coord, Rect, as_coord, format_coord, logger
from tmesh_spline.mesh.core import Segment, TMesh, build_tmesh, tensor_segments

Address = tuple[tuple[int, int], ...]


def _parse_rational(value):
    try:
        return as_coord(value)
    except (TypeError, ValueError):
        raise PydanticCustomError("rational_syntax", "malformed rational {value}", {"value": str(value)})


Rational = Annotated[Fraction, BeforeValidator(_parse_rational), PlainSerializer(format_coord, return_type=str)]


def parse_address(text: str) -> Address:
    pairs = []
    for part in text.strip().split("/"):
        col, row = part.split(",")
        pairs.append((int(col), int(row)))
    return tuple(pairs)


def format_address(address: Address) -> str:
    return "/".join(f"{col},{row}" for col, row in address)


class HierSpec(BaseModel):
    """Refinement script for a hierarchical T-mesh of class T_{m,n}.

    ``script[k]`` lists the level-k subdomains to subdivide.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: int = Field(ge=1)
    n: int = Field(ge=1)
    p: int = Field(ge=1)
    q: int = Field(ge=1)
    x_coords: Optional[list[Rational]] = None
    y_coords: Optional[list[Rational]] = None
    script: list[list[str]] = Field(default_factory=list)

    @field_validator("script")
    @classmethod
    def _normalize_addresses(cls, script: list[list[str]]) -> list[list[str]]:
        normalized = []
        for level, addresses in enumerate(script):
            seen = []
            for text in addresses:
                try:
                    address = parse_address(text)
                except ValueError:
                    raise ValueError(f"malformed subdomain address {text!r} at level {level}")
                if len(address) != level + 1:
                    raise ValueError(f"address {text!r} has {len(address)} parts, level {level} needs {level + 1}")
                canonical = format_address(address)
                if canonical in seen:
                    raise ValueError(f"address {canonical!r} repeated at level {level}")
                seen.append(canonical)
            normalized.append(seen)
        return normalized

    @model_validator(mode="after")
    def _check_coordinates(self) -> "HierSpec":
        for name, coords, count in (("x_coords", self.x_coords, self.p), ("y_coords", self.y_coords, self.q)):
            if coords is None:
                continue
            if len(coords) != count + 1:
                raise ValueError(f"{name} needs {count + 1} values, got {len(coords)}")
            if any(a >= b for a, b in zip(coords, coords[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        return self

    @property
    def xs(self) -> list[Coord]:
        return list(self.x_coords) if self.x_coords is not None else [Fraction(i) for i in range(self.p + 1)]

    @property
    def ys(self) -> list[Coord]:
        return list(self.y_coords) if self.y_coords is not None else [Fraction(j) for j in range(self.q + 1)]

    def addresses(self, level: int) -> list[Address]:
        return [parse_address(a) for a in self.script[level]]


class LocalGrid(NamedTuple):
    """Line coordinates of a local tensor-product mesh."""

    xs: tuple[Coord, ...]
    ys: tuple[Coord, ...]

    @property
    def rect(self) -> Rect:
        return Rect(self.xs[0], self.xs[-1], self.ys[0], self.ys[-1])

    def refined(self) -> "LocalGrid":
        """Insert the midpoint of every interval."""
        return LocalGrid(_with_midpoints(self.xs), _with_midpoints(self.ys))

    def cells(self) -> list[Rect]:
        return [
            Rect(x0, x1, y0, y1)
            for y0, y1 in zip(self.ys, self.ys[1:])
            for x0, x1 in zip(self.xs, self.xs[1:])
        ]

    @classmethod
    def from_tmesh(cls, mesh: TMesh) -> "LocalGrid":
        return cls(mesh.x_lines, mesh.y_lines)


def _with_midpoints(coords: Sequence[Coord]) -> tuple[Coord, ...]:
    out = [coords[0]]
    for a, b in zip(coords, coords[1:]):
        out.extend(((a + b) / 2, b))
    return tuple(out)


@dataclass(frozen=True)
class Subdomain:
    level: int
    address: Address
    grid: LocalGrid
    subdivided: bool = False
    boundary: bool = False
    isolated: bool = False

    @property
    def rect(self) -> Rect:
        return self.grid.rect

    @property
    def columns(self) -> int:
        return len(self.grid.xs) - 1

    @property
    def rows(self) -> int:
        return len(self.grid.ys) - 1

    @property
    def cells(self) -> list[Rect]:
        return self.grid.cells()

    @property
    def label(self) -> str:
        return format_address(self.address)


def _cut_indices(count: int, step: int) -> list[int]:
    s = (count - 1) // step
    return [i * step for i in range(s + 1)] + [count]


def partition_subdomains(
    region: LocalGrid,
    m: int,
    n: int,
    *,
    level: int = 0,
    parent: Address = (),
    domain: Optional[Rect] = None,
) -> list[list[Subdomain]]:
    """Split a local tensor mesh into (m, n)-subdomains, indexed ``[column][row]``.

    Boundary flags are set for subdomains touching ``domain`` (default: the region).
    """
    p, q = len(region.xs) - 1, len(region.ys) - 1
    if p <= 0 or q <= 0:
        raise DegenerateRegionError(f"region has {p} x {q} cells")
    if m < 2 or n < 2:
        raise DegenerateRegionError(f"(m, n) = ({m}, {n}) gives empty subdomains; both degrees must be at least 2")
    outer = domain if domain is not None else region.rect
    xcuts, ycuts = _cut_indices(p, m - 1), _cut_indices(q, n - 1)
    grid = []
    for i, (a, b) in enumerate(zip(xcuts, xcuts[1:])):
        column = []
        for j, (c, d) in enumerate(zip(ycuts, ycuts[1:])):
            local = LocalGrid(region.xs[a:b + 1], region.ys[c:d + 1])
            column.append(
                Subdomain(
                    level=level,
                    address=parent + ((i, j),),
                    grid=local,
                    boundary=outer.touches_boundary(local.rect),
                )
            )
        grid.append(column)
    return grid


def cross_segments(sub: Subdomain) -> list[Segment]:
    """Midpoint crosses splitting every cell of ``sub`` into four."""
    segments = []
    for cell in sub.cells:
        mx, my = (cell.xmin + cell.xmax) / 2, (cell.ymin + cell.ymax) / 2
        segments.append(Segment(VERTICAL, mx, cell.ymin, cell.ymax, sub.level + 1))
        segments.append(Segment(HORIZONTAL, my, cell.xmin, cell.xmax, sub.level + 1))
    return segments


def subdivide_subdomain(mesh: TMesh, sub: Subdomain) -> TMesh:
    """Split every cell of ``sub`` at its midpoints."""
    if sub.subdivided:
        raise AlreadySubdividedError(f"subdomain {sub.label} is already subdivided")
    present = {c.rect for c in mesh.cells}
    for cell in sub.cells:
        if cell not in present:
            raise StaleAddressError(
                f"cell {tuple(map(str, cell))} of subdomain {sub.label} is not a cell of the mesh",
                {"address": sub.label},
            )
    return build_tmesh(list(mesh.segments) + cross_segments(sub), inner_domain=mesh.inner_domain)


@dataclass(frozen=True)
class SubdomainForest:
    levels: tuple[tuple[Subdomain, ...], ...]

    def get(self, address: Address) -> Subdomain:
        level = len(address) - 1
        if 0 <= level < len(self.levels):
            for sub in self.levels[level]:
                if sub.address == address:
                    return sub
        raise StaleAddressError(f"no subdomain at address {format_address(address)}")

    def subdivided(self, level: int) -> list[Subdomain]:
        if level >= len(self.levels):
            return []
        return [s for s in self.levels[level] if s.subdivided]

    @property
    def refinement_depth(self) -> int:
        """Number of levels at which some subdomain was subdivided."""
        depth = 0
        for level, subs in enumerate(self.levels):
            if any(s.subdivided for s in subs):
                depth = level + 1
        return depth

    def region_grid(self, address: Address) -> LocalGrid:
        """Local tensor mesh of a subdivided subdomain one level down."""
        sub = self.get(address)
        if not sub.subdivided:
            raise StaleAddressError(f"subdomain {sub.label} is not subdivided")
        return sub.grid.refined()


def _flag_isolated(subs: Sequence[Subdomain]) -> list[Subdomain]:
    flagged = []
    for sub in subs:
        isolated = (
            sub.subdivided
            and not sub.boundary
            and not any(o.subdivided and o is not sub and sub.rect.shares_side(o.rect) for o in subs)
        )
        flagged.append(Subdomain(sub.level, sub.address, sub.grid, sub.subdivided, sub.boundary, isolated))
    return flagged


class HierarchyBuilder:
    """Level-by-level construction of a hierarchical mesh and its subdomain forest."""

    def __init__(self, m: int, n: int, xs: Sequence[Coord], ys: Sequence[Coord]):
        self.m, self.n = m, n
        self.root = LocalGrid(tuple(xs), tuple(ys))
        self.domain = self.root.rect
        self._segments: list[Segment] = tensor_segments(list(xs), list(ys), 0)
        self._levels: list[dict[Address, Subdomain]] = []

    @property
    def level(self) -> int:
        return len(self._levels) - 1

    def open_level(self) -> list[Subdomain]:
        """Partition the regions refined at the previous level."""
        k = len(self._levels)
        if k == 0:
            regions = [((), self.root)]
        else:
            regions = [
                (address, sub.grid.refined())
                for address, sub in sorted(self._levels[k - 1].items())
                if sub.subdivided
            ]
        level: dict[Address, Subdomain] = {}
        for parent, grid in regions:
            for column in partition_subdomains(grid, self.m, self.n, level=k, parent=parent, domain=self.domain):
                for sub in column:
                    level[sub.address] = sub
        self._levels.append(level)
        return list(level.values())

    def subdivide(self, address: Address) -> Subdomain:
        k = len(address) - 1
        if k != self.level:
            raise StaleAddressError(
                f"address {format_address(address)} is for level {k}, the open level is {self.level}"
            )
        sub = self._levels[k].get(address)
        if sub is None:
            raise StaleAddressError(
                f"no subdomain {format_address(address)} at level {k}; its parent was never subdivided",
                {"address": format_address(address)},
            )
        if sub.subdivided:
            raise AlreadySubdividedError(f"subdomain {sub.label} is already subdivided")
        self._segments.extend(cross_segments(sub))
        sub = Subdomain(sub.level, sub.address, sub.grid, True, sub.boundary)
        self._levels[k][address] = sub
        return sub

    def finish(self) -> tuple[TMesh, SubdomainForest]:
        mesh = build_tmesh(self._segments)
        forest = SubdomainForest(
            tuple(tuple(_flag_isolated([level[a] for a in sorted(level)])) for level in self._levels)
        )
        return mesh, forest


@dataclass(frozen=True)
class HierarchicalMesh:
    """A generated mesh with the script and forest it came from."""

    spec: HierSpec
    mesh: TMesh
    forest: SubdomainForest

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def n(self) -> int:
        return self.spec.n


def generate(spec: HierSpec) -> HierarchicalMesh:
    builder = HierarchyBuilder(spec.m, spec.n, spec.xs, spec.ys)
    if spec.m >= 2 and spec.n >= 2:
        builder.open_level()
        for level in range(len(spec.script)):
            if level > 0:
                builder.open_level()
            for address in spec.addresses(level):
                builder.subdivide(address)
    elif any(spec.script):
        raise DegenerateRegionError(f"(m, n) = ({spec.m}, {spec.n}) admits no subdomain refinement")
    mesh, forest = builder.finish()
    logger.info(
        f"Generated T_{{{spec.m},{spec.n}}} mesh: {len(mesh.vertices)} vertices, {len(mesh.cells)} cells, "
        f"{forest.refinement_depth} refinement levels"
    )
    return HierarchicalMesh(spec, mesh, forest)


def isolated_counts(forest: SubdomainForest) -> tuple[int, list[int]]:
    """Isolated subdomain counts: ``per_level[i]`` counts level i-1 subdomains, ``per_level[0] == 0``."""
    depth = forest.refinement_depth
    per_level = [0] + [sum(1 for s in forest.levels[i - 1] if s.isolated) for i in range(1, depth + 1)]
    return sum(per_level), per_level


def random_hierspec(
    rng: random.Random,
    m: int,
    n: int,
    *,
    max_p: int = 8,
    max_q: int = 8,
    max_levels: int = 3,
    density: float = 0.35,
) -> HierSpec:
    """Random legal refinement script; each existing subdomain is refined with probability ``density``."""
    p, q = rng.randint(1, max_p), rng.randint(1, max_q)
    xs = [Fraction(i) for i in range(p + 1)]
    ys = [Fraction(j) for j in range(q + 1)]
    builder = HierarchyBuilder(m, n, xs, ys)
    script: list[list[str]] = []
    for _ in range(rng.randint(0, max_levels)):
        candidates = sorted(builder.open_level(), key=lambda s: s.address)
        chosen = [s.address for s in candidates if rng.random() < density]
        if not chosen:
            break
        for address in chosen:
            builder.subdivide(address)
        script.append([format_address(a) for a in chosen])
    return HierSpec(m=m, n=n, p=p, q=q, script=script)
