"""Ordered removal of interior l-edges from an extended hierarchical mesh.

Levels are peeled from the finest down to 0. Inside a level i >= 1 the
phases A1 to A5 are emptied one after another; a phase never starts before
the previous one is exhausted. Within a phase, a trivial l-edge (fewer than
d + 2 vertices in the current mesh) is removed whenever one exists, otherwise
any l-edge of the phase. Level 0 is a single pool with the same trivial-first
rule. Ties go to the least (or greatest) l-edge by orientation (vertical
first), fixed coordinate and start.

Each removal records the l-edge's vertex count r and crossing count v+ in the
mesh it is removed from; dim W[E] = (r - d - 1)+.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional

from tmesh_spline.algebra.linear import nullspace_dim
from tmesh_spline.config import spline_config
from tmesh_spline.errors import NoParentSubdomainError, UnlabeledEdgeError
from tmesh_spline.mesh import CROSSING, VERTICAL, LEdge, SubdomainForest, TMesh, remove_ledge
from tmesh_spline.mesh._base import overlap_length
from tmesh_spline.spline.conformality import assemble_W, ledge_degree

logger = logging.getLogger(__name__)

PHASES = ("A1", "A2", "A3", "A4", "A5")


def level_of(ledge: LEdge) -> int:
    return ledge.level if ledge.level is not None else 0


def level_partition(extended: TMesh) -> dict[int, list[LEdge]]:
    """Interior l-edges grouped by creation level."""
    groups: dict[int, list[LEdge]] = {}
    for ledge in extended.ledges:
        if ledge.interior:
            groups.setdefault(level_of(ledge), []).append(ledge)
    return dict(sorted(groups.items()))


def position_label(ledge: LEdge, forest: Optional[SubdomainForest]) -> int:
    """L(E): rank of E among the level-l lines crossing a subdivided level l-1 subdomain.

    Vertical lines count left to right, horizontal ones top to bottom.
    """
    level = level_of(ledge)
    candidates = forest.subdivided(level - 1) if (forest is not None and level >= 1) else []
    for sub in candidates:
        r = sub.rect
        if ledge.orientation == VERTICAL:
            inside = r.xmin < ledge.fixed < r.xmax and overlap_length(ledge.lo, ledge.hi, r.ymin, r.ymax) > 0
            lines = sub.grid.xs
        else:
            inside = r.ymin < ledge.fixed < r.ymax and overlap_length(ledge.lo, ledge.hi, r.xmin, r.xmax) > 0
            lines = sub.grid.ys
        if not inside:
            continue
        index = next(i for i, (a, b) in enumerate(zip(lines, lines[1:])) if a < ledge.fixed < b)
        return index + 1 if ledge.orientation == VERTICAL else len(lines) - 1 - index
    raise NoParentSubdomainError(
        f"{ledge.orientation} l-edge at {ledge.fixed} (level {level}) crosses no subdivided level-{level - 1} subdomain"
    )


def classify_A(ledge: LEdge, position: int, m: int, n: int) -> str:
    if ledge.orientation == VERTICAL:
        if 1 <= position < m - 2:
            return "A1"
        if position == m - 2 and position >= 1:
            return "A3"
        if position == m - 1:
            return "A5"
    else:
        if 1 <= position < n - 2:
            return "A1"
        if position == n - 2 and position >= 1:
            return "A2"
        if position == n - 1:
            return "A4"
    raise UnlabeledEdgeError(
        f"{ledge.orientation} l-edge at {ledge.fixed} has position {position} outside 1..{(m if ledge.orientation == VERTICAL else n) - 1}"
    )


class OrderedStep(NamedTuple):
    key: tuple
    orientation: str
    level: int
    label: Optional[str]
    position: Optional[int]
    size: int
    v_plus: int
    trivial: bool
    dim: int
    unclamped: int


@dataclass(frozen=True)
class OrderedLEdges:
    """Removal sequence; ``meshes[j]`` is the mesh step ``j`` removes its l-edge from."""

    steps: tuple[OrderedStep, ...]
    meshes: tuple[TMesh, ...]
    m: int
    n: int
    forest: Optional[SubdomainForest] = None

    @property
    def total(self) -> int:
        return sum(s.dim for s in self.steps)

    def by_level(self) -> dict[int, list[OrderedStep]]:
        groups: dict[int, list[OrderedStep]] = {}
        for step in self.steps:
            groups.setdefault(step.level, []).append(step)
        return groups


def _tie_key(ledge: LEdge) -> tuple:
    return (0 if ledge.orientation == VERTICAL else 1, ledge.fixed, ledge.lo)


def _choose(pool: list[LEdge], m: int, n: int, tie_break: str) -> LEdge:
    trivial = [e for e in pool if e.size < ledge_degree(e, m, n) + 2]
    tied = sorted(trivial or pool, key=_tie_key)
    return tied[0] if tie_break == "least" else tied[-1]


def _pools(level: int, ledges: list[LEdge], labels: dict) -> list[set]:
    """Key sets emptied in order: one per A-phase above level 0, a single pool at level 0."""
    if level == 0:
        return [{e.key() for e in ledges}]
    return [{e.key() for e in ledges if labels[e.key()][1] == label} for label in PHASES]


def _step(current: TMesh, chosen: LEdge, level: int, labels: dict, m: int, n: int) -> OrderedStep:
    d = ledge_degree(chosen, m, n)
    v_plus = sum(1 for vid in chosen.vertices if current.vertices[vid].kind == CROSSING)
    position, label = labels.get(chosen.key(), (None, None))
    return OrderedStep(
        key=chosen.key(),
        orientation=chosen.orientation,
        level=level,
        label=label,
        position=position,
        size=chosen.size,
        v_plus=v_plus,
        trivial=chosen.size < d + 2,
        dim=max(0, chosen.size - d - 1),
        unclamped=v_plus - d + 1,
    )


def order_ledges(
    extended: TMesh,
    forest: Optional[SubdomainForest],
    m: int,
    n: int,
    *,
    tie_break: Optional[str] = None,
) -> OrderedLEdges:
    tie_break = tie_break or spline_config.tie_break
    if tie_break not in ("least", "greatest"):
        raise ValueError(f"unknown tie-break policy {tie_break!r}")

    groups = level_partition(extended)
    labels: dict[tuple, tuple[int, str]] = {}
    for level, ledges in groups.items():
        if level == 0:
            continue
        for ledge in ledges:
            position = position_label(ledge, forest)
            labels[ledge.key()] = (position, classify_A(ledge, position, m, n))

    current = extended
    steps: list[OrderedStep] = []
    meshes: list[TMesh] = [extended]
    for level in sorted(groups, reverse=True):
        for remaining in _pools(level, groups[level], labels):
            while remaining:
                chosen = _choose([current.find_ledge(key) for key in sorted(remaining)], m, n, tie_break)
                step = _step(current, chosen, level, labels, m, n)
                logger.debug(
                    f"Remove {step.orientation} l-edge at {chosen.fixed} [{chosen.lo}, {chosen.hi}] "
                    f"level {level} {step.label or ''}: r={step.size}, v+={step.v_plus}, dim={step.dim}"
                )
                steps.append(step)
                remaining.discard(chosen.key())
                current = remove_ledge(current, chosen.id)
                meshes.append(current)

    ordered = OrderedLEdges(tuple(steps), tuple(meshes), m, n, forest)
    logger.info(f"Ordered {len(steps)} l-edges, dimension total {ordered.total}")
    return ordered


class LevelLedger(NamedTuple):
    level: int
    removed: int
    clamped: int
    unclamped: int
    correction: int
    expected_correction: int
    balanced: bool


def ledger(ordered: OrderedLEdges, census, m: int, n: int) -> list[LevelLedger]:
    """Per-level sums of dim W[E] against the closed-form terms.

    The clamped sum exceeds sum(v+ - d + 1) by the isolated count of the
    level below for levels i >= 1, and by (m - 1)(n - 1) at level 0.
    """
    rows = []
    per_level = census.delta_per_level
    for level, steps in sorted(ordered.by_level().items(), reverse=True):
        clamped = sum(s.dim for s in steps)
        unclamped = sum(s.unclamped for s in steps)
        if level == 0:
            expected = (m - 1) * (n - 1)
        else:
            expected = per_level[level] if level < len(per_level) else 0
        rows.append(
            LevelLedger(
                level=level,
                removed=len(steps),
                clamped=clamped,
                unclamped=unclamped,
                correction=clamped - unclamped,
                expected_correction=expected,
                balanced=clamped - unclamped == expected,
            )
        )
    return rows


def telescoping_drops(ordered: OrderedLEdges) -> list[int]:
    """dim W[T_j] - dim W[T_(j+1)] for every removal, by exact rank."""
    dims = [nullspace_dim(assemble_W(mesh, ordered.m, ordered.n)) for mesh in ordered.meshes]
    return [a - b for a, b in zip(dims, dims[1:])]


def telescoping_check(ordered: OrderedLEdges) -> bool:
    """Every removal drops the dimension of W by exactly dim W[E]."""
    return telescoping_drops(ordered) == [s.dim for s in ordered.steps]
