"""Extended T-meshes.

The extension copies the boundary lines outward and prolongs every segment
that ends on the boundary through the copies, so that splines on the extended
mesh vanish outside it.
"""

import random
from fractions import Fraction
from typing import Optional

from tmesh_spline.mesh._base import HORIZONTAL, VERTICAL, Coord, Rect, logger, spline_config
from tmesh_spline.mesh.core import BOUNDARY_COPY, EXTENDED, Segment, TMesh, build_tmesh

PAIRINGS = ("algebraic", "literal")
SPACINGS = ("min-cell", "random")


def copy_counts(m: int, n: int, pairing: str) -> tuple[int, int]:
    """(copies of each vertical boundary line, copies of each horizontal boundary line)."""
    if pairing not in PAIRINGS:
        raise ValueError(f"unknown extension pairing {pairing!r}; expected one of {PAIRINGS}")
    return (m, n) if pairing == "algebraic" else (n, m)


def _gaps(count: int, unit: Coord, spacing: str, rng: random.Random) -> list[Coord]:
    if spacing == "min-cell":
        return [unit] * count
    if spacing == "random":
        return [unit * Fraction(rng.randint(1, 5), rng.randint(1, 3)) for _ in range(count)]
    raise ValueError(f"unknown copy spacing {spacing!r}; expected one of {SPACINGS}")


def _outward(start: Coord, gaps: list[Coord], sign: int) -> list[Coord]:
    positions, at = [], start
    for gap in gaps:
        at = at + sign * gap
        positions.append(at)
    return positions


def extend(
    mesh: TMesh,
    m: int,
    n: int,
    *,
    pairing: Optional[str] = None,
    spacing: Optional[str] = None,
    rng: Optional[random.Random] = None,
) -> TMesh:
    """Extended mesh for bidegree (m, n).

    Args:
        mesh: regular T-mesh on the rectangle to extend
        m, n: bidegree
        pairing: "algebraic" (vertical lines copied m times) or "literal" (n times)
        spacing: placement of the copies, "min-cell" or "random"
        rng: generator for random placement, seeded from configuration when omitted

    Returns:
        Regular T-mesh on the enlarged rectangle, ``inner_domain`` set to the original one.
    """
    pairing = pairing or spline_config.extension_pairing
    spacing = spacing or spline_config.copy_spacing
    vertical_copies, horizontal_copies = copy_counts(m, n, pairing)
    if mesh.is_extended:
        logger.warning("Extending a mesh that is already an extension")
    if pairing == "literal":
        logger.warning(f"Literal extension pairing: vertical lines copied {n} times, horizontal lines {m} times")
    if rng is None:
        rng = random.Random(spline_config.random_seed)

    d = mesh.domain
    unit = min(min(c.x1 - c.x0, c.y1 - c.y0) for c in mesh.cells)
    left = _outward(d.xmin, _gaps(vertical_copies, unit, spacing, rng), -1)
    right = _outward(d.xmax, _gaps(vertical_copies, unit, spacing, rng), +1)
    bottom = _outward(d.ymin, _gaps(horizontal_copies, unit, spacing, rng), -1)
    top = _outward(d.ymax, _gaps(horizontal_copies, unit, spacing, rng), +1)
    outer = Rect(
        min(left, default=d.xmin), max(right, default=d.xmax), min(bottom, default=d.ymin), max(top, default=d.ymax)
    )

    segments = []
    for e in mesh.ledges:
        if e.orientation == HORIZONTAL:
            low_end, high_end, on_side = (d.xmin, d.xmax, e.fixed in (d.ymin, d.ymax))
            outer_lo, outer_hi = outer.xmin, outer.xmax
        else:
            low_end, high_end, on_side = (d.ymin, d.ymax, e.fixed in (d.xmin, d.xmax))
            outer_lo, outer_hi = outer.ymin, outer.ymax
        lo = outer_lo if (on_side or e.lo == low_end) else e.lo
        hi = outer_hi if (on_side or e.hi == high_end) else e.hi
        provenance = EXTENDED if (lo, hi) != (e.lo, e.hi) else e.provenance
        segments.append(Segment(e.orientation, e.fixed, lo, hi, e.level, provenance))

    for x in left + right:
        segments.append(Segment(VERTICAL, x, outer.ymin, outer.ymax, 0, BOUNDARY_COPY))
    for y in bottom + top:
        segments.append(Segment(HORIZONTAL, y, outer.xmin, outer.xmax, 0, BOUNDARY_COPY))

    extended = build_tmesh(segments, inner_domain=d)
    logger.info(
        f"Extended mesh ({pairing} pairing, {spacing} spacing): "
        f"{len(extended.x_lines)} x {len(extended.y_lines)} line coordinates, {len(extended.cells)} cells"
    )
    return extended
