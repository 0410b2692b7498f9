"""SVG 1.1 rendering of T-meshes.

Every l-edge is drawn as exactly one ``<line>`` element spanning its full
extent, stroked by creation level; labels and highlighted rectangles are
optional overlays.

The view box is the pixel drawing multiplied by the least common multiple of
every coordinate denominator, so all drawn coordinates are integers and the
same mesh and options always produce the same bytes.
"""
import logging
from fractions import Fraction
from math import ceil, lcm
from typing import Mapping, Optional, Sequence

from tmesh_spline.config import render_config
from tmesh_spline.mesh import Rect, TMesh

logger = logging.getLogger(__name__)


def _denominator(mesh: TMesh, extra: Sequence[Rect]) -> int:
    values = [v.x for v in mesh.vertices] + [v.y for v in mesh.vertices]
    values += [c for r in extra for c in r]
    return lcm(*(Fraction(v).denominator for v in values))


def _stroke(level: Optional[int], colors: Sequence[str], by_level: bool) -> str:
    if not by_level or level is None:
        return colors[0]
    return colors[level % len(colors)]


def render_svg(
    mesh: TMesh,
    *,
    by_level: bool = True,
    labels: Optional[Mapping[tuple, str]] = None,
    highlights: Sequence[Rect] = (),
    scale: Optional[int] = None,
    margin: Optional[int] = None,
    stroke_width: Optional[int] = None,
    colors: Optional[Sequence[str]] = None,
) -> str:
    """One ``<line>`` per l-edge, optional labels keyed by l-edge key, highlighted rectangles."""
    scale = scale or render_config.scale
    margin = render_config.margin if margin is None else margin
    stroke_width = stroke_width or render_config.stroke_width
    colors = list(colors or render_config.level_colors)

    k = _denominator(mesh, highlights)
    d = mesh.domain

    def px(x: Fraction) -> int:
        return int((x - d.xmin) * scale * k) + margin * k

    def py(y: Fraction) -> int:
        return int((d.ymax - y) * scale * k) + margin * k

    def length(a: Fraction, b: Fraction) -> int:
        return int((b - a) * scale * k)

    width = (d.xmax - d.xmin) * scale + 2 * margin
    height = (d.ymax - d.ymin) * scale + 2 * margin
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{ceil(width)}" height="{ceil(height)}" '
        f'viewBox="0 0 {int(width * k)} {int(height * k)}">',
    ]
    for rect in highlights:
        out.append(
            f'  <rect class="support" x="{px(rect.xmin)}" y="{py(rect.ymax)}" width="{length(rect.xmin, rect.xmax)}" '
            f'height="{length(rect.ymin, rect.ymax)}" fill="#fde68a" fill-opacity="0.6"/>'
        )
    if mesh.inner_domain is not None:
        r = mesh.inner_domain
        out.append(
            f'  <rect class="inner-domain" x="{px(r.xmin)}" y="{py(r.ymax)}" width="{length(r.xmin, r.xmax)}" '
            f'height="{length(r.ymin, r.ymax)}" fill="none" stroke="#9ca3af" stroke-width="{stroke_width * k}" '
            f'stroke-dasharray="{4 * k}"/>'
        )
    for e in mesh.ledges:
        (x0, y0), (x1, y1) = e.segment.point(e.lo), e.segment.point(e.hi)
        level = "" if e.level is None else f' data-level="{e.level}"'
        out.append(
            f'  <line x1="{px(x0)}" y1="{py(y0)}" x2="{px(x1)}" y2="{py(y1)}" '
            f'stroke="{_stroke(e.level, colors, by_level)}" stroke-width="{stroke_width * k}"{level}/>'
        )
    for e in mesh.ledges:
        text = (labels or {}).get(e.key())
        if text is None:
            continue
        mx, my = e.segment.point((e.lo + e.hi) / 2)
        out.append(f'  <text x="{px(mx)}" y="{py(my)}" font-size="{12 * k}" fill="#111827">{text}</text>')
    out.append("</svg>")
    logger.debug(f"Rendered {len(mesh.ledges)} l-edges, view box scale {k}")
    return "\n".join(out) + "\n"
