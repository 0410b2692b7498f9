import logging
import re
from fractions import Fraction
from typing import NamedTuple, Union

from tmesh_spline.config import spline_config


logger = logging.getLogger(__name__)

Coord = Fraction
CoordLike = Union[Fraction, int, str]

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def as_coord(value: CoordLike) -> Coord:
    """Convert an int, Fraction or "num/den" string to an exact coordinate.

    Floats are refused: every coordinate stays exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL.match(value)
        if match is None:
            raise ValueError(f"malformed rational {value!r}")
        num, den = match.group(1), match.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den is not None else 1)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coordinate")


def format_coord(value: Coord) -> str:
    """Render as "num/den", or "num" for integers."""
    return str(Fraction(value))


class Rect(NamedTuple):
    xmin: Coord
    xmax: Coord
    ymin: Coord
    ymax: Coord

    @property
    def area(self) -> Coord:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def contains(self, x: Coord, y: Coord) -> bool:
        return self.xmin <= x <= self.xmax and self.ymin <= y <= self.ymax

    def on_boundary(self, x: Coord, y: Coord) -> bool:
        return self.contains(x, y) and (x in (self.xmin, self.xmax) or y in (self.ymin, self.ymax))

    def touches_boundary(self, other: "Rect") -> bool:
        """True when ``other`` (a sub-rectangle) shares a side line with this rectangle."""
        return (
            other.xmin == self.xmin
            or other.xmax == self.xmax
            or other.ymin == self.ymin
            or other.ymax == self.ymax
        )

    def shares_side(self, other: "Rect") -> bool:
        """Rectangles with disjoint interiors sharing a boundary segment of positive length."""
        if self.xmax == other.xmin or other.xmax == self.xmin:
            return min(self.ymax, other.ymax) > max(self.ymin, other.ymin)
        if self.ymax == other.ymin or other.ymax == self.ymin:
            return min(self.xmax, other.xmax) > max(self.xmin, other.xmin)
        return False


def overlap_length(lo1: Coord, hi1: Coord, lo2: Coord, hi2: Coord) -> Coord:
    return max(Fraction(0), min(hi1, hi2) - max(lo1, lo2))


__all__ = [
    "logger",
    "spline_config",
    "Coord",
    "CoordLike",
    "HORIZONTAL",
    "VERTICAL",
    "as_coord",
    "format_coord",
    "Rect",
    "overlap_length",
]
