"""Bivariate polynomials over QQ on top of sympy's sparse polynomial ring."""

from fractions import Fraction
from math import factorial

from sympy import QQ
from sympy.polys.rings import ring

POLY_RING, X, Y = ring("x,y", QQ)


def qq(value) -> object:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def to_fraction(coeff) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


def truncated_term(k: Fraction, xv: Fraction, yv: Fraction, m: int, n: int):
    """k (x - xv)^m (y - yv)^n, the active part of a truncated power."""
    return qq(k) * (X - qq(xv)) ** m * (Y - qq(yv)) ** n


def coefficients(poly) -> dict[tuple[int, int], Fraction]:
    return {monom: to_fraction(c) for monom, c in poly.terms()}


def bidegree(poly) -> tuple[int, int]:
    if not poly:
        return (0, 0)
    return max(mon[0] for mon in poly.keys()), max(mon[1] for mon in poly.keys())


def evaluate(poly, x: Fraction, y: Fraction) -> Fraction:
    if not poly:
        return Fraction(0)
    return to_fraction(poly(qq(x), qq(y)))


def scaled_derivative(poly, gen, order: int):
    """(1/order!) d^order poly / d gen^order."""
    for _ in range(order):
        poly = poly.diff(gen)
    return poly * QQ(1, factorial(order))


def at(poly, gen, value: Fraction):
    """Substitute one variable, keeping the result in the bivariate ring."""
    return poly.subs(gen, qq(value))


def divisible_by_power(poly, gen, root: Fraction, power: int) -> bool:
    """Whether (gen - root)^power divides poly exactly."""
    return not poly.rem((gen - qq(root)) ** power)


def falling(a: int, j: int) -> int:
    """a (a-1) ... (a-j+1)."""
    out = 1
    for i in range(j):
        out *= a - i
    return out
