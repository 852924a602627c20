"""Newton polygons of polynomials whose coefficients are Puiseux series.

A polynomial in the main variable is a list ``A`` with ``A[i]`` the series
coefficient of ``main^i``.  Points are ``(i, ord A[i])``.  Slopes are reported
as the parameter exponent per unit of main-variable degree, so a root
``main ~ c * param^gamma`` comes from an edge with slope ``gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

from ..algebra.multipoly import MultiPoly
from .series import NONZERO, UNKNOWN, ZERO, PuiseuxSeries, TruncationTooShort, zero_status


class EmptyInput(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    i: int
    v: Fraction
    certain: bool


@dataclass
class NewtonPolygonEdge:
    slope: Fraction  # parameter exponent per unit of main degree
    left: int  # main-degree of the left end
    right: int  # main-degree of the right end
    height: Fraction  # order of the left end point
    lattice_length: int
    step: int  # main-degree spacing between lattice points on the edge
    characteristic_poly: list = field(default_factory=list)  # in c, lowest degree first

    @property
    def reduced_poly(self) -> list:
        """The characteristic polynomial as a polynomial in ``u = c^step``."""
        return self.characteristic_poly[:: self.step]


def point_of(series: PuiseuxSeries, i: int) -> Point | None:
    """The Newton point of one coefficient; ``None`` for an exact zero."""
    for e, c in series.terms:
        st = zero_status(c)
        if st == NONZERO:
            return Point(i, e, True)
        if st == UNKNOWN:
            return Point(i, e, False)
    if series.precision is None:
        return None
    return Point(i, series.precision, False)


def lower_hull(points: Sequence[Point]) -> list[Point]:
    pts = sorted(points, key=lambda p: (p.i, p.v))
    hull: list[Point] = []
    for p in pts:
        if hull and hull[-1].i == p.i:
            continue
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # keep b only if it lies strictly below segment a-p
            if (b.v - a.v) * (p.i - a.i) >= (p.v - a.v) * (b.i - a.i):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _hull_value(hull: Sequence[Point], i: int) -> Fraction | None:
    for a, b in zip(hull, hull[1:]):
        if a.i <= i <= b.i:
            return a.v + (b.v - a.v) * Fraction(i - a.i, b.i - a.i)
    if hull and hull[0].i == i:
        return hull[0].v
    return None


def lattice_denominator(A: Sequence[PuiseuxSeries]) -> int:
    return lcm(1, *(a.denominator for a in A))


def polygon_edges(
    A: Sequence[PuiseuxSeries], lo: int, hi: int, strict_positive: bool, lattice: int | None = None
) -> list[NewtonPolygonEdge]:
    """Edges of the lower hull between main-degrees ``lo`` and ``hi``.

    Only certain points build the hull.  An uncertain point on or below the
    hull inside ``[lo, hi]`` makes the polygon undecidable.
    """
    if lattice is None:
        lattice = lattice_denominator(A)
    pts = [p for i in range(lo, hi + 1) if (p := point_of(A[i], i)) is not None]
    certain = [p for p in pts if p.certain]
    if not certain or certain[0].i != lo or certain[-1].i != hi:
        raise TruncationTooShort("end points of the Newton polygon are not certified")
    hull = lower_hull(certain)
    for p in pts:
        if p.certain:
            continue
        hv = _hull_value(hull, p.i)
        if hv is not None and p.v <= hv:
            raise TruncationTooShort(f"coefficient of main-degree {p.i} is undecided at order {p.v}")
    edges = []
    for a, b in zip(hull, hull[1:]):
        gamma = (a.v - b.v) / (b.i - a.i)
        if strict_positive and gamma <= 0:
            continue
        step = (gamma * lattice).denominator
        chars = []
        for i in range(a.i, b.i + 1):
            target = a.v - gamma * (i - a.i)
            chars.append(_coefficient_at(A[i], target))
        edges.append(
            NewtonPolygonEdge(gamma, a.i, b.i, a.v, (b.i - a.i) // step, step, chars)
        )
    return edges


def _coefficient_at(series: PuiseuxSeries, e: Fraction):
    for ee, c in series.terms:
        if ee == e:
            st = zero_status(c)
            if st == UNKNOWN:
                raise TruncationTooShort(f"coefficient at order {e} is undecided")
            return c
        if ee > e:
            break
    if series.precision is not None and e >= series.precision:
        raise TruncationTooShort(f"coefficient at order {e} lies beyond the truncation")
    return 0


def coefficient_lists(F: MultiPoly, main_var: str, param_var: str, coefficient) -> list[PuiseuxSeries]:
    """Split ``F`` into series in ``param_var`` per power of ``main_var``.

    ``coefficient(poly)`` turns the remaining-variable part into a ring element.
    """
    deg = F.degree(main_var)
    if deg < 0:
        raise EmptyInput("the zero polynomial has no Newton polygon")
    out = []
    by_main = F.coefficients_in(main_var)
    for i in range(deg + 1):
        part = by_main.get(i)
        if part is None:
            out.append(PuiseuxSeries(param_var))
            continue
        terms = [(k, coefficient(c)) for k, c in part.coefficients_in(param_var).items()]
        out.append(PuiseuxSeries(param_var, terms))
    return out


def newton_polygon(F: MultiPoly, main_var: str, param_var: str, coefficient=None) -> list[NewtonPolygonEdge]:
    """Edges with positive slope, i.e. those producing roots that tend to zero."""
    if F.is_zero():
        raise EmptyInput("the zero polynomial has no Newton polygon")
    if coefficient is None:
        from .engine import x_series_of

        coefficient = x_series_of
    A = coefficient_lists(F, main_var, param_var, coefficient)
    lo = next(i for i, a in enumerate(A) if point_of(a, i) is not None)
    if lo:
        raise ValueError(f"{main_var} divides the polynomial; divide it out first")
    m = next((i for i, a in enumerate(A) if (p := point_of(a, i)) is not None and p.certain and p.v == 0), None)
    if m is None or m == 0:
        return []
    return polygon_edges(A, 0, m, strict_positive=True)
