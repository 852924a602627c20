"""Generic Newton–Puiseux driver.

The driver expands the small roots of ``sum_i A[i] * Y^i`` where every
``A[i]`` is a Puiseux series in a parameter.  Two coefficient rings plug in:

* ``TowerRing``: coefficients are exact tower constants.  Used on its own for
  bivariate input and for roots of polynomials over the x-series field.
* ``SeriesRing``: coefficients are truncated Puiseux series in ``x``.  Roots
  of characteristic polynomials are found by a recursive call of the driver in
  all-roots mode over ``TowerRing``.

Two modes exist.  *Class mode* returns one representative per conjugacy class
under the parameter loop, plus the class size.  *All-roots mode* returns every
root with its multiplicity; this is what the recursive call needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any, Sequence

from ..algebra import numberfield as nf
from ..algebra.multipoly import MultiPoly
from .newton import point_of, polygon_edges
from .series import NONZERO, UNKNOWN, ZERO, PuiseuxSeries, TruncationTooShort, zero_status

MAX_DEPTH = 400


def x_series_of(poly: MultiPoly, var: str = "x") -> PuiseuxSeries:
    """An exact series in ``var`` from a polynomial involving no other variable."""
    if poly.is_zero():
        return PuiseuxSeries(var)
    terms = []
    for k, part in poly.coefficients_in(var).items():
        if not part.is_constant():
            raise ValueError(f"coefficient involves variables other than {var}: {part}")
        terms.append((k, next(iter(part.terms.values()))))
    return PuiseuxSeries(var, terms)


def constant_of(poly: MultiPoly):
    if poly.is_zero():
        return Fraction(0)
    if not poly.is_constant():
        raise ValueError(f"coefficient is not constant: {poly}")
    return next(iter(poly.terms.values()))


@dataclass
class RawRoot:
    terms: list  # (exponent, coefficient), increasing exponents
    class_size: int = 1
    multiplicity: int = 1
    precision: Fraction | None = None  # absolute; None for an exact finite root

    def as_series(self, variable: str) -> PuiseuxSeries:
        return PuiseuxSeries(variable, self.terms, self.precision)


class TowerRing:
    strict = True

    def sanitize(self, s: PuiseuxSeries) -> PuiseuxSeries:
        return s

    def roots(self, poly: Sequence) -> list[tuple[Any, int]]:
        return [(_shrink(r), m) for r, m in nf.roots(list(poly))]

    def bth_root(self, w, b: int):
        if b == 1:
            return w
        return nf.nth_root(nf.AlgebraicNumber.coerce(w), b)

    def quotient(self, a, c):
        return a / c

    def leading_unit(self, c):
        return c


class SeriesRing:
    """Truncated x-series; coefficients without a certified term count as zero."""

    strict = False

    def __init__(self, rel_precision: Fraction, variable: str = "x"):
        self.X = Fraction(rel_precision)
        self.variable = variable

    def sanitize(self, s: PuiseuxSeries) -> PuiseuxSeries:
        kept = [(e, c) for e, c in s.terms if zero_status(c) == NONZERO]
        return PuiseuxSeries(s.variable, kept, s.precision)

    def roots(self, poly: Sequence) -> list[tuple[Any, int]]:
        coeffs = [c if isinstance(c, PuiseuxSeries) else PuiseuxSeries.constant(self.variable, c) for c in poly]
        return [(r.as_series(self.variable), r.multiplicity) for r in all_roots(coeffs, self.X)]

    def bth_root(self, w: PuiseuxSeries, b: int):
        if b == 1:
            return w
        return w.root(b, self.X)

    def quotient(self, a: PuiseuxSeries, c: PuiseuxSeries):
        return a * c.inverse(self.X)


def _shrink(c):
    if isinstance(c, nf.AlgebraicNumber) and c.is_rational():
        return c.to_fraction()
    return c


@dataclass
class _Config:
    ring: Any
    all_roots: bool
    order: Fraction | None = None  # class mode: stop exponent
    rel: Fraction | None = None  # all-roots mode: precision relative to the root's valuation
    variable: str = "t"
    out: list = field(default_factory=list)


def substitute(A: Sequence[PuiseuxSeries], gamma: Fraction, kappa, const: Fraction, ring) -> list[PuiseuxSeries]:
    """Coefficients of ``param^(-const) * F(param^gamma * (kappa + Y))``."""
    deg = len(A) - 1
    shifted = [A[i].shift(gamma * i - const) for i in range(deg + 1)]
    kpow: list[Any] = [1]
    for _ in range(deg):
        kpow.append(kpow[-1] * kappa)
    var = A[0].variable
    out = []
    for k in range(deg + 1):
        acc = PuiseuxSeries(var)
        for i in range(k, deg + 1):
            if shifted[i].is_exact_zero():
                continue
            acc = acc + shifted[i] * (kpow[i - k] * comb(i, k))
        out.append(ring.sanitize(acc))
    return out


def _uncertain_bound(A: Sequence[PuiseuxSeries], r: int) -> Fraction:
    """Lower bound for the valuation of the ``r`` small roots of ``A``."""
    bounds = []
    for i in range(r):
        ob = A[i].order_bound()
        if ob is not None:
            bounds.append(ob / (r - i))
    return min(bounds) if bounds else Fraction(0)


def _continue(A, r: int, prefix: list, E: Fraction, n: int, mult: int, cfg: _Config, depth: int, v0) -> None:
    """Expand the ``r`` roots of positive valuation of ``A`` (in ``Y``).

    The full root is ``sum(prefix) + param^E * Y``; ``mult`` is how many times
    the whole cluster counts (always 1 in class mode).
    """
    if depth > MAX_DEPTH:
        raise TruncationTooShort("expansion did not separate its roots within the depth budget")
    lo = 0
    while lo < r and A[lo].is_exact_zero():
        lo += 1
    if lo:
        cfg.out.append(RawRoot(list(prefix), n, lo * mult, None))
        if lo == r:
            return
    try:
        edges = polygon_edges(A, lo, r, strict_positive=True)
    except TruncationTooShort:
        if not cfg.all_roots:
            raise
        bound = _uncertain_bound(A[lo:], r - lo)
        cfg.out.append(RawRoot(list(prefix), n, (r - lo) * mult, E + bound))
        return
    for edge in edges:
        gamma = edge.slope
        const = edge.height + gamma * edge.left
        if cfg.all_roots:
            b = 1
            cands = cfg.ring.roots(edge.characteristic_poly)
        else:
            b = (gamma * n).denominator
            reduced = edge.characteristic_poly[::b]
            cands = [(cfg.ring.bth_root(w, b), m) for w, m in cfg.ring.roots(reduced)]
        for kappa, m in cands:
            _child(A, gamma, kappa, const, m, prefix, E, n * b, mult, cfg, depth, v0)


def _child(A, gamma, kappa, const, m, prefix, E, n, mult, cfg: _Config, depth: int, v0) -> None:
    E_new = E + gamma
    if v0 is None:
        v0 = E_new
    if cfg.all_roots:
        if E_new >= v0 + cfg.rel:
            cfg.out.append(RawRoot(list(prefix), n, m * mult, E_new))
            return
    elif m == 1 and E_new >= cfg.order:
        cfg.out.append(RawRoot(list(prefix), n, mult, cfg.order))
        return
    B = substitute(A, gamma, kappa, const, cfg.ring)
    _continue(B, m, prefix + [(E_new, kappa)], E_new, n, mult, cfg, depth + 1, v0)


def expand_small_roots(
    A: Sequence[PuiseuxSeries], ring, order: Fraction, variable: str = "t"
) -> list[RawRoot]:
    """Class mode: one representative per conjugacy class of roots tending to 0."""
    r = _small_root_count(A)
    cfg = _Config(ring, all_roots=False, order=Fraction(order), variable=variable)
    if r:
        _continue(list(A), r, [], Fraction(0), 1, 1, cfg, 0, None)
    total = sum(root.class_size * root.multiplicity for root in cfg.out)
    assert total == r, f"Newton polygon mass {total} does not match root count {r}"
    return cfg.out


def _small_root_count(A: Sequence[PuiseuxSeries]) -> int:
    for i, a in enumerate(A):
        p = point_of(a, i)
        if p is not None and p.v <= 0:
            if not p.certain or p.v < 0:
                raise ValueError("coefficients must have non-negative order with a certified constant term")
            return i
    raise ValueError("the polynomial vanishes identically at parameter 0")


def all_roots(A: Sequence[PuiseuxSeries], rel_precision: Fraction) -> list[RawRoot]:
    """All roots in the field of Puiseux series, each to relative precision ``rel_precision``."""
    A = list(A)
    while A and A[-1].is_exact_zero():
        A.pop()
    deg = len(A) - 1
    if deg < 1:
        return []
    cfg = _Config(TowerRing(), all_roots=True, rel=Fraction(rel_precision), variable=A[0].variable)
    lo = 0
    while A[lo].is_exact_zero():
        lo += 1
    if lo:
        cfg.out.append(RawRoot([], 1, lo, None))
    for edge in polygon_edges(A, lo, deg, strict_positive=False):
        gamma = edge.slope
        const = edge.height + gamma * edge.left
        for c, m in cfg.ring.roots(edge.characteristic_poly):
            _child(A, gamma, c, const, m, [], Fraction(0), 1, 1, cfg, 0, None)
    total = sum(root.multiplicity for root in cfg.out)
    assert total == deg, f"root count {total} does not match degree {deg}"
    return cfg.out
