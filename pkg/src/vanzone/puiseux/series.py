"""Truncated Puiseux series with rational (possibly negative) exponents.

A series stores its known terms and an absolute precision ``R``: every
omitted term has exponent ``>= R``.  ``R is None`` marks an exact (finite)
series.  Coefficients may be tower elements, rationals, or series in another
variable; the only requirement is ``zero_status``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Any, Callable, Iterable, Sequence

from ..algebra import numberfield as nf
from ..algebra.numberfield import AlgebraicNumber

ZERO, NONZERO, UNKNOWN = "zero", "nonzero", "unknown"


class TruncationTooShort(ArithmeticError):
    """A zero test or a root could not be decided at the current truncation."""


def zero_status(c: Any) -> str:
    if isinstance(c, PuiseuxSeries):
        if c.terms:
            return NONZERO
        return ZERO if c.precision is None else UNKNOWN
    if isinstance(c, AlgebraicNumber):
        return ZERO if c.is_zero() else NONZERO
    return ZERO if c == 0 else NONZERO


def _min_opt(*vals):
    vals = [v for v in vals if v is not None]
    return min(vals) if vals else None


class PuiseuxSeries:
    __slots__ = ("variable", "terms", "precision")

    def __init__(self, variable: str, terms: Iterable[tuple[Any, Any]] = (), precision=None):
        self.variable = variable
        self.precision = None if precision is None else Fraction(precision)
        acc: dict[Fraction, Any] = {}
        for e, c in terms:
            e = Fraction(e)
            acc[e] = acc[e] + c if e in acc else c
        kept = []
        for e in sorted(acc):
            if self.precision is not None and e >= self.precision:
                continue
            c = acc[e]
            if zero_status(c) != ZERO:
                kept.append((e, c))
        self.terms = tuple(kept)

    # -- constructors --------------------------------------------------------
    @classmethod
    def constant(cls, variable: str, c) -> "PuiseuxSeries":
        return cls(variable, [(0, c)])

    @classmethod
    def monomial(cls, variable: str, c, e) -> "PuiseuxSeries":
        return cls(variable, [(e, c)])

    @classmethod
    def zero(cls, variable: str) -> "PuiseuxSeries":
        return cls(variable)

    # -- queries ---------------------------------------------------------------
    @property
    def denominator(self) -> int:
        return lcm(1, *(e.denominator for e, _ in self.terms))

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    def is_exact_zero(self) -> bool:
        return not self.terms and self.precision is None

    def status(self) -> str:
        return zero_status(self)

    def valuation(self) -> Fraction | None:
        """Exponent of the first known term; ``None`` when no term is known."""
        return self.terms[0][0] if self.terms else None

    def order_bound(self) -> Fraction | None:
        """Valuation if known, else the precision (a lower bound)."""
        if self.terms:
            return self.terms[0][0]
        return self.precision

    def leading(self) -> tuple[Fraction, Any]:
        if not self.terms:
            raise TruncationTooShort(f"series in {self.variable} has no certified nonzero term")
        return self.terms[0]

    def coefficient(self, e) -> Any:
        e = Fraction(e)
        if self.precision is not None and e >= self.precision:
            raise TruncationTooShort(f"coefficient of {self.variable}^{e} lies beyond the truncation")
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    def relative_precision(self) -> Fraction | None:
        if self.precision is None:
            return None
        v = self.valuation()
        return self.precision - v if v is not None else Fraction(0)

    # -- arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "PuiseuxSeries":
        # a series in another variable is a coefficient here
        if isinstance(other, PuiseuxSeries) and other.variable == self.variable:
            return other
        return PuiseuxSeries.constant(self.variable, other)

    @classmethod
    def _raw(cls, variable: str, terms: list, precision) -> "PuiseuxSeries":
        """Trusted constructor: ``terms`` sorted, nonzero, below ``precision``."""
        obj = cls.__new__(cls)
        obj.variable = variable
        obj.precision = precision
        obj.terms = tuple(terms)
        return obj

    def __add__(self, other):
        other = self._coerce(other)
        prec = _min_opt(self.precision, other.precision)
        a, b = self.terms, other.terms
        out = []
        i = j = 0
        while i < len(a) or j < len(b):
            if j >= len(b) or (i < len(a) and a[i][0] < b[j][0]):
                e, c = a[i]
                i += 1
            elif i >= len(a) or b[j][0] < a[i][0]:
                e, c = b[j]
                j += 1
            else:
                e, c = a[i][0], a[i][1] + b[j][1]
                i += 1
                j += 1
                if zero_status(c) == ZERO:
                    continue
            if prec is not None and e >= prec:
                break
            out.append((e, c))
        return PuiseuxSeries._raw(self.variable, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries._raw(self.variable, [(e, -c) for e, c in self.terms], self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries) or other.variable != self.variable:
            if zero_status(other) == ZERO:
                return PuiseuxSeries(self.variable)
            return PuiseuxSeries._raw(self.variable, [(e, c * other) for e, c in self.terms], self.precision)
        other = self._coerce(other)
        prec = None
        if self.precision is not None or other.precision is not None:
            va, vb = self.order_bound(), other.order_bound()
            cands = []
            if other.precision is not None and va is not None:
                cands.append(va + other.precision)
            if self.precision is not None and vb is not None:
                cands.append(vb + self.precision)
            if not cands:
                # an exact zero times anything is exactly zero
                return PuiseuxSeries(self.variable)
            prec = min(cands)
        acc: dict[Fraction, Any] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                if prec is not None and e >= prec:
                    continue
                v = c1 * c2
                acc[e] = acc[e] + v if e in acc else v
        return PuiseuxSeries(self.variable, acc.items(), prec)

    def __rmul__(self, other):
        if isinstance(other, PuiseuxSeries) or zero_status(other) == ZERO:
            return self.__mul__(other)
        return PuiseuxSeries._raw(self.variable, [(e, other * c) for e, c in self.terms], self.precision)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use inverse() for negative powers")
        result = PuiseuxSeries.constant(self.variable, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, e) -> "PuiseuxSeries":
        """Multiply by ``variable^e``."""
        e = Fraction(e)
        if not e:
            return self
        return PuiseuxSeries._raw(
            self.variable, [(ee + e, c) for ee, c in self.terms], None if self.precision is None else self.precision + e
        )

    def scale(self, c) -> "PuiseuxSeries":
        return self * c

    def truncate(self, precision) -> "PuiseuxSeries":
        precision = Fraction(precision)
        return PuiseuxSeries(self.variable, self.terms, _min_opt(self.precision, precision))

    def map_exponents(self, fn: Callable[[Fraction], Fraction]) -> "PuiseuxSeries":
        """Apply an increasing affine map to all exponents (and the precision)."""
        return PuiseuxSeries(
            self.variable, [(fn(e), c) for e, c in self.terms], None if self.precision is None else fn(self.precision)
        )

    def map_coefficients(self, fn: Callable[[Fraction, Any], Any]) -> "PuiseuxSeries":
        return PuiseuxSeries(self.variable, [(e, fn(e, c)) for e, c in self.terms], self.precision)

    # -- inverse and roots (tower coefficients only) ----------------------------------
    def _unit_part(self) -> tuple[Fraction, Any, "PuiseuxSeries"]:
        v, c = self.leading()
        h = PuiseuxSeries(
            self.variable,
            [(e - v, cc / c) for e, cc in self.terms[1:]],
            None if self.precision is None else self.precision - v,
        )
        return v, c, h

    def inverse(self, rel_precision) -> "PuiseuxSeries":
        """``1/self`` known to relative precision ``rel_precision`` at most."""
        v, c, h = self._unit_part()
        target = Fraction(rel_precision) if h.precision is None else min(Fraction(rel_precision), h.precision)
        u = _binomial_series(h, Fraction(-1), target)
        return u.shift(-v) * (1 / c)

    def root(self, b: int, rel_precision, near: complex | None = None) -> "PuiseuxSeries":
        """A ``b``-th root; the leading coefficient root is principal unless ``near``."""
        v, c, h = self._unit_part()
        target = Fraction(rel_precision) if h.precision is None else min(Fraction(rel_precision), h.precision)
        u = _binomial_series(h, Fraction(1, b), target)
        rc = nf.nth_root(nf.AlgebraicNumber.coerce(c) if not isinstance(c, AlgebraicNumber) else c, b, near=near)
        return u.shift(v / b) * rc

    # -- comparison and printing ---------------------------------------------------------
    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Equality of all terms below the common precision."""
        prec = _min_opt(self.precision, other.precision)
        a = [(e, c) for e, c in self.terms if prec is None or e < prec]
        b = [(e, c) for e, c in other.terms if prec is None or e < prec]
        if len(a) != len(b):
            return False
        return all(ea == eb and _coeff_equal(ca, cb) for (ea, ca), (eb, cb) in zip(a, b))

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            if self.precision is None and len(self.terms) <= 1:
                if not self.terms:
                    return zero_status(other) == ZERO
                e, c = self.terms[0]
                return e == 0 and c == other
            return NotImplemented
        return (
            self.variable == other.variable
            and self.precision == other.precision
            and len(self.terms) == len(other.terms)
            and all(a[0] == b[0] and _coeff_equal(a[1], b[1]) for a, b in zip(self.terms, other.terms))
        )

    def __hash__(self):
        return hash((self.variable, self.precision, tuple(e for e, _ in self.terms)))

    def evaluate(self, value: complex, branch_root: complex | None = None) -> complex:
        """Numeric value of the truncated sum.

        ``branch_root`` is a chosen ``value^(1/D)``; default is the principal one.
        """
        D = self.denominator
        root = branch_root if branch_root is not None else complex(value) ** (1.0 / D)
        total = 0j
        for e, c in self.terms:
            k = e * D
            cv = c.evaluate(value) if isinstance(c, PuiseuxSeries) else complex(c)
            total += cv * root ** int(k)
        return total

    def __str__(self) -> str:
        parts = []
        for e, c in self.terms:
            cs = str(c)
            if e == 0:
                parts.append(f"({cs})")
            else:
                parts.append(f"({cs})*{self.variable}^({e})")
        if self.precision is not None:
            parts.append(f"O({self.variable}^({self.precision}))")
        return " + ".join(parts) if parts else "0"

    __repr__ = __str__


def _coeff_equal(a, b) -> bool:
    if isinstance(a, PuiseuxSeries) and isinstance(b, PuiseuxSeries):
        return a.agrees_with(b)
    return a == b


def _binomial_series(h: PuiseuxSeries, r: Fraction, target: Fraction) -> PuiseuxSeries:
    """``(1 + h)^r`` for ``h`` of positive valuation, truncated at ``target``."""
    one = PuiseuxSeries.constant(h.variable, Fraction(1))
    if not h.terms:
        if h.precision is None:
            return one
        return one.truncate(min(h.precision, target))
    v = h.valuation()
    if v <= 0:
        raise ValueError("binomial series needs a positive valuation")
    h = h.truncate(target)
    result = one.truncate(target)
    power = one
    coeff = Fraction(1)
    k = 0
    while True:
        k += 1
        if v * k >= target:
            break
        coeff = coeff * (r - (k - 1)) / k
        power = (power * h).truncate(target)
        result = result + power * coeff
    return result.truncate(target)


def series_from_polynomial(coeffs: Sequence[tuple[int, Any]], variable: str) -> PuiseuxSeries:
    return PuiseuxSeries(variable, [(Fraction(e), c) for e, c in coeffs])
