"""Sparse multivariate polynomials with exact coefficients.

Coefficients are ``Fraction`` or tower elements.  Terms are kept in a dict
from exponent tuples to nonzero coefficients; iteration is lexicographic in
the variable order, so printed forms and derived data are reproducible.

Resultants use a Sylvester matrix and fraction-free (Bareiss) elimination with
exact multivariate division.  Gcd, squarefree part and factorization over the
rationals go through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import sympy

from .numberfield import AlgebraicNumber

VARIABLE_ORDER = ("x", "y", "z", "t")


class EliminationError(ValueError):
    """Resultant requested with an argument that does not involve the variable."""


def _is_zero(c: Any) -> bool:
    if isinstance(c, AlgebraicNumber):
        return c.is_zero()
    return c == 0


def _normalize_coeff(c: Any) -> Any:
    if isinstance(c, AlgebraicNumber):
        return c.to_fraction() if c.is_rational() else c
    if isinstance(c, int):
        return Fraction(c)
    return c


class MultiPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, Any] | None = None):
        self.variables = tuple(variables)
        clean: dict[tuple, Any] = {}
        for e, c in (terms or {}).items():
            if len(e) != len(self.variables):
                raise ValueError("exponent tuple length does not match variables")
            if any(k < 0 for k in e):
                raise ValueError("negative exponent in polynomial term")
            if not _is_zero(c):
                clean[tuple(e)] = _normalize_coeff(c)
        self.terms = dict(sorted(clean.items(), reverse=True))

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, variables=VARIABLE_ORDER) -> "MultiPoly":
        return cls(variables)

    @classmethod
    def constant(cls, c, variables=VARIABLE_ORDER) -> "MultiPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables=VARIABLE_ORDER) -> "MultiPoly":
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): Fraction(1)})

    # -- basic queries -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def degree(self, var: str) -> int:
        i = self.variables.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def low_degree(self, var: str) -> int:
        i = self.variables.index(var)
        return min((e[i] for e in self.terms), default=-1)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def involves(self, var: str) -> bool:
        return self.degree(var) > 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    # -- arithmetic -----------------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise ValueError("variable lists differ")
            return other
        return MultiPoly.constant(other, self.variables)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple, Any] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "MultiPoly":
        return MultiPoly(self.variables, {e: v * c for e, v in self.terms.items()})

    # -- structure -------------------------------------------------------------
    def diff(self, var: str) -> "MultiPoly":
        i = self.variables.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] > 0:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.variables, out)

    def coefficients_in(self, var: str) -> dict[int, "MultiPoly"]:
        """Split as ``sum_k c_k * var^k``; ``c_k`` does not involve ``var``."""
        i = self.variables.index(var)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            parts.setdefault(k, {})[tuple(ne)] = c
        return {k: MultiPoly(self.variables, v) for k, v in sorted(parts.items())}

    def subs(self, mapping: Mapping[str, Any]) -> "MultiPoly":
        """Substitute polynomials (or constants) for variables."""
        result = MultiPoly.zero(self.variables)
        powers: dict[tuple[str, int], MultiPoly] = {}

        def power(name: str, k: int) -> MultiPoly:
            key = (name, k)
            if key not in powers:
                powers[key] = self._lift(mapping[name]) ** k
            return powers[key]

        for e, c in self.terms.items():
            term = MultiPoly.constant(c, self.variables)
            kept = [0] * len(self.variables)
            for i, k in enumerate(e):
                name = self.variables[i]
                if k and name in mapping:
                    term = term * power(name, k)
                else:
                    kept[i] = k
            result = result + term * MultiPoly(self.variables, {tuple(kept): Fraction(1)})
        return result

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """Numeric or exact evaluation at a full assignment."""
        total: Any = 0
        for e, c in self.terms.items():
            v: Any = complex(c) if isinstance(c, AlgebraicNumber) and any(
                isinstance(values[n], complex) for n in self.variables if n in values) else c
            for i, k in enumerate(e):
                if k:
                    v = v * values[self.variables[i]] ** k
            total = total + v
        return total

    def numeric_coefficients(self) -> dict[tuple, complex]:
        return {e: complex(c) for e, c in self.terms.items()}

    def leading_term(self) -> tuple[tuple, Any]:
        e = next(iter(self.terms))
        return e, self.terms[e]

    # -- exact division ----------------------------------------------------------
    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading_term()
        rem = self
        quo: dict[tuple, Any] = {}
        while not rem.is_zero():
            e, c = rem.leading_term()
            if any(a < b for a, b in zip(e, le)):
                raise ArithmeticError("polynomial division is not exact")
            qe = tuple(a - b for a, b in zip(e, le))
            qc = c / lc
            quo[qe] = qc
            rem = rem - other * MultiPoly(self.variables, {qe: qc})
        return MultiPoly(self.variables, quo)

    # -- sympy bridge --------------------------------------------------------------
    def to_sympy(self) -> sympy.Expr:
        if not self.is_rational():
            raise TypeError("only rational polynomials convert to sympy")
        syms = sympy.symbols(self.variables)
        expr = sympy.Integer(0)
        for e, c in self.terms.items():
            mono = sympy.Rational(c.numerator, c.denominator)
            for s, k in zip(syms, e):
                mono *= s ** k
            expr += mono
        return expr

    @classmethod
    def from_sympy(cls, expr, variables=VARIABLE_ORDER) -> "MultiPoly":
        syms = sympy.symbols(variables)
        poly = sympy.Poly(sympy.expand(expr), *syms)
        terms = {}
        for monom, c in poly.terms():
            c = sympy.Rational(c)
            terms[tuple(int(k) for k in monom)] = Fraction(int(c.p), int(c.q))
        return cls(variables, terms)

    # -- printing ----------------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            cs = c.to_text() if isinstance(c, AlgebraicNumber) else str(c)
            if isinstance(c, AlgebraicNumber):
                cs = f"({cs})"
            elif isinstance(c, Fraction) and c.denominator != 1:
                cs = f"({c})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def sylvester_matrix(p: MultiPoly, q: MultiPoly, var: str) -> list[list[MultiPoly]]:
    """Rows of ``p`` coefficients above rows of ``q``, highest degree first."""
    m, n = p.degree(var), q.degree(var)
    pc, qc = p.coefficients_in(var), q.coefficients_in(var)
    zero = MultiPoly.zero(p.variables)
    size = m + n
    rows = []
    for r in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[r + (m - k)] = pc.get(k, zero)
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[r + (n - k)] = qc.get(k, zero)
        rows.append(row)
    return rows


def bareiss_determinant(matrix: list[list[MultiPoly]]) -> MultiPoly:
    a = [list(row) for row in matrix]
    size = len(a)
    if size == 0:
        raise ValueError("empty matrix")
    variables = a[0][0].variables
    sign = 1
    prev = MultiPoly.constant(1, variables)
    for k in range(size - 1):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, size) if not a[r][k].is_zero()), None)
            if swap is None:
                return MultiPoly.zero(variables)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[size - 1][size - 1]
    return det if sign == 1 else -det


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` with respect to ``var``."""
    if not p.involves(var) or not q.involves(var):
        raise EliminationError(f"both polynomials must involve {var} to eliminate it")
    return bareiss_determinant(sylvester_matrix(p, q, var))


def _require_rational(*polys: MultiPoly) -> None:
    for p in polys:
        if not p.is_rational():
            raise TypeError("gcd and factorization are only available over the rationals")


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    _require_rational(p, q)
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    return MultiPoly.from_sympy(sympy.gcd(p.to_sympy(), q.to_sympy()), p.variables)


def squarefree_part(p: MultiPoly) -> MultiPoly:
    _require_rational(p)
    if p.is_zero() or p.is_constant():
        return p
    return MultiPoly.from_sympy(sympy.sqf_part(p.to_sympy(), *sympy.symbols(p.variables)), p.variables)


def squarefree_and_gcd(p: MultiPoly, q: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """Gcd of ``p`` and ``q`` together with the squarefree part of ``p``.

    The gcd is normalized to a positive leading coefficient in ``var``.
    """
    g = poly_gcd(p, q)
    if not g.is_zero():
        lead = g.coefficients_in(var)[g.degree(var)] if g.degree(var) >= 0 else g
        _, lc = lead.leading_term()
        if lc < 0:
            g = -g
    return g, squarefree_part(p)


def factor_rational(p: MultiPoly) -> tuple[Fraction, list[tuple[MultiPoly, int]]]:
    """Irreducible factors over the rationals with multiplicities."""
    _require_rational(p)
    syms = sympy.symbols(p.variables)
    content, facs = sympy.factor_list(p.to_sympy(), *syms)
    content = sympy.Rational(content)
    out = [(MultiPoly.from_sympy(f.as_expr() if hasattr(f, "as_expr") else f, p.variables), int(k)) for f, k in facs]
    out.sort(key=lambda fk: (fk[0].total_degree(), str(fk[0])))
    return Fraction(int(content.p), int(content.q)), out


def polynomial(expr_terms: Iterable[tuple[Any, tuple]], variables=VARIABLE_ORDER) -> MultiPoly:
    """Build from ``(coefficient, exponents)`` pairs; repeated exponents add up."""
    out = MultiPoly.zero(variables)
    for c, e in expr_terms:
        out = out + MultiPoly(variables, {tuple(e): c})
    return out
