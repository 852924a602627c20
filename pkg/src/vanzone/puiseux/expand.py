"""Puiseux expansions of plane curves and of the discriminant surface.

``nested_expand`` solves ``D(x, y, t) = 0`` for ``y`` as a Puiseux series in
``t`` whose coefficients are truncated Puiseux series in ``x``, and returns
each conjugacy class in the normal form

    y = b * w(x^(1/d)) * x^(e/d') * t^(q/p) + sum_m b_m(x^(1/n')) * t^(q/p + m/n)

with ``w(0) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Any, Sequence

from ..algebra import numberfield as nf
from ..algebra.multipoly import MultiPoly, factor_rational
from .engine import RawRoot, SeriesRing, TowerRing, constant_of, expand_small_roots, x_series_of
from .newton import EmptyInput, coefficient_lists
from .series import NONZERO, PuiseuxSeries, TruncationTooShort, zero_status


class ExactRoot:
    """Sentinel: the substituted branch annihilates the polynomial."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "exact root"

    def __str__(self):
        return "exact root"


EXACT_ROOT = ExactRoot()


@dataclass
class BranchExpansion:
    q_over_p: Fraction
    e_over_dprime: Fraction
    b: Any
    w: PuiseuxSeries
    tail: list  # (r_m, b_m) with b_m a series in x
    d: int
    n: int
    p: int
    p_prime: int
    n_prime: int
    order: Fraction | None  # t-truncation; None when the branch is a finite exact root
    factor_index: int = 0
    multiplicity: int = 1  # ramification carried by the discriminant factor
    label: str = ""

    def __post_init__(self):
        assert self.q_over_p > 0
        assert self.p * self.p_prime == self.n
        assert self.n_prime == self.d * self.n
        assert self.q_over_p.denominator == self.p
        if self.e_over_dprime == 0:
            assert self.e_over_dprime.denominator == 1
        assert zero_status(self.b) == NONZERO
        assert self.w.terms and self.w.terms[0][0] == 0 and self.w.terms[0][1] == 1
        rs = [r for r, _ in self.tail]
        assert rs == sorted(set(rs))
        for r, _ in self.tail:
            m = (r - self.q_over_p) * self.n
            assert m.denominator == 1 and m > 0

    @property
    def q(self) -> int:
        return self.q_over_p.numerator

    @property
    def e(self) -> int:
        return self.e_over_dprime.numerator

    @property
    def d_prime(self) -> int:
        return self.e_over_dprime.denominator

    @property
    def pair(self) -> tuple[Fraction, Fraction]:
        return (self.q_over_p, self.e_over_dprime)

    @property
    def class_size(self) -> int:
        return self.n

    def leading_coefficient(self) -> PuiseuxSeries:
        return (self.w * self.b).shift(self.e_over_dprime)

    def terms(self) -> list[tuple[Fraction, PuiseuxSeries]]:
        return [(self.q_over_p, self.leading_coefficient())] + list(self.tail)

    def as_series(self) -> PuiseuxSeries:
        return PuiseuxSeries("t", self.terms(), self.order)

    def x_denominator(self) -> int:
        """lcm of all x-denominators appearing in the stored terms."""
        return lcm(self.d_prime, self.w.denominator, *(c.denominator for _, c in self.tail))

    def __str__(self):
        return f"y = {self.as_series()}"


def normal_form(root: RawRoot, *, factor_index: int = 0, multiplicity: int = 1) -> BranchExpansion:
    if not root.terms:
        raise ValueError("the zero root has no normal form")
    E1, c1 = root.terms[0]
    if not isinstance(c1, PuiseuxSeries):
        c1 = PuiseuxSeries.constant("x", c1)
    v, beta = c1.leading()
    w = c1.shift(-v) * (1 / beta if not isinstance(beta, nf.AlgebraicNumber) else beta.inverse())
    n = root.class_size
    p = E1.denominator
    if n % p:
        raise AssertionError("class size is not a multiple of the leading t-denominator")
    d = lcm(v.denominator, w.denominator)
    tail = []
    for E, c in root.terms[1:]:
        if not isinstance(c, PuiseuxSeries):
            c = PuiseuxSeries.constant("x", c)
        delta = c.denominator
        d = lcm(d, delta // gcd(delta, n))
        tail.append((E, c))
    return BranchExpansion(
        q_over_p=E1,
        e_over_dprime=v,
        b=beta,
        w=w,
        tail=tail,
        d=d,
        n=n,
        p=p,
        p_prime=n // p,
        n_prime=d * n,
        order=root.precision,
        factor_index=factor_index,
        multiplicity=multiplicity,
    )


def _has_other_variables(F: MultiPoly, main_var: str, param_var: str) -> list[str]:
    return [v for v in F.variables if v not in (main_var, param_var) and F.involves(v)]


def puiseux_expand(
    F: MultiPoly,
    main_var: str,
    param_var: str,
    order,
    *,
    x_precision=None,
    coefficient_var: str = "x",
) -> list[tuple[PuiseuxSeries, int]]:
    """Roots ``main = s(param)`` tending to 0, one per conjugacy class, with class sizes.

    When ``F`` also involves ``coefficient_var`` the coefficients are truncated
    Puiseux series in that variable, known to relative precision
    ``x_precision`` (default: ``order``).
    """
    if F.is_zero():
        raise EmptyInput("the zero polynomial has no roots to expand")
    order = Fraction(order)
    others = _has_other_variables(F, main_var, param_var)
    if others and others != [coefficient_var]:
        raise ValueError(f"unexpected variables {others}")
    out: list[tuple[PuiseuxSeries, int]] = []
    low = F.low_degree(main_var)
    if low > 1:
        raise ValueError(f"{main_var}^{low} divides the polynomial; it is not squarefree")
    if low == 1:
        out.append((PuiseuxSeries(param_var), 1))
        F = F.exact_div(MultiPoly.var(main_var, F.variables))
    if others:
        X = Fraction(x_precision) if x_precision is not None else order
        ring: Any = SeriesRing(X, coefficient_var)
        A = coefficient_lists(F, main_var, param_var, lambda c: x_series_of(c, coefficient_var))
    else:
        ring = TowerRing()
        A = coefficient_lists(F, main_var, param_var, constant_of)
    for root in expand_small_roots(A, ring, order, param_var):
        out.append((root.as_series(param_var), root.class_size))
    return _canonical(out)


def _canonical(items):
    def key(item):
        s = item[0]
        if not s.terms:
            return (Fraction(-1), 0.0, 0.0)
        e, c = s.terms[0]
        z = _numeric_leading(c)
        return (e, round(z.real, 9), round(z.imag, 9))

    return sorted(items, key=key)


def _numeric_leading(c) -> complex:
    if isinstance(c, PuiseuxSeries):
        return _numeric_leading(c.terms[0][1]) if c.terms else 0j
    return complex(c)


def nested_expand(
    D: MultiPoly,
    order,
    *,
    x_precision=None,
    multiplicities: dict | None = None,
    factor: bool = True,
) -> list[BranchExpansion]:
    """Branches of ``D(x, y, t) = 0`` through ``y = t = 0`` in normal form.

    ``D`` is split into its rational irreducible factors first; each branch
    records the index of the factor it lies on.  ``multiplicities`` maps a
    factor (as a ``MultiPoly``) to the ramification it carries.
    """
    if D.is_zero():
        raise EmptyInput("the zero polynomial has no branches")
    order = Fraction(order)
    X = Fraction(x_precision) if x_precision is not None else max(order, Fraction(4))
    if factor:
        _, facs = factor_rational(D)
        factors = [f for f, _ in facs]
    else:
        factors = [D]
    branches: list[BranchExpansion] = []
    for idx, fac in enumerate(sorted(factors, key=str)):
        if not fac.involves("y"):
            continue  # factors in x and t alone meet y = t = 0 nowhere on the circle
        A = coefficient_lists(fac, "y", "t", x_series_of)
        try:
            M = _small_count(A)
        except ValueError:
            continue
        if M == 0:
            continue
        mult = 1
        if multiplicities:
            mult = next((m for f, m in multiplicities.items() if f == fac), 1)
        roots = expand_small_roots(A, SeriesRing(X), order, "t")
        for root in roots:
            if not root.terms:
                raise TruncationTooShort("a branch is identically zero; the discriminant contains y = 0")
            br = normal_form(root, factor_index=idx, multiplicity=mult)
            if br.q_over_p <= 0:
                raise AssertionError("non-positive leading t-exponent")
            branches.append(br)
    return sorted(branches, key=_branch_key)


def _small_count(A: Sequence[PuiseuxSeries]) -> int:
    for i, a in enumerate(A):
        c0 = a.coefficient(0) if a.terms else 0
        if zero_status(c0) == NONZERO:
            return i
    raise ValueError("D(x, y, 0) vanishes identically")


def _branch_key(br: BranchExpansion):
    z = complex(br.b)
    return (-br.q_over_p, -br.e_over_dprime, round(z.real, 9), round(z.imag, 9), br.factor_index)


def resubstitution_valuation(
    F: MultiPoly,
    branch,
    to_order,
    *,
    main_var: str = "y",
    param_var: str = "t",
    coefficient_var: str = "x",
):
    """Least parameter exponent of ``F`` evaluated on the truncated branch.

    Coefficients in ``coefficient_var`` are truncated series; a coefficient
    with no certified term counts as zero.  Returns ``EXACT_ROOT`` when
    nothing survives.
    """
    to_order = Fraction(to_order)
    if isinstance(branch, BranchExpansion):
        series = branch.as_series()
    else:
        series = branch
    y = PuiseuxSeries(param_var, [(e, c) for e, c in series.terms if e < to_order])
    others = _has_other_variables(F, main_var, param_var)
    if others and others != [coefficient_var]:
        raise ValueError(f"unexpected variables {others}")
    A = coefficient_lists(F, main_var, param_var, lambda c: x_series_of(c, coefficient_var))
    total = PuiseuxSeries(param_var)
    power = PuiseuxSeries.constant(param_var, 1)
    for a in A:
        if not a.is_exact_zero():
            total = total + a * power
        power = power * y
    kept = [(e, c) for e, c in total.terms if zero_status(c) == NONZERO]
    if not kept:
        return EXACT_ROOT
    return kept[0][0]
