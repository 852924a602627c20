from __future__ import annotations

import cmath
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import poly
from vanzone.puiseux import (
    EXACT_ROOT,
    InconsistentBranchSet,
    EmptyInput,
    PuiseuxSeries,
    TruncationTooShort,
    monodromy_permutation,
    nested_expand,
    newton_polygon,
    puiseux_expand,
    resubstitution_valuation,
)
from vanzone.algebra.multipoly import MultiPoly

F = Fraction


# -- series arithmetic --------------------------------------------------------------


def test_series_arithmetic_with_fractional_and_negative_exponents():
    a = PuiseuxSeries("x", [(F(-1, 2), 1), (F(1, 3), 2)])
    b = PuiseuxSeries("x", [(F(1, 2), 1)])
    prod = a * b
    assert prod.terms[0][0] == 0 and prod.coefficient(F(5, 6)) == 2
    assert prod.denominator % 6 == 0
    assert (a + a - a * 2).is_exact_zero()


def test_series_inverse_to_precision():
    one_plus_x = PuiseuxSeries("x", [(F(0), 1), (F(1), 1)])
    inv = one_plus_x.inverse(F(6))
    check = (one_plus_x * inv).truncate(F(6))
    assert [(e, c) for e, c in check.terms] == [(F(0), 1)]


def _const(c) -> int:
    if isinstance(c, PuiseuxSeries):
        return int(c.coefficient(0)) if not c.is_exact_zero() else 0
    return int(c)


# -- Newton polygons ------------------------------------------------------------------


def test_polygon_single_edge():
    (edge,) = newton_polygon(poly("y^2 - t"), "y", "t")
    assert edge.slope == F(1, 2) and edge.lattice_length == 1
    assert [_const(c) for c in edge.characteristic_poly] == [-1, 0, 1]


def test_polygon_with_x_coefficient():
    (edge,) = newton_polygon(poly("x*y^2 + t"), "y", "t")
    assert edge.slope == F(1, 2)
    lead = edge.characteristic_poly[-1]
    assert list(lead.terms) == [(F(1), 1)] and lead.variable == "x"


def test_polygon_two_edges():
    edges = newton_polygon(poly("(y^2 - t)*(y - t)"), "y", "t")
    assert sorted(e.slope for e in edges) == [F(1, 2), F(1)]


def test_polygon_of_zero_is_rejected():
    with pytest.raises(EmptyInput):
        newton_polygon(MultiPoly.zero(), "y", "t")


# -- expansions --------------------------------------------------------------------------


def test_expand_square_root():
    [(s, size)] = puiseux_expand(poly("y^2 - t"), "y", "t", 5)
    assert size == 2 and list(s.terms) == [(F(1, 2), 1)]


def test_expand_cusp():
    [(s, size)] = puiseux_expand(poly("z^3 - y^2"), "z", "y", 5)
    assert size == 3 and list(s.terms) == [(F(2, 3), 1)]


def test_expand_with_x_coefficients():
    [(s, size)] = puiseux_expand(poly("x*y^2 + t"), "y", "t", 5)
    assert size == 2
    (e, c), = s.terms
    assert e == F(1, 2)
    (ex, b), = c.terms
    assert ex == F(-1, 2) and abs(complex(b) ** 2 + 1) < 1e-12


@pytest.mark.parametrize(
    "text",
    ["y^3 - t^2 - t^3*y", "(y - t - 2*t^2)*(y^2 - t - t^2)", "y^2 - 2*t^3 + t^2*y"],
)
def test_expansions_against_numeric_roots(text):
    """Every small numeric root is a value of some conjugate and conversely."""
    f = poly(text)
    items = puiseux_expand(f, "y", "t", 6)
    t0 = 1e-3
    values = []
    for s, size in items:
        for j in range(size):
            values.append(s.evaluate(t0, branch_root=cmath.exp(2j * cmath.pi * j / s.denominator) * t0 ** (1 / s.denominator)))
    coeffs = f.coefficients_in("y")
    deg = max(coeffs)
    c = [complex(coeffs[k].evaluate({"t": t0})) if k in coeffs else 0 for k in range(deg, -1, -1)]
    small = sorted((r for r in np.roots(c) if abs(r) < 0.1), key=abs)
    assert len(small) == len(values)
    for r in small:
        assert min(abs(r - v) for v in values) < 1e-7


# -- nested expansions ----------------------------------------------------------------


def test_nested_expand_whitney_family():
    [br] = nested_expand(poly("x*y^2 + t"), 5)
    assert br.pair == (F(1, 2), F(-1, 2))
    assert abs(complex(br.b) ** 2 + 1) < 1e-12
    assert list(br.w.terms) == [(F(0), 1)] and br.tail == []


@pytest.mark.parametrize("k,l", [(1, 2), (1, 3), (2, 3), (2, 2), (3, 2)])
def test_nested_expand_hirzebruch_discriminant(k, l):
    branches = nested_expand(poly(f"x^{k}*y^{l} + t"), 5)
    assert {b.pair for b in branches} == {(F(1, l), F(-k, l))}
    for b in branches:
        assert list(b.w.terms) == [(F(0), 1)]
        assert b.p * b.p_prime == b.n and b.n_prime == b.d * b.n


def test_nested_expand_two_factors():
    pairs = sorted(b.pair for b in nested_expand(poly("(y^2 - t)*(y - t)"), 5))
    assert pairs == [(F(1, 2), F(0)), (F(1), F(0))]


def test_nested_expand_mass_conservation():
    D = poly("(y^2 - x*t)*(y^3 - t^2*(1 + x))*(y - x*t)")
    branches = nested_expand(D, 5)
    assert sum(b.class_size for b in branches) == D.subs({"t": 0}).low_degree("y")


# -- monodromy -------------------------------------------------------------------------


def test_monodromy_of_conjugate_pair():
    i = complex(0, 1)
    from vanzone.algebra import numberfield as nf

    I = nf.extend([1, 0, 1], near=i)
    lead = PuiseuxSeries("x", [(F(-1, 2), I)])
    s1 = PuiseuxSeries("t", [(F(1, 2), lead)])
    s2 = PuiseuxSeries("t", [(F(1, 2), lead.scale(-1))])
    perm = monodromy_permutation([s1, s2], "x")
    assert perm.cycle_type == (2,) and perm.orbit_count() == 1


def test_monodromy_trivial_for_integral_exponents():
    [br] = nested_expand(poly("y - x*t"), 5)
    assert monodromy_permutation([br], "x").order == 1


def test_monodromy_three_cycle():
    [br] = nested_expand(poly("x*y^3 + t"), 5)
    perm = monodromy_permutation([br], "x")
    assert perm.cycle_type == (3,) and perm.orbit_count() == 1
    assert 3 % perm.order == 0


def test_incomplete_class_is_rejected():
    s = PuiseuxSeries("t", [(F(1, 2), PuiseuxSeries("x", [(F(-1, 2), 1)]))])
    with pytest.raises(InconsistentBranchSet):
        monodromy_permutation([s], "x")


# -- resubstitution -------------------------------------------------------------------------


def test_resubstitution_sentinels():
    [(s, _)] = puiseux_expand(poly("y^2 - t"), "y", "t", 5)
    assert resubstitution_valuation(poly("y^2 - t"), s, 5, coefficient_var="x") is EXACT_ROOT
    [br] = nested_expand(poly("x*y^2 + t"), 5)
    assert resubstitution_valuation(poly("x*y^2 + t"), br, 5) is EXACT_ROOT


@pytest.mark.parametrize("seed", range(15))
def test_resubstitution_meets_order_on_random_products(seed):
    rng = random.Random(seed)
    factors = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(1, 3)
        a, b = rng.choice([1, 2, -1]), rng.randint(1, 3)
        factors.append(f"(y^{k} - {a}*x^{rng.randint(0, 2)}*t^{b} - t^{b + 1}*y)")
    D = poly("*".join(factors))
    order = F(rng.choice([3, 4, 5]))
    while True:
        try:
            branches = nested_expand(D, order)
            break
        except TruncationTooShort:
            order *= 2  # the caller's retry rule
    for br in branches:
        v = resubstitution_valuation(D, br, order)
        assert v is EXACT_ROOT or v >= order
