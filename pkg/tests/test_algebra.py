from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from conftest import poly
from vanzone.algebra import dense
from vanzone.algebra import numberfield as nf
from vanzone.algebra.isolation import isolate_roots
from vanzone.algebra.multipoly import (
    EliminationError,
    MultiPoly,
    resultant,
    squarefree_and_gcd,
    squarefree_part,
)

X, Y, Z, T = sympy.symbols("x y z t")


# -- resultants ---------------------------------------------------------------


def test_resultant_of_quadratic_and_derivative():
    c = MultiPoly.var("x")
    assert resultant(poly("z^2") - c, poly("2*z"), "z") == c.scale(-4)


def test_resultant_linear_case():
    assert resultant(poly("z - x"), poly("z - y"), "z") == poly("x - y")
    assert resultant(poly("z - x"), poly("z - x"), "z").is_zero()


def test_resultant_discriminant_chain():
    assert resultant(poly("z^2 - (x*y^2 + t)"), poly("2*z"), "z") == poly("-4*(x*y^2 + t)")


def test_resultant_rejects_constant_in_variable():
    with pytest.raises(EliminationError):
        resultant(poly("x + 1"), poly("z^2 - x"), "z")


def _random_poly(rng: random.Random, deg: int) -> sympy.Expr:
    terms = 0
    for k in range(deg + 1):
        terms += rng.randint(-3, 3) * X ** rng.randint(0, 2) * Y ** rng.randint(0, 1) * Z ** k
    return terms + Z ** (deg + 1)


@pytest.mark.parametrize("seed", range(12))
def test_resultant_matches_sympy_and_antisymmetry(seed):
    rng = random.Random(seed)
    p, q = _random_poly(rng, rng.randint(0, 2)), _random_poly(rng, rng.randint(0, 2))
    P, Qp = MultiPoly.from_sympy(p), MultiPoly.from_sympy(q)
    ours = resultant(P, Qp, "z")
    assert ours == MultiPoly.from_sympy(sympy.expand(sympy.resultant(p, q, Z)))
    sign = (-1) ** (P.degree("z") * Qp.degree("z"))
    assert resultant(Qp, P, "z") == ours.scale(sign)


@pytest.mark.parametrize("seed", range(10))
def test_resultant_vanishes_iff_common_factor(seed):
    rng = random.Random(100 + seed)
    roots = [rng.randint(-3, 3) for _ in range(4)]
    p = sympy.prod(Z - r * X for r in roots[:2])
    q = sympy.prod(Z - r * X - rng.choice([0, 1]) for r in roots[2:])
    common = sympy.degree(sympy.gcd(sympy.expand(p), sympy.expand(q)), Z) > 0
    res = resultant(MultiPoly.from_sympy(sympy.expand(p)), MultiPoly.from_sympy(sympy.expand(q)), "z")
    assert res.is_zero() == common


# -- gcd and squarefree -----------------------------------------------------------


def test_squarefree_of_square():
    g, s = squarefree_and_gcd(poly("(x*y^2 + t)^2"), MultiPoly.zero(), "t")
    assert s == poly("x*y^2 + t")


def test_gcd_shared_root():
    g, s = squarefree_and_gcd(poly("x^2 - 1"), poly("x^2 + 2*x + 1"), "x")
    assert g == poly("x + 1")
    assert s == poly("x^2 - 1")


def _up_to_unit(a: MultiPoly, b: MultiPoly) -> bool:
    return (a.scale(b.leading_term()[1]) - b.scale(a.leading_term()[1])).is_zero()


def test_squarefree_idempotent():
    p = poly("z^3 - x*y^2*z + t")
    assert _up_to_unit(squarefree_part(p), p)
    once = squarefree_part(poly("(z - y)^3*(z + x)"))
    assert _up_to_unit(squarefree_part(once), once)
    assert _up_to_unit(once, poly("(z - y)*(z + x)"))


def test_dense_squarefree_decomposition():
    p = dense.mul(dense.mul([Fraction(-1), Fraction(1)], [Fraction(-1), Fraction(1)]), [Fraction(2), Fraction(1)])
    parts = dense.squarefree_decomposition(p)
    assert sorted(m for _, m in parts) == [1, 2]


# -- number field tower ------------------------------------------------------------


def test_extend_by_i():
    i = nf.extend([1, 0, 1], near=1j)
    assert (i * i + 1).is_zero()
    assert abs(complex(i.approx()) - 1j) < 1e-20


def test_extend_by_sqrt2():
    r = nf.extend([-2, 0, 1], near=1.41)
    assert (r * r - 2).is_zero()
    assert complex(r.approx()).real > 0


def test_primitive_cube_root():
    zeta = nf.extend([-1, 0, 0, 1], near=complex(-0.5, 0.866))
    assert (1 + zeta + zeta * zeta).is_zero()
    assert not (zeta - 1).is_zero()


def test_reducible_defining_polynomial_picks_factor():
    # v^3 - 1 = (v - 1)(v^2 + v + 1): the boxed root near 1 is rational, no new level
    one = nf.extend([-1, 0, 0, 1], near=1.0)
    assert (one - 1).is_zero()
    assert nf.top_level() == 0


@pytest.mark.parametrize("seed", range(8))
def test_tower_field_axioms(seed):
    rng = random.Random(seed)
    i = nf.extend([1, 0, 1], near=1j)
    r = nf.extend([-2, 0, 1], near=1.41)
    elems = [Fraction(rng.randint(-5, 5)) + Fraction(rng.randint(-5, 5)) * i + Fraction(rng.randint(1, 5)) * r for _ in range(3)]
    a, b, c = elems
    assert ((a + b) + c - (a + (b + c))).is_zero()
    assert ((a * b) * c - a * (b * c)).is_zero()
    assert (a * a.inverse() - 1).is_zero()
    # zero test against numerics at the boxed roots
    num = complex(a.approx()) * complex(b.approx())
    assert abs(complex((a * b).approx()) - num) < 1e-12 * max(1, abs(num))


def test_roots_of_unity_and_nth_root():
    z6 = nf.root_of_unity(6)
    assert ((z6 ** 6) - 1).is_zero() and not ((z6 ** 3) - 1).is_zero()
    two = nf.Q(2)
    cube = nf.nth_root(two, 3, near=1.26)
    assert (cube ** 3 - 2).is_zero()


def test_isolation_discs_are_disjoint_and_contain_roots():
    coeffs = [Fraction(c) for c in (-6, 11, -6, 1)]  # (v-1)(v-2)(v-3)
    found = isolate_roots(coeffs)
    centres = sorted(complex(c).real for c, _ in found)
    assert [round(c, 12) for c in centres] == [1.0, 2.0, 3.0]
    for c, rad in found:
        assert rad < mpmath.mpf("0.5")
