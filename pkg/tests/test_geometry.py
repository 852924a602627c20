from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from conftest import poly
from vanzone.errors import HypothesisViolation
from vanzone.geometry import (
    ScaleMonomial,
    ScaleProfile,
    SigmaBranch,
    SurfaceGerm,
    apply_shear,
    check_sheets,
    covering_degree,
    discriminant_surface,
    genericity_check,
    singular_locus,
    theta_reduce,
    transversal_invariants,
)
from vanzone.puiseux import PuiseuxSeries

F = Fraction


def reduced(text: str) -> SurfaceGerm:
    g = SurfaceGerm(poly(text))
    [sigma] = singular_locus(g, 5)
    return theta_reduce(g, sigma, 5)


# -- singular locus --------------------------------------------------------------------


@pytest.mark.parametrize("text", ["z^2 - x*y^2", "z^2 - y^3", "z^2 - y^2"])
def test_singular_locus_is_the_x_axis(text):
    [b] = singular_locus(SurfaceGerm(poly(text)), 5)
    assert b.is_x_axis and b.k == 1


def test_singular_locus_along_a_line():
    [b] = singular_locus(SurfaceGerm(poly("z^2 - (y - x)^2*x")), 5)
    phi, psi = b.polynomials()
    assert phi == poly("x") and psi.is_zero()


def test_two_dimensional_singular_locus_is_rejected():
    with pytest.raises(HypothesisViolation):
        SurfaceGerm(poly("z^2"))


# -- reduction ------------------------------------------------------------------------------


def test_theta_reduce_identity_on_x_axis():
    g = SurfaceGerm(poly("z^2 - x*y^2"))
    [b] = singular_locus(g)
    assert theta_reduce(g, b).f == g.f


def test_theta_reduce_translates_the_branch():
    g = SurfaceGerm(poly("z^2 - (y - x)^2*x"))
    [b] = singular_locus(g)
    assert theta_reduce(g, b).f == poly("z^2 - x*y^2")


def test_theta_reduce_ramified_parameter():
    g = SurfaceGerm(poly("z^2 - x*y^2"))
    u = PuiseuxSeries("u", [(F(2), 1)])
    sigma = SigmaBranch((u, PuiseuxSeries("u"), PuiseuxSeries("u")), 2)
    assert theta_reduce(g, sigma).f == poly("z^2 - x^2*y^2")


# -- genericity ---------------------------------------------------------------------------


def test_generic_coordinates_pass():
    r = genericity_check(poly("z^2 - x*y^2"))
    assert r.weierstrass_ok and r.claim_ok and r.transversality_ok
    assert sorted(r.polar_curve_components) == ["x", "y"]


def test_whitney_umbrella_fails_weierstrass():
    r = genericity_check(poly("x^2 + y^2*z"))
    assert not r.weierstrass_ok and not r.passed
    assert r.notes


def test_node_times_line_passes():
    assert genericity_check(poly("z^2 - y^2")).passed


def test_tangent_discriminant_gets_a_shear():
    f = poly("z^2 - y^2*(y + x^2)")
    r = genericity_check(f)
    assert r.weierstrass_ok and r.claim_ok and not r.transversality_ok
    assert r.suggested_shear == (1, 0, 0)
    assert genericity_check(apply_shear(f, *r.suggested_shear)).passed
    assert genericity_check(f).suggested_shear == r.suggested_shear


# -- discriminant -------------------------------------------------------------------------


def test_discriminant_whitney_family():
    d = discriminant_surface(reduced("z^2 - x*y^2"))
    assert d.raw == poly("-4*x*y^2 - 4*t") or d.raw == poly("4*x*y^2 + 4*t")
    assert d.D == poly("x*y^2 + t")


@pytest.mark.parametrize("m,k,l", [(2, 1, 2), (3, 1, 2), (3, 2, 3), (2, 1, 3)])
def test_discriminant_hirzebruch(m, k, l):
    d = discriminant_surface(reduced(f"z^{m} - x^{k}*y^{l}"))
    assert d.D == poly(f"x^{k}*y^{l} + t")
    # resultant of z^m - c with m z^(m-1): +-m^m c^(m-1), independently from sympy
    z, c = sympy.symbols("z c")
    raw = sympy.resultant(z ** m - c, m * z ** (m - 1), z)
    x, y, t = sympy.symbols("x y t")
    expected = sympy.expand(raw.subs(c, x ** k * y ** l + t))
    assert d.raw == poly(str(expected)) or d.raw == poly(str(-expected))
    assert d.multiplicity_map()[d.D] == m - 1


def test_discriminant_node():
    assert discriminant_surface(reduced("z^2 - y^2")).D == poly("y^2 + t")


# -- transversal invariants ---------------------------------------------------------------


def _milnor_oracle(text: str) -> int:
    """dim Q[y, z] / (f_y, f_z) at x = 2: equals mu when the origin is the only critical point."""
    x, y, z = sympy.symbols("x y z")
    fa = sympy.sympify(text.replace("^", "**")).subs(x, 2)
    G = sympy.groebner([sympy.diff(fa, y), sympy.diff(fa, z)], y, z, order="grevlex")
    lead = [sympy.Poly(g, y, z).monoms(order="grevlex")[0] for g in G.exprs]
    count = 0
    for i in range(60):
        for j in range(60):
            if not any(i >= a and j >= b for a, b in lead):
                count += 1
    return count


@pytest.mark.parametrize(
    "text,branches,annulus",
    [("z^2 - x*y^2", 2, True), ("z^3 - x*y^3", 3, False), ("z^2 - y^2", 2, True), ("z^2 - y^3", 1, False),
     ("z^3 - x^2*y^3", 3, False), ("z^2 - x*y^3", 1, False)],
)
def test_transversal_invariants(text, branches, annulus):
    inv = transversal_invariants(reduced(text))
    assert inv.mu == _milnor_oracle(text) == inv.mu_teissier
    assert inv.branch_count == branches
    assert inv.euler == 1 - inv.mu
    assert inv.annulus_flag is annulus


def test_milnor_of_z3_minus_xy3_is_four():
    assert transversal_invariants(reduced("z^3 - x*y^3")).mu == 4


# -- covering degree ------------------------------------------------------------------------


@pytest.mark.parametrize("text,N", [("z^2 - x*y^2", 2), ("z^3 - x^2*y^2", 3), ("(z - y)*(z + y)*(z - x)", 3)])
def test_covering_degree(text, N):
    assert covering_degree(poly(text)) == N


def test_escaping_sheet_is_rejected():
    with pytest.raises(HypothesisViolation):
        check_sheets(poly("(z - y)*(z + y)*(z - x)"))


def test_covering_degree_requires_weierstrass():
    with pytest.raises(HypothesisViolation):
        covering_degree(poly("x^2 + y^2*z"))


# -- symbolic scales -----------------------------------------------------------------------


def test_scale_order():
    eta = ScaleMonomial.of(eta=1)
    zone = ScaleMonomial.of(eta=F(1, 2), alpha=F(-1, 3))
    theta = ScaleMonomial.of(theta=1)
    assert eta < zone < theta
    assert ScaleMonomial.of(eta=1, alpha=5) < ScaleMonomial.of(eta=F(1, 2))
    assert ScaleMonomial.of(alpha=2) < ScaleMonomial.of(alpha=1)
    assert str(zone) == "eta^1/2*alpha^-1/3"


def test_scale_profile_numeric():
    prof = ScaleProfile({"eta": 1e-8, "theta": 1e-3, "alpha": 0.25})
    assert prof.evaluate(ScaleMonomial.of(eta=F(1, 2), alpha=-1)) == pytest.approx(4e-4)
    assert prof.strictly_smaller(ScaleMonomial.of(eta=1), ScaleMonomial.of(theta=1))
