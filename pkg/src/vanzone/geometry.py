"""From the input germ to the reduced situation along one singular-locus branch.

Everything here is exact.  "Generic ``a`` on the x-circle" is modelled by
keeping ``x`` as a formal variable: coefficients become truncated Puiseux
series in ``x``, which is the right model because the circle has small radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import product
from math import lcm
from typing import Any

from .algebra.multipoly import (
    MultiPoly,
    factor_rational,
    poly_gcd,
    resultant,
    squarefree_and_gcd,
)
from .errors import HypothesisViolation, InternalError
from .puiseux.expand import EXACT_ROOT, puiseux_expand, resubstitution_valuation
from .puiseux.series import PuiseuxSeries, TruncationTooShort

X, Y, Z, T = (MultiPoly.var(v) for v in "xyzt")


# ---------------------------------------------------------------------------
# records
# ---------------------------------------------------------------------------


@dataclass
class SurfaceGerm:
    f: MultiPoly
    reduced_flag: bool = False

    def __post_init__(self):
        if self.f.involves("t"):
            raise ValueError("a surface germ is a polynomial in x, y, z")
        if self.f.is_zero():
            raise HypothesisViolation("the zero polynomial does not define a surface")
        _, sqf = squarefree_and_gcd(self.f, self.f.diff("z"), "z")
        if sqf.total_degree() != self.f.total_degree() or not _same_up_to_scalar(sqf, self.f):
            raise HypothesisViolation(f"f = {self.f} is not reduced (it has a repeated factor)")
        if self.reduced_flag and any(e[1] + e[2] == 0 for e in self.f.terms):
            raise ValueError("a reduced germ must vanish on the x-axis")


def _same_up_to_scalar(p: MultiPoly, q: MultiPoly) -> bool:
    if set(p.terms) != set(q.terms):
        return False
    ratios = {q.terms[e] / p.terms[e] for e in p.terms}
    return len(ratios) == 1


@dataclass
class SigmaBranch:
    param: tuple[PuiseuxSeries, PuiseuxSeries, PuiseuxSeries]  # (u^k, phi(u), psi(u))
    k: int

    @property
    def is_x_axis(self) -> bool:
        return self.k == 1 and self.param[1].is_exact_zero() and self.param[2].is_exact_zero()

    def polynomials(self) -> tuple[MultiPoly, MultiPoly]:
        """``phi`` and ``psi`` as polynomials in ``x`` standing for ``u``."""
        return _series_to_poly(self.param[1]), _series_to_poly(self.param[2])

    def __str__(self):
        return f"u -> (u^{self.k}, {self.param[1]}, {self.param[2]})"


def _series_to_poly(s: PuiseuxSeries) -> MultiPoly:
    terms = {}
    for e, c in s.terms:
        if e.denominator != 1 or e < 0:
            raise HypothesisViolation("singular-locus branch is not polynomial in its parameter")
        terms[(int(e), 0, 0, 0)] = c
    return MultiPoly(("x", "y", "z", "t"), terms)


SCALES = ("eta", "theta", "alpha", "beta", "gamma", "epsilon")


@total_ordering
@dataclass(frozen=True)
class ScaleMonomial:
    """A product of powers of the symbolic scales, compared by size as all scales tend to 0."""

    exps: tuple[Fraction, ...]

    @classmethod
    def of(cls, **kw) -> "ScaleMonomial":
        return cls(tuple(Fraction(kw.get(s, 0)) for s in SCALES))

    def __mul__(self, other: "ScaleMonomial") -> "ScaleMonomial":
        return ScaleMonomial(tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __lt__(self, other: "ScaleMonomial") -> bool:
        # eta << theta << alpha: the first differing exponent decides,
        # a larger exponent of a smaller scale means a smaller quantity
        for a, b in zip(self.exps, other.exps):
            if a != b:
                return a > b
        return False

    def __str__(self):
        parts = [f"{s}^{e}" for s, e in zip(SCALES, self.exps) if e]
        return "*".join(parts) if parts else "1"


@dataclass
class ScaleProfile:
    """Symbolic radii ``0 < eta << theta << alpha < beta < gamma < epsilon``.

    ``numeric`` optionally instantiates the scales for the numeric probe.
    """

    numeric: dict | None = None

    def monomial(self, **exps) -> ScaleMonomial:
        return ScaleMonomial.of(**exps)

    def strictly_smaller(self, a: ScaleMonomial, b: ScaleMonomial) -> bool:
        return a < b

    def evaluate(self, m: ScaleMonomial) -> float:
        if not self.numeric:
            raise ValueError("no numeric instantiation of the scales")
        v = 1.0
        for s, e in zip(SCALES, m.exps):
            if e:
                v *= float(self.numeric[s]) ** float(e)
        return v


@dataclass
class GenericityReport:
    weierstrass_ok: bool
    claim_ok: bool
    transversality_ok: bool
    polar_curve_components: list[str] = field(default_factory=list)
    discriminant_curve: str = ""
    suggested_shear: tuple[int, int, int] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.weierstrass_ok and self.claim_ok and self.transversality_ok


@dataclass
class DiscriminantData:
    raw: MultiPoly
    D: MultiPoly
    factors: list[tuple[MultiPoly, int]]  # factors of D with their multiplicity in raw
    split_off: list[tuple[MultiPoly, int]]  # factors not involving t

    def multiplicity_map(self) -> dict:
        return {f: m for f, m in self.factors}


@dataclass
class TransversalInvariants:
    mu: int
    branch_count: int
    euler: int
    annulus_flag: bool
    mu_teissier: int  # the same number from I(f_a, f_a,z) - N + 1


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def apply_shear(f: MultiPoly, lam, mu, nu) -> MultiPoly:
    """``f(x, y + lam*x, z + mu*x + nu*y)``."""
    return f.subs({"y": Y + X * Fraction(lam), "z": Z + X * Fraction(mu) + Y * Fraction(nu)})


def _z_order(p: MultiPoly) -> int | None:
    """``ord_z`` of a polynomial in ``z`` alone (after substitution)."""
    if p.is_zero():
        return None
    return p.low_degree("z")


def _generic_y0_z_order(f: MultiPoly) -> int | None:
    g = f.subs({"y": 0})
    if g.is_zero():
        return None
    return g.low_degree("z")


def _eliminate_z(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    if p.involves("z") and q.involves("z"):
        return resultant(p, q, "z")
    return p if not p.involves("z") else q


def covering_degree(germ: SurfaceGerm | MultiPoly) -> int:
    """``N = ord_z f(0, 0, z)``: the number of z-sheets of the map over the solid torus."""
    f = germ.f if isinstance(germ, SurfaceGerm) else germ
    n = _z_order(f.subs({"x": 0, "y": 0}))
    if n is None:
        raise HypothesisViolation("f(0, 0, z) vanishes identically: coordinates are not Weierstrass for z")
    return n


def check_sheets(germ: SurfaceGerm | MultiPoly) -> int:
    """``covering_degree``, refusing germs whose sheet count jumps along the x-axis."""
    f = germ.f if isinstance(germ, SurfaceGerm) else germ
    n = covering_degree(f)
    generic = _generic_y0_z_order(f)
    if generic != n:
        raise HypothesisViolation(
            f"ord_z f(x, 0, z) = {generic} at generic x differs from ord_z f(0, 0, z) = {n}; "
            "sheets escaping the polydisc are not supported"
        )
    return n


# ---------------------------------------------------------------------------
# singular locus and reduction
# ---------------------------------------------------------------------------


def singular_locus(germ: SurfaceGerm, order=5) -> list[SigmaBranch]:
    """Branches of ``{f = f_y = f_z = 0}`` through the origin.

    Components inside ``{x = 0}`` are not reported.  Only branches with a
    finite polynomial parametrization over the rationals are supported.
    """
    f = germ.f
    fy, fz = f.diff("y"), f.diff("z")
    g = poly_gcd(poly_gcd(f, fy), fz)
    if not g.is_constant():
        raise HypothesisViolation(f"the singular locus contains the surface {g} = 0; it must be a curve")
    if not fz.involves("z"):
        raise HypothesisViolation("f is not monic enough in z: its z-derivative does not involve z")
    plane = poly_gcd(_eliminate_z(f, fz), _eliminate_z(fy, fz))
    if plane.is_constant():
        return []
    _, facs = factor_rational(plane)
    out: list[SigmaBranch] = []
    for c, _ in facs:
        if not c.subs({"x": 0, "y": 0}).is_zero():
            continue
        if not c.involves("y"):
            continue  # a component inside x = 0
        for phi, k in puiseux_expand(c, "y", "x", order):
            if not phi.is_exact:
                raise HypothesisViolation(f"singular-locus branch {phi} has an infinite expansion; unsupported")
            if any(not isinstance(cf, Fraction) for _, cf in phi.terms):
                raise HypothesisViolation("singular-locus branch with irrational coefficients is unsupported")
            u_phi = phi.map_exponents(lambda e: e * k)
            out.extend(_z_branches(f, fy, fz, u_phi, k, order))
    out = _dedupe(out)
    out.sort(key=lambda s: (s.k, str(s.param[1]), str(s.param[2])))
    return out


def _z_branches(f, fy, fz, u_phi: PuiseuxSeries, k: int, order) -> list[SigmaBranch]:
    phi_poly = _series_to_poly(u_phi)
    sub = {"x": X ** k, "y": phi_poly}
    fs, fys, fzs = (p.subs(sub) for p in (f, fy, fz))
    h = poly_gcd(poly_gcd(fs, fzs), fys)
    out = []
    if h.is_constant() or not h.involves("z"):
        return out
    _, facs = factor_rational(h)
    for c, _ in facs:
        if not c.involves("z") or not c.subs({"x": 0, "z": 0}).is_zero():
            continue
        for psi, cls in puiseux_expand(c, "z", "x", order):
            if cls != 1 or not psi.is_exact or any(not isinstance(cf, Fraction) for _, cf in psi.terms):
                raise HypothesisViolation("singular-locus branch without a polynomial parametrization")
            u = PuiseuxSeries("u", [(k, Fraction(1))])
            sb = SigmaBranch(
                (u, PuiseuxSeries("u", u_phi.terms), PuiseuxSeries("u", psi.terms)), k
            )
            _check_membership(f, fy, fz, sb)
            out.append(sb)
    return out


def _check_membership(f, fy, fz, sb: SigmaBranch) -> None:
    phi, psi = sb.polynomials()
    sub = {"x": X ** sb.k, "y": phi, "z": psi}
    for p in (f, fy, fz):
        if not p.subs(sub).is_zero():
            raise InternalError(f"parametrized branch {sb} does not lie on the singular locus")


def _dedupe(branches: list[SigmaBranch]) -> list[SigmaBranch]:
    seen = set()
    out = []
    for b in branches:
        key = (b.k, str(b.param[1]), str(b.param[2]))
        if key not in seen:
            seen.add(key)
            out.append(b)
    return out


def theta_reduce(germ: SurfaceGerm, sigma: SigmaBranch, order=5) -> SurfaceGerm:
    """``g = f(x^k, y + phi(x), z + psi(x))``: ``sigma`` becomes the x-axis."""
    f = germ.f
    if sigma.is_x_axis:
        g = f
    else:
        phi, psi = sigma.polynomials()
        g = f.subs({"x": X ** sigma.k, "y": Y + phi, "z": Z + psi})
    if any(e[1] + e[2] == 0 for e in g.terms):
        raise InternalError("the reduced germ does not vanish on the x-axis")
    red = SurfaceGerm(g, reduced_flag=True)
    check_sheets(red)
    return red


# ---------------------------------------------------------------------------
# genericity
# ---------------------------------------------------------------------------


def _lowest_form(p: MultiPoly) -> MultiPoly:
    low = min(e[0] + e[1] for e in p.terms)
    return MultiPoly(p.variables, {e: c for e, c in p.terms.items() if e[0] + e[1] == low})


def _vanishes_on(c: MultiPoly, sb: SigmaBranch) -> bool:
    phi, _ = sb.polynomials()
    return c.subs({"x": X ** sb.k, "y": phi}).is_zero()


def _check_once(f: MultiPoly) -> GenericityReport:
    notes: list[str] = []
    weier = not f.subs({"x": 0, "y": 0}).is_zero()
    try:
        germ = SurfaceGerm(f)
    except HypothesisViolation as exc:
        return GenericityReport(weier, False, False, notes=[str(exc)])
    fz = f.diff("z")
    polar = []
    fy = f.diff("y")
    # projection of {f_y = f_z = 0} to the (x, y)-plane
    proj = None
    if fz.involves("z") and fy.involves("z"):
        proj = resultant(fy, fz, "z")
    elif fz.involves("z"):
        proj = fy
    elif fy.involves("z"):
        proj = fz
    if proj is not None and not proj.is_zero() and not proj.is_constant():
        _, pf = factor_rational(proj)
        polar = [str(c) for c, _ in pf if c.subs({"x": 0, "y": 0}).is_zero()]
    claim = True
    sigma: list[SigmaBranch] = []
    try:
        sigma = singular_locus(germ)
        fx = f.diff("x")
        for sb in sigma:
            phi, psi = sb.polynomials()
            if not fx.subs({"x": X ** sb.k, "y": phi, "z": psi}).is_zero():
                claim = False
                notes.append(f"f_x does not vanish on {sb}")
    except HypothesisViolation as exc:
        claim = False
        notes.append(str(exc))
    trans = True
    disc = ""
    if weier and fz.involves("z"):
        delta0 = resultant(f, fz, "z")
        disc = str(delta0)
        if delta0.is_zero():
            trans = False
            notes.append("the discriminant curve is not a curve")
        else:
            _, facs = factor_rational(delta0)
            rest = MultiPoly.constant(1)
            for c, m in facs:
                if not c.subs({"x": 0, "y": 0}).is_zero():
                    continue
                if any(_vanishes_on(c, sb) for sb in sigma):
                    continue
                rest = rest * c ** m
            if not rest.is_constant():
                low = _lowest_form(rest)
                if low.subs({"x": 1, "y": 0}).is_zero():
                    trans = False
                    notes.append("the x-axis direction lies in the tangent cone of the discriminant curve")
    elif not weier:
        trans = False
    return GenericityReport(weier, claim, trans, polar, disc, None, notes)


def genericity_check(f: MultiPoly, *, search: int = 2) -> GenericityReport:
    """Decide the three genericity conditions; on failure look for a shear.

    Shears ``(x, y + lam*x, z + mu*x + nu*y)`` with small integers are tried in a
    fixed order; the first one passing all checks is suggested.
    """
    report = _check_once(f)
    if report.passed:
        return report
    rng = sorted(range(-search, search + 1), key=lambda v: (abs(v), -v))
    for lam, mu, nu in product(rng, repeat=3):
        if (lam, mu, nu) == (0, 0, 0):
            continue
        if _check_once(apply_shear(f, lam, mu, nu)).passed:
            report.suggested_shear = (lam, mu, nu)
            break
    if report.suggested_shear is None:
        report.notes.append("no small shear of the form (x, y + lam*x, z + mu*x + nu*y) passes all checks")
    return report


# ---------------------------------------------------------------------------
# discriminant and transversal type
# ---------------------------------------------------------------------------


def discriminant_surface(germ: SurfaceGerm) -> DiscriminantData:
    """Squarefree discriminant ``D(x, y, t)`` of ``(x, y, z) -> (x, y, f)``."""
    f = germ.f
    fz = f.diff("z")
    raw = resultant(f - T, fz, "z")
    if raw.is_zero():
        raise HypothesisViolation("the discriminant vanishes identically; f is not reduced")
    _, facs = factor_rational(raw)
    kept, split = [], []
    for c, m in facs:
        if c.is_constant():
            continue
        (kept if c.involves("t") else split).append((c, m))
    D = MultiPoly.constant(1)
    for c, _ in kept:
        D = D * c
    return DiscriminantData(raw, D, kept, split)


def _branch_count(f: MultiPoly, order) -> tuple[int, list]:
    count = 0
    classes = []
    for c, m in factor_rational(f)[1]:
        if not c.subs({"y": 0, "z": 0}).is_zero():
            continue
        if not c.involves("z"):
            if c.involves("y"):
                count += 1  # the line y = 0 inside a transversal slice
                classes.append(("y=0", 1))
            continue
        for s, n in puiseux_expand(c, "z", "y", order):
            classes.append((s, n))
            count += 1
    return count, classes


def intersection_number(F: MultiPoly, G: MultiPoly, *, order=6, max_order=48) -> int:
    """Local intersection multiplicity at ``y = z = 0`` of two curves with coefficients in ``x``.

    Sums ``ord_y F(y, z(y))`` over the branches ``z(y)`` of ``G`` (with class
    sizes and multiplicities), plus the contribution of a ``y = 0`` component.
    """
    total = Fraction(0)
    for c, m in factor_rational(G)[1]:
        if c.is_constant() or not c.subs({"y": 0, "z": 0}).is_zero():
            continue
        if not c.involves("z"):
            if not c.involves("y"):
                continue
            # c is y (an irreducible factor vanishing at the origin without z)
            on_axis = F.subs({"y": 0})
            if on_axis.is_zero():
                raise HypothesisViolation("the curves share the component y = 0")
            total += m * on_axis.low_degree("z")
            continue
        R = Fraction(order)
        while True:
            try:
                vals = []
                for s, n in puiseux_expand(c, "z", "y", R):
                    v = resubstitution_valuation(F, s, R, main_var="z", param_var="y")
                    if v is EXACT_ROOT:
                        if s.is_exact:
                            raise HypothesisViolation("the curves share a component; the transversal germ is not reduced")
                        raise TruncationTooShort("valuation not reached")
                    if v >= R:
                        raise TruncationTooShort("valuation not reached")
                    vals.append(n * v)
                break
            except TruncationTooShort:
                R *= 2
                if R > max_order:
                    raise
        total += m * sum(vals)
    if total.denominator != 1:
        raise InternalError(f"non-integral intersection number {total}")
    return int(total)


def transversal_invariants(germ: SurfaceGerm, order=6) -> TransversalInvariants:
    """Milnor number and branch count of the slice ``f_a(y, z) = f(a, y, z)``."""
    f = germ.f
    fy, fz = f.diff("y"), f.diff("z")
    mu = intersection_number(fy, fz, order=order)
    N = covering_degree(germ)
    mu_t = intersection_number(f, fz, order=order) - N + 1
    count, _ = _branch_count(f, order)
    if mu < 1:
        raise HypothesisViolation("the transversal germ is smooth; the singular locus is not along this branch")
    return TransversalInvariants(mu, count, 1 - mu, mu == 1 and count == 2, mu_t)
