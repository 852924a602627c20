"""Exact algebraic numbers living in a growing tower of number fields.

The tower is a chain ``Q = K_0 ⊂ K_1 ⊂ ... ⊂ K_L``.  Every level is stored in
absolute form ``Q(θ_j)`` with the minimal polynomial of ``θ_j`` over ``Q``, a
certified isolating box for the chosen complex root, and the image of
``θ_{j-1}`` as a polynomial in ``θ_j``.  Extending by a root of a polynomial
over the top level first factors that polynomial over the top level (norm
method), keeps the irreducible factor owning the boxed root, then computes a
primitive element ``α + s·θ``.

Elements are immutable.  Tower growth is serialized by a module lock.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Sequence

import mpmath
import sympy
from sympy import QQ, Poly

from . import dense
from .isolation import IsolatingBox, IsolationError, box_of, isolate_roots, WORKING_DPS


class TowerError(ArithmeticError):
    pass


@dataclass
class Level:
    index: int
    minpoly: tuple[Fraction, ...]  # monic, over Q, lowest degree first
    approx: mpmath.mpc
    radius: mpmath.mpf
    box: IsolatingBox
    prev_image: tuple[Fraction, ...]  # θ_{index-1} expressed in θ_index
    defining_factor: tuple = ()  # irreducible factor over the previous level
    adjoined: tuple[Fraction, ...] = ()  # the adjoined root expressed in θ_index
    label: str = ""
    _images: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1


_LOCK = threading.RLock()
_LEVELS: list[Level] = []
_UNITY_CACHE: dict[int, "AlgebraicNumber"] = {}
_GENERATION = [0]


def _init_tower() -> None:
    _LEVELS.clear()
    _UNITY_CACHE.clear()
    zero = mpmath.mpc(0)
    _LEVELS.append(
        Level(0, (Fraction(0), Fraction(1)), zero, mpmath.mpf(0), IsolatingBox(*(Fraction(0),) * 4), (Fraction(0),), label="Q")
    )


_init_tower()


def reset_tower() -> None:
    """Drop every extension.  Existing non-rational elements become invalid."""
    with _LOCK:
        _GENERATION[0] += 1
        _init_tower()


def top_level() -> int:
    return len(_LEVELS) - 1


def level(i: int) -> Level:
    return _LEVELS[i]


def levels() -> list[Level]:
    return list(_LEVELS)


def _reduce(coeffs: Sequence[Fraction], lev: Level) -> tuple[Fraction, ...]:
    p = dense.trim(coeffs)
    if len(p) > lev.degree:
        p = dense.rem(p, list(lev.minpoly))
    p = list(p) + [Fraction(0)] * (lev.degree - len(p))
    return tuple(p)


@total_ordering
class AlgebraicNumber:
    """Element of some level of the tower, stored as a polynomial in ``θ_level``."""

    __slots__ = ("level", "coeffs", "_hash", "generation")

    def __init__(self, lev: int, coeffs: Iterable):
        if lev >= len(_LEVELS):
            raise TowerError("element refers to a level that no longer exists")
        self.level = lev
        self.generation = _GENERATION[0]
        self.coeffs = _reduce([Fraction(c) for c in coeffs], _LEVELS[lev])
        self._hash = None

    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        return cls(0, [Fraction(q)])

    @classmethod
    def coerce(cls, x) -> "AlgebraicNumber":
        if isinstance(x, AlgebraicNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to AlgebraicNumber")

    # -- level bookkeeping -------------------------------------------------
    def lift(self, target: int) -> "AlgebraicNumber":
        if self.level and self.generation != _GENERATION[0]:
            raise TowerError("element belongs to a tower that has been reset")
        if target == self.level:
            return self
        if target < self.level:
            raise TowerError("cannot push an element down the tower")
        if self.level == 0:
            return AlgebraicNumber(target, [self.coeffs[0]])
        image = _generator_image(self.level, target)
        acc = [Fraction(0)]
        for c in reversed(self.coeffs):
            acc = dense.add(_mulmod(acc, image, _LEVELS[target]), [c])
        return AlgebraicNumber(target, acc)

    def _pair(self, other) -> tuple["AlgebraicNumber", "AlgebraicNumber"]:
        other = AlgebraicNumber.coerce(other)
        lev = max(self.level, other.level)
        return self.lift(lev), other.lift(lev)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise TowerError("element is not rational")
        return self.coeffs[0]

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return AlgebraicNumber(a.level, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicNumber(self.level, [-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        return AlgebraicNumber(a.level, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return AlgebraicNumber.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.level, [c * other for c in self.coeffs])
        try:
            a, b = self._pair(other)
        except TypeError:
            return NotImplemented
        if a.level == 0:
            return AlgebraicNumber(0, [a.coeffs[0] * b.coeffs[0]])
        return AlgebraicNumber(a.level, _mulmod(a.coeffs, b.coeffs, _LEVELS[a.level]))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero algebraic number")
        if self.level == 0:
            return AlgebraicNumber(0, [1 / self.coeffs[0]])
        lev = _LEVELS[self.level]
        g, s, _ = dense.xgcd(list(self.coeffs), list(lev.minpoly), Fraction(1))
        if len(g) != 1:
            raise TowerError("tower level is not a field (minimal polynomial reducible)")
        return AlgebraicNumber(self.level, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.level, [c / other for c in self.coeffs])
        try:
            other = AlgebraicNumber.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return AlgebraicNumber.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = AlgebraicNumber(0, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.coeffs[0])
            else:
                top = self.lift(top_level())
                self._hash = hash((top.level, top.coeffs))
        return self._hash

    def __lt__(self, other):
        # canonical deterministic order: by numeric value (real, imag)
        a, b = complex(self), complex(AlgebraicNumber.coerce(other))
        return (round(a.real, 12), round(a.imag, 12)) < (round(b.real, 12), round(b.imag, 12))

    # -- numerics ---------------------------------------------------------------
    def approx(self, dps: int = 30) -> mpmath.mpc:
        if self.level == 0:
            return mpmath.mpc(mpmath.mpf(self.coeffs[0].numerator) / self.coeffs[0].denominator)
        theta = _LEVELS[self.level].approx
        with mpmath.workdps(max(dps, WORKING_DPS)):
            acc = mpmath.mpc(0)
            for c in reversed(self.coeffs):
                acc = acc * theta + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def __complex__(self):
        return complex(self.approx())

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        z = complex(self)
        return f"<alg L{self.level} ≈ {z.real:.6g}{z.imag:+.6g}i>"

    def to_text(self) -> str:
        """Exact textual form as a polynomial in the level generator."""
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                g = f"θ{self.level}" + (f"^{k}" if k > 1 else "")
                terms.append(g if c == 1 else f"({c})*{g}")
        return " + ".join(terms)


def _mulmod(p, q, lev: Level) -> list[Fraction]:
    prod = dense.mul(p, q)
    if len(prod) > lev.degree:
        prod = dense.rem(prod, list(lev.minpoly))
    return prod


def _generator_image(src: int, target: int) -> list[Fraction]:
    """``θ_src`` written as a polynomial in ``θ_target``."""
    lev_t = _LEVELS[target]
    key = src
    if key in lev_t._images:
        return lev_t._images[key]
    if src == target:
        img = [Fraction(0), Fraction(1)]
    else:
        # θ_src in θ_{target-1}, then substitute θ_{target-1} = prev_image(θ_target)
        inner = _generator_image(src, target - 1)
        acc: list[Fraction] = []
        for c in reversed(inner):
            acc = dense.add(_mulmod(acc, list(lev_t.prev_image), lev_t), [c])
        img = acc
    lev_t._images[key] = img
    return img


def Q(x) -> AlgebraicNumber:
    return AlgebraicNumber.rational(x)


def generator(lev: int) -> AlgebraicNumber:
    return AlgebraicNumber(lev, [0, 1])


# ---------------------------------------------------------------------------
# factoring and extension
# ---------------------------------------------------------------------------

_Y, _V = sympy.symbols("_y _v")


def _as_top(coeffs: Sequence) -> list[AlgebraicNumber]:
    top = top_level()
    return [AlgebraicNumber.coerce(c).lift(top) for c in coeffs]


def _bivariate(g: Sequence[AlgebraicNumber], shift: int) -> Poly:
    """``g(v - shift*y)`` where ``θ`` is replaced by ``y``; as a sympy Poly."""
    expr = 0
    for k, c in enumerate(g):
        cy = sum(sympy.Rational(q.numerator, q.denominator) * _Y ** j for j, q in enumerate(c.lift(top_level()).coeffs))
        expr += cy * (_V - shift * _Y) ** k
    return Poly(sympy.expand(expr), _Y, _V, domain=QQ)


def _norm(g: Sequence[AlgebraicNumber], shift: int, lev: Level) -> list[Fraction]:
    m = Poly(sum(sympy.Rational(q.numerator, q.denominator) * _Y ** j for j, q in enumerate(lev.minpoly)), _Y, _V, domain=QQ)
    res = sympy.resultant(m, _bivariate(g, shift), _Y)
    res = Poly(res, _V, domain=QQ)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(res.all_coeffs())]
    return dense.monic(coeffs)


def _squarefree_q(p: Sequence[Fraction]) -> bool:
    return len(dense.gcd(p, dense.deriv(p))) == 1


def _factor_q(p: Sequence[Fraction]) -> list[list[Fraction]]:
    expr = sum(sympy.Rational(c.numerator, c.denominator) * _V ** k for k, c in enumerate(p))
    _, facs = sympy.factor_list(Poly(expr, _V, domain=QQ))
    out = []
    for f, _mult in facs:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        out.append(dense.monic(cs))
    return out


def _shifts():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def factor_over_top(g: Sequence) -> list[list[AlgebraicNumber]]:
    """Monic irreducible factors over the current top level of a squarefree ``g``."""
    with _LOCK:
        g = dense.monic(_as_top(g))
        if len(g) <= 2:
            return [g] if len(g) == 2 else []
        lev = _LEVELS[top_level()]
        if lev.degree == 1:
            facs = _factor_q([c.to_fraction() for c in g])
            return [[Q(c) for c in f] for f in facs]
        for s in _shifts():
            n = _norm(g, s, lev)
            if _squarefree_q(n):
                break
            if abs(s) > 20:
                raise TowerError("no squarefree norm found; input not squarefree?")
        theta = generator(lev.index)
        out = []
        for nf in _factor_q(n):
            # nf(v + s θ)
            shifted = dense.compose([Q(c) for c in nf], [theta * s, Q(1)])
            h = dense.gcd(g, shifted)
            if len(h) > 1:
                out.append(h)
        return out


def _numeric_coeffs(g: Sequence[AlgebraicNumber]) -> list[mpmath.mpc]:
    return [c.approx() for c in g]


def _numeric_roots(g: Sequence[AlgebraicNumber]) -> list[mpmath.mpc]:
    cs = _numeric_coeffs(g)
    with mpmath.workdps(WORKING_DPS):
        rts = mpmath.polyroots(list(reversed(cs)), maxsteps=400, extraprec=200)
    if len(g) == 2:
        rts = [rts] if not isinstance(rts, list) else rts
    return sorted((mpmath.mpc(r) for r in rts), key=lambda z: (round(float(z.real), 10), round(float(z.imag), 10)))


def extend(g: Sequence, near: complex | None = None, label: str = "") -> AlgebraicNumber:
    """Adjoin a root of ``g`` (coefficients in the tower) and return it.

    ``near`` selects the root numerically; default is the first root in the
    canonical (real, imag) order.  If the root already lies in the top level
    no new level is created.
    """
    with _LOCK:
        g = dense.monic(_as_top(g))
        if len(g) < 2:
            raise TowerError("cannot adjoin a root of a constant")
        sqf = dense.squarefree_decomposition(g)
        target = None
        rts_all = _numeric_roots(g)
        choice = rts_all[0] if near is None else min(rts_all, key=lambda z: abs(z - near))
        for part, _m in sqf:
            for h in factor_over_top(part):
                hr = _numeric_roots(h)
                if min(abs(z - choice) for z in hr) < mpmath.mpf(10) ** -20 * (1 + abs(choice)):
                    target = h
                    break
            if target is not None:
                break
        if target is None:
            raise IsolationError("selected root does not belong to any factor")
        if len(target) == 2:
            return -target[0]
        return _adjoin_irreducible(target, choice, label)


def _adjoin_irreducible(h: list[AlgebraicNumber], alpha: mpmath.mpc, label: str) -> AlgebraicNumber:
    lev = _LEVELS[top_level()]
    for s in _shifts():
        n = _norm(h, s, lev)
        if _squarefree_q(n):
            break
        if abs(s) > 20:
            raise TowerError("could not find a primitive element")
    target = alpha + s * lev.approx
    discs = isolate_roots(n)
    ranked = sorted(discs, key=lambda cr: abs(cr[0] - target))
    center, radius = ranked[0]
    # the choice is sound when the target is much closer to one disc than to any other
    if len(ranked) > 1 and abs(ranked[1][0] - target) < 4 * abs(center - target) + 4 * radius:
        raise IsolationError("selected root is not separated from its conjugates")
    with mpmath.workdps(WORKING_DPS):
        polished = _polish(n, center)
    new = Level(
        index=lev.index + 1,
        minpoly=tuple(n),
        approx=polished,
        radius=radius,
        box=box_of(center, radius),
        prev_image=(Fraction(0),),
        defining_factor=tuple(h),
        label=label,
    )
    _LEVELS.append(new)
    # θ_prev is the unique common root of m(y) and h(θ' - s y, y) in Q(θ')
    theta_new = generator(new.index)
    m = [Q(c) for c in lev.minpoly]
    hy: list[AlgebraicNumber] = []
    for k, c in enumerate(h):
        cy = [Q(q) for q in c.lift(lev.index).coeffs]  # c as polynomial in y
        lin = [theta_new, Q(-s)]  # θ' - s y
        hy = dense.add(hy, dense.mul(cy, _pow(lin, k)))
    lin_gcd = dense.gcd(m, hy)
    if len(lin_gcd) != 2:
        _LEVELS.pop()
        raise TowerError("primitive element construction failed")
    beta = -lin_gcd[0]
    new.prev_image = tuple(beta.coeffs)
    new._images.clear()
    alpha_el = theta_new - beta * s
    new.adjoined = tuple(alpha_el.coeffs)
    return alpha_el


def _pow(p, k):
    out = [Q(1)]
    for _ in range(k):
        out = dense.mul(out, p)
    return out


def _polish(coeffs: Sequence[Fraction], z: mpmath.mpc) -> mpmath.mpc:
    p = [mpmath.mpf(c.numerator) / c.denominator for c in coeffs]
    for _ in range(8):
        val = mpmath.mpc(0)
        der = mpmath.mpc(0)
        for c in reversed(p):
            der = der * z + val
            val = val * z + c
        if der == 0:
            break
        z = z - val / der
    return z


def roots(g: Sequence, *, extend_as_needed: bool = True) -> list[tuple[AlgebraicNumber, int]]:
    """All roots of ``g`` with multiplicity, adjoining them to the tower as needed.

    Output order is the canonical numeric order, so repeated calls agree.
    """
    with _LOCK:
        g = dense.trim(_as_top(g))
        if len(g) < 2:
            return []
        out: list[tuple[AlgebraicNumber, int]] = []
        for part, mult in dense.squarefree_decomposition(g):
            pending = [part]
            while pending:
                h = pending.pop()
                for fac in factor_over_top(h):
                    if len(fac) == 2:
                        out.append((-fac[0] / fac[1], mult))
                    elif extend_as_needed:
                        r = extend(fac)
                        rest, remainder = dense.divmod_(_as_top(fac), [-r, Q(1)])
                        assert all(c == 0 for c in remainder)
                        out.append((r, mult))
                        if len(rest) > 1:
                            pending.append(rest)
                    else:
                        raise TowerError("polynomial does not split over the top level")
        return sorted(out, key=lambda rm: _sort_key(rm[0]))


def _sort_key(a: AlgebraicNumber):
    z = complex(a)
    return (round(z.real, 10), round(z.imag, 10))


def root_of_unity(n: int) -> AlgebraicNumber:
    """``exp(2πi/n)`` as a tower element."""
    with _LOCK:
        if n in _UNITY_CACHE:
            return _UNITY_CACHE[n]
        if n == 1:
            z = Q(1)
        elif n == 2:
            z = Q(-1)
        else:
            target = mpmath.expjpi(mpmath.mpf(2) / n)
            cyclo = Poly(sympy.cyclotomic_poly(n, _V), _V, domain=QQ)
            cs = [Fraction(int(c.p), int(c.q)) for c in reversed(cyclo.all_coeffs())]
            z = extend([Q(c) for c in cs], near=complex(target), label=f"ζ{n}")
        _UNITY_CACHE[n] = z
        return z


def nth_root(a: AlgebraicNumber, n: int, near: complex | None = None) -> AlgebraicNumber:
    """A root of ``v^n = a``; the principal one unless ``near`` is given."""
    a = AlgebraicNumber.coerce(a)
    if n == 1:
        return a
    if near is None:
        near = complex(mpmath.root(a.approx(), n))
    poly = [-a] + [Q(0)] * (n - 1) + [Q(1)]
    return extend(poly, near=near)
