"""Certified isolation of complex roots of univariate polynomials.

A disc of radius ``n*|p(z)/p'(z)|`` around any ``z`` contains a root of a
degree ``n`` polynomial.  When the ``n`` discs built around ``n`` approximate
roots are pairwise disjoint, each contains exactly one root.  Evaluation is
done with mpmath interval arithmetic so the radii are upper bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

WORKING_DPS = 60


class IsolationError(ArithmeticError):
    """Roots could not be separated at the maximal working precision."""


@dataclass(frozen=True)
class IsolatingBox:
    """Axis-parallel rectangle with rational corners holding exactly one root."""

    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    def contains(self, z: complex) -> bool:
        return (
            float(self.re_lo) <= z.real <= float(self.re_hi)
            and float(self.im_lo) <= z.imag <= float(self.im_hi)
        )

    def center(self) -> complex:
        return complex(float(self.re_lo + self.re_hi) / 2, float(self.im_lo + self.im_hi) / 2)


def _to_fraction(x: mpmath.mpf) -> Fraction:
    m, e = mpmath.mpf(x).man_exp
    return Fraction(int(m)) * (Fraction(2) ** int(e)) if e >= 0 else Fraction(int(m), 2 ** int(-e))


def _interval_eval(coeffs: Sequence[Fraction], z: mpmath.mpc) -> tuple[float, float]:
    """Upper bound of |p(z)| and lower bound of |p'(z)| via interval arithmetic."""
    iv = mpmath.iv
    iv.dps = mpmath.mp.dps
    zi = iv.mpc(iv.mpf(str(z.real)), iv.mpf(str(z.imag)))
    acc = iv.mpc(0)
    dacc = iv.mpc(0)
    for c in reversed(coeffs):
        dacc = dacc * zi + acc
        acc = acc * zi + iv.mpf(c.numerator) / iv.mpf(c.denominator)
    absp = iv.sqrt(acc.real ** 2 + acc.imag ** 2)
    absd = iv.sqrt(dacc.real ** 2 + dacc.imag ** 2)
    return absp.b, absd.a


def isolate_roots(coeffs: Sequence[Fraction], dps: int = WORKING_DPS) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
    """Return ``(center, radius)`` pairs of disjoint discs, one per root.

    ``coeffs`` are rational, lowest degree first, and must be squarefree.
    Precision is doubled up to four times before giving up.
    """
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        raise IsolationError("constant polynomial has no roots")
    for attempt in range(5):
        with mpmath.workdps(dps):
            hi_first = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
            try:
                approx = mpmath.polyroots(hi_first, maxsteps=400, extraprec=4 * dps, cleanup=True)
            except mpmath.libmp.libhyper.NoConvergence:
                dps *= 2
                continue
            if n == 1:
                approx = [approx] if not isinstance(approx, list) else approx
            out = []
            ok = True
            for z in approx:
                z = mpmath.mpc(z)
                pz, dz = _interval_eval(coeffs, z)
                if dz <= 0:
                    ok = False
                    break
                out.append((z, mpmath.mpf(n) * pz / dz))
            if ok and _disjoint(out):
                return sorted(out, key=lambda cr: (round(float(cr[0].real), 12), round(float(cr[0].imag), 12)))
        dps *= 2
    raise IsolationError("could not isolate roots; polynomial may not be squarefree")


def _disjoint(discs: list[tuple[mpmath.mpc, mpmath.mpf]]) -> bool:
    # discs inflated by 1.5 keep the bounding squares of the discs apart as well
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            if abs(discs[i][0] - discs[j][0]) <= mpmath.mpf(1.5) * (discs[i][1] + discs[j][1]):
                return False
    return True


def box_of(center: mpmath.mpc, radius: mpmath.mpf) -> IsolatingBox:
    r = radius * (1 + mpmath.mpf(10) ** -6) + mpmath.mpf(10) ** (-mpmath.mp.dps + 5)
    return IsolatingBox(
        _to_fraction(center.real - r),
        _to_fraction(center.real + r),
        _to_fraction(center.imag - r),
        _to_fraction(center.imag + r),
    )
