"""Loop actions on complete sets of Puiseux conjugates.

Conjugates are kept as rational *phases*: the conjugate ``j`` of a class of
size ``n`` multiplies the coefficient of ``t^E`` by ``exp(2 pi i j E)``.
Matching two conjugates of the same class is then pure rational arithmetic;
only matching across classes needs a root-of-unity test in the tower.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Any, Sequence

import cmath

from ..algebra import numberfield as nf
from .expand import BranchExpansion
from .series import PuiseuxSeries


class InconsistentBranchSet(ValueError):
    """The loop image of a conjugate is not in the given set."""


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def compose(self, other: "Permutation") -> "Permutation":
        """``self`` after ``other``."""
        return Permutation(tuple(self.images[other.images[i]] for i in range(len(self))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen:
                continue
            cyc = []
            j = i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    @property
    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    @property
    def order(self) -> int:
        return lcm(1, *self.cycle_type)

    def orbit_count(self) -> int:
        return len(self.cycles())


@dataclass
class Conjugate:
    source: int  # index of the class in the input list
    index: int  # which conjugate inside the class
    terms: dict  # (E, e) -> (scalar coefficient, phase in Q/Z)
    limits: tuple  # (t-precision or None, {E: x-precision or None})


def _flatten(series: PuiseuxSeries) -> tuple[dict, dict]:
    flat: dict = {}
    xprec: dict = {}
    for E, c in series.terms:
        if isinstance(c, PuiseuxSeries):
            xprec[E] = c.precision
            for e, cc in c.terms:
                flat[(E, e)] = cc
        else:
            flat[(E, Fraction(0))] = c
            xprec[E] = None
    return flat, xprec


def conjugates(item, source: int = 0) -> list[Conjugate]:
    """All conjugates of a stored class under the loop of its own variable."""
    if isinstance(item, BranchExpansion):
        series, n = item.as_series(), item.class_size
    elif isinstance(item, tuple):
        series, n = item
    else:
        series, n = item, 1
    flat, xprec = _flatten(series)
    out = []
    for j in range(n):
        terms = {k: (c, (j * k[0]) % 1) for k, c in flat.items()}
        out.append(Conjugate(source, j, terms, (series.precision, xprec)))
    return out


def _shift(key: tuple, loop: str, outer: str, inner: str) -> Fraction:
    if loop == outer:
        return key[0]
    if loop == inner:
        return key[1]
    return Fraction(0)


def _is_unity(ratio, phase: Fraction) -> bool:
    if phase.denominator == 1:
        return ratio == 1
    if abs(complex(ratio) - cmath.exp(2j * cmath.pi * float(phase))) > 1e-8:
        return False
    r = ratio if isinstance(ratio, nf.AlgebraicNumber) else nf.AlgebraicNumber.coerce(ratio)
    return (r ** phase.denominator) == 1


def _comparable(key, a: Conjugate, b: Conjugate) -> bool:
    E, e = key
    for lim in (a.limits, b.limits):
        tp, xp = lim
        if tp is not None and E >= tp:
            return False
        p = xp.get(E)
        if p is not None and e >= p:
            return False
    return True


def _matches(img: dict, src: Conjugate, cand: Conjugate) -> bool:
    keys = {k for k in set(img) | set(cand.terms) if _comparable(k, src, cand)}
    for k in keys:
        if k not in img or k not in cand.terms:
            return False
        c1, ph1 = img[k]
        c2, ph2 = cand.terms[k]
        phase = (ph1 - ph2) % 1
        if src.source == cand.source:
            if phase != 0:
                return False
        elif not _is_unity(c2 / c1, phase):
            return False
    return True


def monodromy_permutation(
    branches: Sequence, loop_var: str = "x", *, outer: str = "t", inner: str = "x"
) -> Permutation:
    """Permutation of all conjugates induced by ``loop_var -> exp(2 pi i) loop_var``.

    ``branches`` holds ``BranchExpansion`` records (all their parameter
    conjugates are materialized), ``(series, class_size)`` pairs, or plain
    series taken as explicit conjugates.  Conjugates are numbered class by
    class in input order.
    """
    conj: list[Conjugate] = []
    for s, item in enumerate(branches):
        if isinstance(item, PuiseuxSeries):
            outer = item.variable
        elif isinstance(item, tuple):
            outer = item[0].variable
        conj.extend(conjugates(item, s))
    images = []
    for src in conj:
        img = {k: (c, (ph + _shift(k, loop_var, outer, inner)) % 1) for k, (c, ph) in src.terms.items()}
        found = [i for i, cand in enumerate(conj) if _matches(img, src, cand)]
        if len(found) != 1:
            raise InconsistentBranchSet(
                f"loop image of conjugate {src.index} of class {src.source} matches {len(found)} conjugates"
            )
        images.append(found[0])
    if len(set(images)) != len(images):
        raise InconsistentBranchSet("loop action is not a bijection on the given conjugates")
    return Permutation(tuple(images))
