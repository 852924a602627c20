"""Numerical root tracking on a sample fibre of the map ``(x, y, z) -> (x, y, f)``.

Everything here is floating point.  It is only used to read off how loops
in the ``(x, y)`` plane permute the z-sheets; every permutation is later
checked against exact data wherever an exact counterpart exists.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..algebra.multipoly import MultiPoly

Path = Callable[[float], tuple]  # s in [0, 1] -> (x, y) or (x, y, t)


class TrackingFailure(RuntimeError):
    """Roots came too close to follow them reliably."""


class RootFamily:
    """The ``count`` smallest roots in ``var`` of a polynomial with numeric parameters.

    ``poly`` may involve ``x``, ``y``, ``t`` besides ``var``; ``t`` defaults to
    the value given at construction.
    """

    def __init__(self, poly: MultiPoly, var: str, count: int, t: float, gap: float = 3.0):
        self.var = var
        self.count = count
        self.gap = gap
        self.t = t
        self.degree = poly.degree(var)
        idx = poly.variables.index(var)
        self._cols: dict[int, list[tuple[tuple[int, ...], complex]]] = {}
        for exps, c in poly.terms.items():
            k = exps[idx]
            rest = {v: e for v, e in zip(poly.variables, exps) if v != var}
            key = tuple(rest.get(v, 0) for v in ("x", "y", "t"))
            self._cols.setdefault(k, []).append((key, complex(c)))
        if self.degree < count:
            raise ValueError("fewer roots than requested")

    def coefficients(self, x: complex, y: complex, t: complex | None = None) -> np.ndarray:
        t = self.t if t is None else t
        out = np.zeros(self.degree + 1, dtype=complex)
        for k, terms in self._cols.items():
            out[self.degree - k] = sum(c * x ** i * y ** j * t ** m for (i, j, m), c in terms)
        return out

    def small_roots(self, x: complex, y: complex, t: complex | None = None) -> np.ndarray:
        c = self.coefficients(x, y, t)
        # rescale so the small roots are of order one
        lo = next(k for k in range(self.degree, -1, -1) if c[k] != 0)
        nz = self.degree - lo  # number of exact zero roots
        if nz > self.count:
            raise TrackingFailure("too many vanishing roots")
        body = c[: lo + 1]
        if self.count > nz:
            a0 = abs(body[-1])
            ak = abs(body[len(body) - 1 - (self.count - nz)])
            scale = (a0 / ak) ** (1.0 / (self.count - nz)) if ak else 1.0
        else:
            scale = 1.0
        scale = scale or 1.0
        m = len(body) - 1
        scaled = body * np.array([scale ** (m - i) for i in range(m + 1)])
        scaled = scaled / np.max(np.abs(scaled))
        r = np.roots(scaled) * scale if m else np.array([], dtype=complex)
        r = np.concatenate([r, np.zeros(nz, dtype=complex)])
        r = r[np.argsort(np.abs(r))]
        if len(r) > self.count:
            small, big = abs(r[self.count - 1]), abs(r[self.count])
            if big < self.gap * small:
                raise TrackingFailure(f"no clear gap after the {self.count} smallest roots ({small:.3g} vs {big:.3g})")
        return r[: self.count]


def _separation(r: np.ndarray) -> float:
    if len(r) < 2:
        return math.inf
    d = np.abs(r[:, None] - r[None, :])
    d[np.diag_indices(len(r))] = np.inf
    return float(d.min())


def _match(prev: np.ndarray, new: np.ndarray) -> np.ndarray | None:
    """``new`` reordered to follow ``prev``; None when the step is too long."""
    if len(prev) == 0:
        return new
    d = np.abs(prev[:, None] - new[None, :])
    order = d.argmin(axis=1)
    if len(set(order.tolist())) != len(order):
        return None
    moved = d[np.arange(len(prev)), order].max()
    sep = min(_separation(prev), _separation(new))
    scale = max(np.abs(prev).max(), np.abs(new).max(), 1e-300)
    if moved > 0.25 * sep or (not math.isfinite(sep) and moved > 0.5 * scale):
        return None
    return new[order]


def track(family: RootFamily, path: Path, start: np.ndarray | None = None, *, max_step=1 / 48, min_step=1e-7) -> tuple[np.ndarray, np.ndarray]:
    """Follow the roots along ``path``; returns (start roots, end roots) in matching order."""
    cur = family.small_roots(*path(0.0)) if start is None else np.asarray(start)
    first = cur.copy()
    s, ds = 0.0, max_step
    while s < 1.0:
        s1 = min(1.0, s + ds)
        nxt = _match(cur, family.small_roots(*path(s1)))
        if nxt is None:
            ds /= 2
            if ds < min_step:
                raise TrackingFailure(f"root tracking stalled at s = {s:.6f}")
            continue
        cur, s = nxt, s1
        ds = min(max_step, ds * 1.5)
    return first, cur


def identify(roots: np.ndarray, reference: np.ndarray) -> tuple[int, ...]:
    """Index into ``reference`` of every entry of ``roots``."""
    d = np.abs(roots[:, None] - reference[None, :])
    idx = d.argmin(axis=1)
    sep = _separation(reference)
    scale = max(float(np.abs(reference).max()), 1e-300)
    tol = 0.25 * sep if math.isfinite(sep) else 0.5 * scale
    if len(set(idx.tolist())) != len(idx) or d[np.arange(len(roots)), idx].max() > tol:
        raise TrackingFailure("tracked roots do not return onto the reference set")
    return tuple(int(i) for i in idx)


def loop_permutation(family: RootFamily, path: Path, reference: np.ndarray) -> tuple[int, ...]:
    """Permutation of ``reference`` (the roots at ``path(0)``) induced by the closed ``path``."""
    _, end = track(family, path, reference)
    return identify(end, reference)


def transport(family: RootFamily, path: Path, reference: np.ndarray, target: np.ndarray) -> tuple[int, ...]:
    """Where each root of ``reference`` at ``path(0)`` lands among ``target`` at ``path(1)``."""
    _, end = track(family, path, reference)
    return identify(end, target)


# -- paths at a fixed x ------------------------------------------------------


def chain(*paths: Path) -> Path:
    k = len(paths)

    def run(s: float):
        i = min(int(s * k), k - 1)
        return paths[i](s * k - i)

    return run


def reverse(path: Path) -> Path:
    return lambda s: path(1.0 - s)


def arc(x: complex, r: float, a0: float, a1: float) -> Path:
    return lambda s: (x, r * cmath.exp(1j * (a0 + (a1 - a0) * s)))


def radial(x: complex, angle: float, r0: float, r1: float) -> Path:
    u = cmath.exp(1j * angle)
    if r0 > 0 and r1 > 0:
        return lambda s: (x, u * r0 ** (1 - s) * r1 ** s)
    return lambda s: (x, u * (r0 + (r1 - r0) * s))


def circle_around(x: complex, centre: complex, radius: float) -> Path:
    a0 = cmath.phase(centre) if centre != 0 else 0.0
    return lambda s: (x, centre + radius * cmath.exp(1j * (a0 + 2 * math.pi * s)))


def x_loop(a: complex, y: complex, turns: int = 1) -> Path:
    return lambda s: (a * cmath.exp(2j * math.pi * turns * s), y)


def leaf_loop(a: complex, y: complex, e: int, d_prime: int) -> Path:
    """The torus-link leaf ``y = y0 (x/a)^(e/d')`` run once, i.e. ``d'`` turns of x."""
    return lambda s: (a * cmath.exp(2j * math.pi * d_prime * s), y * cmath.exp(2j * math.pi * e * s))


@dataclass
class Perm:
    """A plain permutation helper for the numeric side."""

    images: tuple[int, ...]

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for i in range(len(self.images)):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out


def orbits(n: int, generators: Sequence[Sequence[int]]) -> list[list[int]]:
    """Orbits of the group generated by the given permutations of ``range(n)``."""
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in generators:
        for i, j in enumerate(g):
            a, b = find(i), find(j)
            if a != b:
                parent[a] = b
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())
