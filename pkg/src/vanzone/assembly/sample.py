"""Loop actions on one sample fibre ``x = a``, ``t = eta``, read by root tracking.

The radii come from the symbolic zone bounds evaluated at numeric scales; the
sample is rejected (``TrackingFailure``) unless every numerically located sun
lies in the zone its exact expansion assigns it to.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..algebra.multipoly import MultiPoly
from ..carrousel import ExponentPair, ZoneLadder
from ..geometry import ScaleProfile
from ..puiseux.expand import BranchExpansion
from .continuation import (
    RootFamily,
    TrackingFailure,
    _match,
    arc,
    chain,
    circle_around,
    identify,
    leaf_loop,
    loop_permutation,
    radial,
    transport,
    x_loop,
)

T = MultiPoly.var("t")


@dataclass
class SampleScales:
    alpha: float = 1 / 8
    eta: float = 1e-16
    phase: float = 0.3  # arg of the sample point a on the x-circle

    def theta(self, smallest_quotient: Fraction) -> float:
        return min(self.alpha / 4, self.eta ** (float(smallest_quotient) / 2))


@dataclass
class Sun:
    position: complex
    branch: int  # index into the expansion list
    conjugate: int
    zone: tuple[int, int]
    delta: float  # relative radius of its solar disc
    to_local: tuple[int, ...] = ()  # basepoint sheet -> sheet at the disc's local point
    local_loop: tuple[int, ...] = ()  # small circle around the sun, on local sheets
    lasso: tuple[int, ...] = ()  # the same loop seen from the zone basepoint


@dataclass
class ZoneSample:
    index: tuple[int, int]
    radius: float  # basepoint radius
    inner: float  # 0 for the innermost zone
    outer: float
    sheets: np.ndarray
    circle: tuple[int, ...] = ()
    h: tuple[int, ...] = ()
    leaf: tuple[int, ...] = ()
    suns: list[int] = field(default_factory=list)
    to_centre: tuple[int, ...] | None = None  # basepoint sheet -> sheet over y = 0
    to_inner: tuple[int, ...] | None = None
    to_outer: tuple[int, ...] = ()


@dataclass
class CircleSample:
    radius: float
    circle: tuple[int, ...]
    h: tuple[int, ...]


@dataclass
class FibreSample:
    a: complex
    t: float
    theta: float
    angle: float
    N: int
    suns: list[Sun]
    zones: list[ZoneSample]
    boundaries: list[CircleSample]  # boundary k is the outer circle of zone k
    centre_h: tuple[int, ...]
    sun_transport: tuple[int, ...]  # x-loop action on suns
    disc_transport: dict  # (sun, local sheet) -> local sheet over the image sun


def _predict(br: BranchExpansion, a: complex, t: float) -> list[complex]:
    series = br.as_series()
    out = []
    for j in range(br.n):
        total = 0j
        for E, c in series.terms:
            cv = c.evaluate(a) if hasattr(c, "evaluate") else complex(c)
            total += cv * t ** float(E) * cmath.exp(2j * math.pi * j * float(E))
        out.append(total)
    return out


def _assign_suns(positions: np.ndarray, expansions: Sequence[BranchExpansion], a: complex, t: float):
    labels = []
    preds = []
    for i, br in enumerate(expansions):
        for j, p in enumerate(_predict(br, a, t)):
            labels.append((i, j))
            preds.append(p)
    preds = np.array(preds)
    if len(preds) != len(positions):
        raise TrackingFailure("the number of numeric suns differs from the exact branch count")
    d = np.abs(positions[:, None] - preds[None, :])
    idx = d.argmin(axis=1)
    if len(set(idx.tolist())) != len(idx):
        raise TrackingFailure("numeric suns do not match the predicted conjugates one to one")
    back = d.argmin(axis=0)
    if any(back[idx[k]] != k for k in range(len(idx))):
        raise TrackingFailure("numeric suns and predicted conjugates are not mutually nearest")
    return [labels[i] for i in idx]


def _quiet_angle(points: Sequence[complex]) -> float:
    if not points:
        return 0.1234
    args = sorted(cmath.phase(p) % (2 * math.pi) for p in points)
    best, width = 0.0, -1.0
    for k, u in enumerate(args):
        v = args[(k + 1) % len(args)] + (2 * math.pi if k == len(args) - 1 else 0)
        if v - u > width:
            best, width = (u + v) / 2, v - u
    return best % (2 * math.pi)


def _sun_transport(suns_fam, sheets_fam, sun_pos, delta, a, local_sheets, max_step=1 / 64):
    """Follow one sun and the sheets at its disc's local point once around the x-circle."""
    sigma = sun_pos
    pts = suns_fam.small_roots(a, 0)
    sheets = local_sheets
    s, ds = 0.0, max_step
    while s < 1.0:
        s1 = min(1.0, s + ds)
        x1 = a * cmath.exp(2j * math.pi * s1)
        cand = suns_fam.small_roots(x1, 0)
        d = np.abs(cand - sigma)
        k = int(d.argmin())
        others = np.abs(pts - sigma)
        others = others[others > 0]
        sep = others.min() if len(others) else abs(sigma)
        ok = d[k] < 0.25 * min(sep, delta * abs(sigma))
        new_sheets = None
        if ok:
            y1 = cand[k] * (1 + delta)
            new_sheets = _match(sheets, sheets_fam.small_roots(x1, y1))
        if new_sheets is None:
            ds /= 2
            if ds < 1e-8:
                raise TrackingFailure("sun transport stalled")
            continue
        sigma, sheets, pts, s = cand[k], new_sheets, cand, s1
        ds = min(max_step, ds * 1.5)
    return sigma, sheets


def sample_fibre(
    f: MultiPoly,
    D: MultiPoly,
    expansions: Sequence[BranchExpansion],
    ladder: ZoneLadder,
    N: int,
    scales: SampleScales | None = None,
) -> FibreSample:
    sc = scales or SampleScales()
    a = sc.alpha * cmath.exp(1j * sc.phase)
    t = sc.eta
    theta = sc.theta(min(ladder.quotients))
    profile = ScaleProfile({"eta": t, "theta": theta, "alpha": sc.alpha})

    M = sum(br.n for br in expansions)
    suns_fam = RootFamily(D, "y", M, t)
    positions = suns_fam.small_roots(a, 0)
    labels = _assign_suns(positions, expansions, a, t)
    sheets_fam = RootFamily(f - T * 1, "z", N, t)

    zone_of = {}
    for br_idx, br in enumerate(expansions):
        zone_of[br_idx] = ladder.index_of(_pair(br))
    bounds = {}
    for z in ladder.zones:
        lo = 0.0 if z.inner is None else profile.evaluate(z.inner)
        hi = profile.evaluate(z.outer)
        bounds[z.index] = (lo, hi)

    suns: list[Sun] = []
    for k, (pos, (bi, cj)) in enumerate(zip(positions, labels)):
        zi = zone_of[bi]
        lo, hi = bounds[zi]
        if not lo < abs(pos) < hi:
            raise TrackingFailure(
                f"sun {pos:.3g} of zone {zi} lies outside [{lo:.3g}, {hi:.3g}] at the sample scales"
            )
        others = [abs(pos - q) for q in positions if q is not pos]
        gap = min([o for o in others if o > 0] + [abs(pos)])
        suns.append(Sun(complex(pos), bi, cj, zi, min(0.25, gap / abs(pos) / 4)))
    # one relative disc radius for all suns, so transported local points coincide
    delta = min(s.delta for s in suns)
    for s in suns:
        s.delta = delta

    angle = _quiet_angle([s.position for s in suns])
    zones: list[ZoneSample] = []
    for z in ladder.zones:
        lo, hi = bounds[z.index]
        members = [k for k, s in enumerate(suns) if s.zone == z.index]
        top = max(abs(suns[k].position) for k in members)
        r = math.sqrt(top * hi)
        yb = r * cmath.exp(1j * angle)
        B = sheets_fam.small_roots(a, yb)
        zs = ZoneSample(z.index, r, lo, hi, B, suns=members)
        zs.circle = loop_permutation(sheets_fam, arc(a, r, angle, angle + 2 * math.pi), B)
        zs.h = loop_permutation(sheets_fam, x_loop(a, yb), B)
        zs.leaf = loop_permutation(sheets_fam, leaf_loop(a, yb, z.pair.e_over_dprime.numerator, z.pair.d_prime), B)
        for k in members:
            s = suns[k]
            phi = angle + (cmath.phase(s.position) - angle) % (2 * math.pi)
            local_pt = s.position * (1 + s.delta)
            L = sheets_fam.small_roots(a, local_pt)
            path = chain(arc(a, r, angle, phi), radial(a, phi, r, abs(local_pt)))
            s.to_local = transport(sheets_fam, path, B, L)
            s.local_loop = loop_permutation(sheets_fam, circle_around(a, s.position, s.delta * abs(s.position)), L)
            inv = {v: i for i, v in enumerate(s.to_local)}
            s.lasso = tuple(inv[s.local_loop[s.to_local[i]]] for i in range(N))
        if z.inner is None:
            C = sheets_fam.small_roots(a, 0)
            zs.to_centre = transport(sheets_fam, radial(a, angle, r, 0.0), B, C)
        else:
            S = sheets_fam.small_roots(a, lo * cmath.exp(1j * angle))
            zs.to_inner = transport(sheets_fam, radial(a, angle, r, lo), B, S)
        S = sheets_fam.small_roots(a, hi * cmath.exp(1j * angle))
        zs.to_outer = transport(sheets_fam, radial(a, angle, r, hi), B, S)
        zones.append(zs)

    boundaries = []
    for zs in zones:
        R = zs.outer
        yR = R * cmath.exp(1j * angle)
        S = sheets_fam.small_roots(a, yR)
        boundaries.append(
            CircleSample(
                R,
                loop_permutation(sheets_fam, arc(a, R, angle, angle + 2 * math.pi), S),
                loop_permutation(sheets_fam, x_loop(a, yR), S),
            )
        )
    C = sheets_fam.small_roots(a, 0)
    centre_h = loop_permutation(sheets_fam, x_loop(a, 0j), C)

    sun_images = []
    disc_transport = {}
    for k, s in enumerate(suns):
        L = sheets_fam.small_roots(a, s.position * (1 + s.delta))
        end_sun, end_sheets = _sun_transport(suns_fam, sheets_fam, s.position, s.delta, a, L)
        img = int(np.abs(positions - end_sun).argmin())
        sun_images.append(img)
        target = suns[img]
        L2 = sheets_fam.small_roots(a, target.position * (1 + target.delta))
        for i, j in enumerate(identify(end_sheets, L2)):
            disc_transport[(k, i)] = j
    if sorted(sun_images) != list(range(len(suns))):
        raise TrackingFailure("the x-loop does not permute the suns")
    return FibreSample(a, t, theta, angle, N, suns, zones, boundaries, centre_h, tuple(sun_images), disc_transport)


def _pair(br) -> ExponentPair:
    return ExponentPair(br.q_over_p, br.e_over_dprime)
