"""Independent numeric estimate of the first-exponent pairs of a discriminant.

The roots ``y`` of ``D(x, y, t) = 0`` near 0 are grouped into orbits of the
loops in ``t`` and in ``x``.  Averaging ``log|y|`` over an orbit and over the
x-circle removes the leading coefficient's angular dependence (mean value
property) and cancels the tail terms up to ``O(t)``, so the averages are
affine in ``log t`` and ``log |x|`` with slopes ``q/p`` and ``e/d'``.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra.multipoly import MultiPoly
from .assembly.continuation import RootFamily, TrackingFailure, identify, orbits, track

PHASES = 24


class ProbeInconclusive(RuntimeError):
    pass


def _small_count(D: MultiPoly) -> int:
    return D.subs({"t": 0}).low_degree("y")


def _t_loop(fam: RootFamily, x: complex, t: float, roots: np.ndarray) -> tuple[int, ...]:
    _, end = track(fam, lambda s: (x, 0, t * cmath.exp(2j * math.pi * s)), roots)
    return identify(end, roots)


def _x_loop(fam: RootFamily, x: complex, t: float, roots: np.ndarray) -> tuple[int, ...]:
    _, end = track(fam, lambda s: (x * cmath.exp(2j * math.pi * s), 0, t), roots)
    return identify(end, roots)


def _orbit_means(fam: RootFamily, alpha: float, t: float, phase: float, groups, start: np.ndarray) -> list[float]:
    """Mean of log|y| over each orbit and over the x-circle of radius ``alpha``."""
    acc = np.zeros(len(start))
    cur = start
    for k in range(PHASES):
        acc += np.log(np.abs(cur))
        a0 = phase + 2 * math.pi * k / PHASES
        a1 = phase + 2 * math.pi * (k + 1) / PHASES
        _, cur = track(fam, lambda s: (alpha * cmath.exp(1j * (a0 + (a1 - a0) * s)), 0, t), cur)
    acc /= PHASES
    return [float(np.mean(acc[list(g)])) for g in groups]


def estimate_pairs(
    D: MultiPoly,
    *,
    alpha: float = 0.5,
    t_values: Sequence[float] = (1e-5, 1e-6),
    phase: float = 0.37,
) -> list[dict]:
    """Raw slope estimates, one per orbit of roots."""
    M = _small_count(D)
    if M == 0:
        return []
    fam = RootFamily(D, "y", M, t_values[0])
    t_hi, t_lo = t_values
    x0 = alpha * cmath.exp(1j * phase)
    R_hi = fam.small_roots(x0, 0, t_hi)
    groups = orbits(M, [_t_loop(fam, x0, t_hi, R_hi), _x_loop(fam, x0, t_hi, R_hi)])
    _, R_lo = track(fam, lambda s: (x0, 0, t_hi * (t_lo / t_hi) ** s), R_hi)
    mean_hi = _orbit_means(fam, alpha, t_hi, phase, groups, R_hi)
    mean_lo = _orbit_means(fam, alpha, t_lo, phase, groups, R_lo)
    # a second radius for the x-slope, reached radially at t_lo
    alpha2 = alpha / 2
    _, R2 = track(fam, lambda s: (x0 * (1 - s / 2), 0, t_lo), R_lo)
    mean_2 = _orbit_means(fam, alpha2, t_lo, phase, groups, R2)
    out = []
    for g, h, l, m2 in zip(groups, mean_hi, mean_lo, mean_2):
        q = (h - l) / (math.log(t_hi) - math.log(t_lo))
        e = (l - m2) / (math.log(alpha) - math.log(alpha2))
        out.append({"roots": len(g), "t_slope": q, "x_slope": e})
    return out


def snap(value: float, bound: int) -> Fraction:
    return Fraction(value).limit_denominator(bound)


def numeric_probe(config, D: MultiPoly, expansions=None) -> dict:
    """Estimated pairs, snapped, and their agreement with the exact expansions."""
    alpha = getattr(config, "probe_alpha", 0.5)
    bound = getattr(config, "denominator_bound", 12)
    eta = getattr(config, "probe_eta", 1e-3)
    t_values = (min(eta, 1e-5), 1e-6) if eta > 1e-6 else (eta, eta / 10)
    phase = random.Random(getattr(config, "seed", 0)).uniform(0.1, 2 * math.pi - 0.1)
    try:
        raw = estimate_pairs(D, alpha=alpha, t_values=t_values, phase=phase)
    except TrackingFailure as exc:
        return {"status": "inconclusive", "reason": str(exc), "pairs": []}
    pairs = []
    worst = 0.0
    for r in raw:
        q, e = snap(r["t_slope"], bound), snap(r["x_slope"], bound)
        worst = max(worst, abs(r["t_slope"] - float(q)), abs(r["x_slope"] - float(e)))
        pairs.append({"pair": [str(q), str(e)], "t_slope": r["t_slope"], "x_slope": r["x_slope"], "roots": r["roots"]})
    result = {"status": "ok", "pairs": pairs, "max_residual": worst, "alpha": alpha, "t": list(t_values), "phase": phase}
    if expansions is not None:
        exact = sorted({(str(b.q_over_p), str(b.e_over_dprime)) for b in expansions})
        found = sorted({tuple(p["pair"]) for p in pairs})
        result["exact_pairs"] = [list(p) for p in exact]
        result["agrees"] = exact == found and worst < 1e-3
    return result
