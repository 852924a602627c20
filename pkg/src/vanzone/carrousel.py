"""The carrousel in family: polar quotients, zone ladder, approximation tori.

All radius comparisons are symbolic: a radius is a ``ScaleMonomial`` in the
scales ``eta << theta << alpha`` and inequalities are decided on exponents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Any, Sequence

from .algebra import numberfield as nf
from .errors import InternalError
from .geometry import ScaleMonomial
from .puiseux.expand import BranchExpansion


class StaleLadder(ValueError):
    """The expansion's pair does not occur in the ladder."""


class UncertifiedExpansion(ValueError):
    pass


@total_ordering
@dataclass(frozen=True)
class ExponentPair:
    q_over_p: Fraction
    e_over_dprime: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q_over_p", Fraction(self.q_over_p))
        object.__setattr__(self, "e_over_dprime", Fraction(self.e_over_dprime))
        if self.q_over_p <= 0:
            raise ValueError("the polar quotient must be positive")

    def _key(self):
        return (self.q_over_p, self.e_over_dprime)

    def __lt__(self, other: "ExponentPair") -> bool:
        return self._key() < other._key()

    @property
    def p(self) -> int:
        return self.q_over_p.denominator

    @property
    def d_prime(self) -> int:
        return self.e_over_dprime.denominator

    def modulus(self) -> ScaleMonomial:
        """Size of ``b x^(e/d') t^(q/p)`` with ``|x| = alpha`` and ``|t| = eta``."""
        return ScaleMonomial.of(eta=self.q_over_p, alpha=self.e_over_dprime)

    def __str__(self):
        return f"({self.q_over_p}, {self.e_over_dprime})"


def mediant(a: Fraction, b: Fraction) -> Fraction:
    """Farey mediant of two fractions in lowest terms; strictly between them."""
    a, b = Fraction(a), Fraction(b)
    return Fraction(a.numerator + b.numerator, a.denominator + b.denominator)


def _pair_of(br) -> ExponentPair:
    if isinstance(br, ExponentPair):
        return br
    if isinstance(br, BranchExpansion):
        if br.b == 0:
            raise UncertifiedExpansion("leading coefficient is not certified nonzero")
        return ExponentPair(br.q_over_p, br.e_over_dprime)
    return ExponentPair(*br)


def first_exponent_pairs(expansions: Sequence) -> tuple[list[Fraction], list[list[Fraction]], list[tuple[int, int]]]:
    """Polar quotients (decreasing), second exponents per quotient (decreasing), and the index of every input."""
    pairs = [_pair_of(b) for b in expansions]
    Q = sorted({p.q_over_p for p in pairs}, reverse=True)
    Qi = [sorted({p.e_over_dprime for p in pairs if p.q_over_p == q}, reverse=True) for q in Q]
    assign = []
    for p in pairs:
        i = Q.index(p.q_over_p)
        assign.append((i + 1, Qi[i].index(p.e_over_dprime) + 1))
    return Q, Qi, assign


@dataclass(frozen=True)
class Zone:
    index: tuple[int, int]
    pair: ExponentPair
    inner: ScaleMonomial | None  # None: the zone contains |y| = 0
    outer: ScaleMonomial
    solid: bool

    def describe(self) -> str:
        lo = "0" if self.inner is None else str(self.inner)
        kind = "solid torus" if self.solid else "thickened torus"
        return f"Z{self.index}: {lo} <= |y| <= {self.outer} ({kind})"


THETA = ScaleMonomial.of(theta=1)


@dataclass
class ZoneLadder:
    quotients: list[Fraction]
    seconds: list[list[Fraction]]
    s: list[Fraction]  # s[i-1] separates quotients i and i+1
    nu: list[list[Fraction]]  # nu[i-1][j-1] separates seconds j and j+1 of quotient i
    zones: list[Zone] = field(default_factory=list)

    def pairs(self) -> list[ExponentPair]:
        return [z.pair for z in self.zones]

    def zone(self, index: tuple[int, int]) -> Zone:
        for z in self.zones:
            if z.index == index:
                return z
        raise KeyError(index)

    def index_of(self, pair: ExponentPair) -> tuple[int, int]:
        for z in self.zones:
            if z.pair == pair:
                return z.index
        raise StaleLadder(f"pair {pair} is not in the ladder")

    def check(self) -> None:
        """Coverage and consecutive-only contact, as exponent comparisons."""
        if not self.zones or self.zones[0].inner is not None or not self.zones[0].solid:
            raise InternalError("the innermost zone must be a solid torus containing y = 0")
        if self.zones[-1].outer != THETA:
            raise InternalError("the outermost zone must reach |y| = theta")
        for a, b in zip(self.zones, self.zones[1:]):
            if b.solid or a.outer != b.inner:
                raise InternalError(f"zones {a.index} and {b.index} do not share exactly one torus")
        for z in self.zones:
            if z.inner is not None and not z.inner < z.outer:
                raise InternalError(f"zone {z.index} has empty radius range")


def build_zone_ladder(pairs: Sequence) -> ZoneLadder:
    pairs = sorted({_pair_of(p) for p in pairs}, reverse=True)
    if not pairs:
        raise ValueError("the ladder needs at least one exponent pair")
    Q, Qi, _ = first_exponent_pairs(pairs)
    k = len(Q)
    s = [mediant(Q[i + 1], Q[i]) for i in range(k - 1)]
    nu = [[mediant(sec[j + 1], sec[j]) for j in range(len(sec) - 1)] for sec in Qi]
    zones = []
    for i in range(1, k + 1):
        sec = Qi[i - 1]
        li = len(sec)
        q = Q[i - 1]
        for j in range(1, li + 1):
            if j == 1:
                inner = None if i == 1 else ScaleMonomial.of(eta=s[i - 2])
            else:
                inner = ScaleMonomial.of(eta=q, alpha=nu[i - 1][j - 2])
            if j < li:
                outer = ScaleMonomial.of(eta=q, alpha=nu[i - 1][j - 1])
            elif i < k:
                outer = ScaleMonomial.of(eta=s[i - 1])
            else:
                outer = THETA
            zones.append(Zone((i, j), ExponentPair(q, sec[j - 1]), inner, outer, (i, j) == (1, 1)))
    ladder = ZoneLadder(Q, Qi, s, nu, zones)
    ladder.check()
    return ladder


@dataclass
class MembershipCertificate:
    zone: tuple[int, int]
    inner: str
    modulus: str
    outer: str

    def __str__(self):
        return f"{self.inner} < {self.modulus} < {self.outer} in Z{self.zone}"


def classify_zone_membership(expansion, ladder: ZoneLadder) -> tuple[tuple[int, int], MembershipCertificate]:
    """The zone whose open radius range contains the braid, found by exponent comparison."""
    pair = _pair_of(expansion)
    if pair not in set(ladder.pairs()):
        raise StaleLadder(f"pair {pair} is not in the ladder")
    m = pair.modulus()
    hits = [z for z in ladder.zones if (z.inner is None or z.inner < m) and m < z.outer]
    if len(hits) != 1:
        raise InternalError(f"braid modulus {m} lies in {len(hits)} zones")
    z = hits[0]
    return z.index, MembershipCertificate(z.index, "0" if z.inner is None else str(z.inner), str(m), str(z.outer))


@dataclass
class ApproxTorus:
    members: list  # BranchExpansion records sharing the torus
    pair: ExponentPair
    leading_b: Any
    l: int
    rho: Fraction
    zone_index: tuple[int, int]
    d: int
    certificates: list[str] = field(default_factory=list)

    @property
    def sun_count(self) -> int:
        return self.l


def _same_torus(b1, b2, l: int) -> bool:
    ratio = b2 / b1
    return (ratio ** l) == 1


def approximation_tori(expansions: Sequence[BranchExpansion], ladder: ZoneLadder) -> list[ApproxTorus]:
    """Group branches by equal pair and leading coefficient up to ``l``-th roots of unity."""
    groups: list[ApproxTorus] = []
    for br in expansions:
        pair = _pair_of(br)
        zone, cert = classify_zone_membership(br, ladder)
        if zone != ladder.index_of(pair):
            raise InternalError("membership disagrees with the pair index")
        l = lcm(pair.d_prime, pair.p)
        for g in groups:
            if g.pair == pair and _same_torus(g.leading_b, br.b, l):
                g.members.append(br)
                if br.d != g.d:
                    g.d = lcm(g.d, br.d)
                    g.rho = pair.e_over_dprime + Fraction(1, 2 * g.d)
                break
        else:
            g = ApproxTorus([br], pair, br.b, l, pair.e_over_dprime + Fraction(1, 2 * br.d), zone, br.d)
            g.certificates.append(f"braid: {cert}")
            groups.append(g)
    for g in groups:
        _certify(g, groups, ladder)
    groups.sort(key=lambda g: (g.zone_index, _bkey(g.leading_b)))
    return groups


def _bkey(b):
    z = complex(b)
    return (round(abs(z), 9), round(z.real, 9), round(z.imag, 9))


def _certify(g: ApproxTorus, groups: list[ApproxTorus], ladder: ZoneLadder) -> None:
    i, j = g.zone_index
    e = g.pair.e_over_dprime
    # (1) suns: b(1 - zeta) != 0 for zeta != 1, exact since b != 0
    if g.leading_b == 0:
        raise InternalError("zero leading coefficient")
    g.certificates.append(f"suns: {g.l} distinct since b != 0; separation exponent 1/(2d) = {Fraction(1, 2 * g.d)} > 0")
    # (3) the tube sits inside its zone
    nu_out = ladder.nu[i - 1][j - 1] if j <= len(ladder.nu[i - 1]) else None
    nu_in = ladder.nu[i - 1][j - 2] if j >= 2 else None
    if not e < g.rho:
        raise InternalError("rho must exceed e/d'")
    if nu_out is not None and not nu_out < e:
        raise InternalError("outer separator above e/d'")
    if nu_in is not None and not e < nu_in:
        raise InternalError("inner separator below e/d'")
    chain = " < ".join(
        str(v) for v in ([nu_out] if nu_out is not None else []) + [e, g.rho]
    )
    g.certificates.append(f"tube in zone: {chain}" + (f", e/d' < {nu_in}" if nu_in is not None else ""))
    # (4) distinct tori with the same pair are separated
    for h in groups:
        if h is g or h.pair != g.pair:
            continue
        if _same_torus(g.leading_b, h.leading_b, g.l):
            raise InternalError("two torus groups have equal leading data")
        g.certificates.append(f"separated from torus with b ~ {complex(h.leading_b):.4g}: (b'/b)^{g.l} != 1")
