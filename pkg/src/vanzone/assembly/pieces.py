"""Seifert pieces of the vanishing zone, read off the loop actions of a sample fibre.

For a zone with basepoint sheets ``B`` the pieces are the orbits of the group
generated by the zone's loops (the basepoint circle and the lassos around its
suns) together with the vertical monodromy ``h``.  For a piece ``P`` with
sheet orbit ``O``:

* the fibre surface has ``chi(F_P) = |O| chi(zone) - sum_suns (|O| - cycles of the lasso on O)``;
* the generic Seifert leaf meets ``F_P`` in ``n_P = d' * (cycle length of the leaf loop)`` points;
* a core meeting ``F_P`` in ``k`` points is a fibre of multiplicity ``n_P / k``;
* the base orbifold satisfies ``chi(F_P) = n_P (2 - 2g - b - sum (1 - 1/m))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..algebra.multipoly import MultiPoly, factor_rational
from ..carrousel import ApproxTorus, ZoneLadder
from ..errors import InternalError
from ..geometry import SurfaceGerm, TransversalInvariants
from ..puiseux import Permutation, monodromy_permutation, puiseux_expand
from ..puiseux.expand import BranchExpansion
from .continuation import Perm, orbits
from .sample import FibreSample


class ClusteringError(InternalError):
    """Sheet bookkeeping over a solar disc does not add up."""


@dataclass
class MonodromyData:
    sun_permutation: Permutation  # exact x-loop action on all conjugates of all branches
    sheet_permutation: tuple[int, ...]  # x-loop on the z-sheets over the outer boundary basepoint
    transversal_branch_orbits: list[list[int]]  # orbits on the branches of f_a
    transversal_classes: list  # (series, class size) for f_a
    fiber: TransversalInvariants
    sample: FibreSample
    N: int
    irreducible: bool
    expansions: list[BranchExpansion] = field(default_factory=list)

    @property
    def boundary_count(self) -> int:
        return len(self.transversal_branch_orbits)

    def x_denominator_lcm(self) -> int:
        """lcm of the x-denominators of the discriminant branches."""
        return lcm(1, *(br.x_denominator() for br in self.expansions))

    def all_x_denominator_lcm(self) -> int:
        """The same, also over the coefficients of the transversal branches of ``f_a``."""
        dens = [c.denominator for s, _ in self.transversal_classes for _, c in s.terms if hasattr(c, "denominator")]
        return lcm(self.x_denominator_lcm(), *dens)


def _transversal(f: MultiPoly, order) -> tuple[list, list[list[int]]]:
    classes = puiseux_expand(f, "z", "y", order, coefficient_var="x")
    if not classes:
        return [], []
    gx = monodromy_permutation(classes, "x", outer="y", inner="x")
    gy = monodromy_permutation(classes, "y", outer="y", inner="x")
    return classes, orbits(len(gx), [gx.images, gy.images])


def vertical_monodromy(
    germ: SurfaceGerm | MultiPoly,
    expansions: Sequence[BranchExpansion],
    *,
    sample: FibreSample,
    fiber: TransversalInvariants,
    N: int,
    order=5,
) -> MonodromyData:
    """Exact and sampled x-loop actions, cross-checked against each other."""
    f = germ.f if isinstance(germ, SurfaceGerm) else germ
    exact = monodromy_permutation(list(expansions), "x")
    offsets, acc = [], 0
    for br in expansions:
        offsets.append(acc)
        acc += br.n
    label = [offsets[s.branch] + s.conjugate for s in sample.suns]
    for k, img in enumerate(sample.sun_transport):
        if exact(label[k]) != label[img]:
            raise InternalError("the sampled sun permutation disagrees with the exact conjugate action")
    classes, orb = _transversal(f, order)
    outer = sample.boundaries[-1]
    numeric_boundary = orbits(N, [outer.circle, outer.h])
    if len(numeric_boundary) != len(orb):
        raise InternalError(
            f"{len(numeric_boundary)} boundary tori from the sample, {len(orb)} orbits of transversal branches"
        )
    _, facs = factor_rational(f)
    irreducible = sum(m for _, m in facs) == 1
    return MonodromyData(exact, outer.h, orb, classes, fiber, sample, N, irreducible, list(expansions))


@dataclass
class Disc:
    sun: int
    local_sheets: tuple[int, ...]  # a cycle of the small loop around the sun


@dataclass
class FilledTorus:
    """A solid torus over an approximation torus: an orbit of solar discs under the x-loop."""

    torus: int
    discs: list[Disc]
    zone: tuple[int, int]

    @property
    def fibre_points(self) -> int:
        return len(self.discs)


@dataclass
class TorusFilling:
    torus: int
    suns: list[int]
    disc_count_per_fiber: int  # discs over one sun
    solid_torus_count: int
    solids: list[FilledTorus]


def _torus_of_sun(tori: Sequence[ApproxTorus], expansions: Sequence[BranchExpansion], branch: int) -> int:
    br = expansions[branch]
    for i, g in enumerate(tori):
        if any(m is br for m in g.members):
            return i
    raise InternalError("a sun belongs to no approximation torus")


def fill_solid_tori(tori: Sequence[ApproxTorus], monodromy: MonodromyData, N: int) -> list[TorusFilling]:
    """Solar discs over each sun and the solid tori they sweep out."""
    S = monodromy.sample
    exps = monodromy.expansions
    discs: list[Disc] = []
    owner: dict[tuple[int, int], int] = {}
    per_sun: dict[int, int] = {}
    for k, s in enumerate(S.suns):
        cyc = Perm(s.local_loop).cycles()
        ram = exps[s.branch].multiplicity
        # Riemann-Hurwitz on a disc with one branch point
        if len(cyc) != N - ram:
            raise ClusteringError(
                f"sun {k}: {len(cyc)} discs from the local loop, {N - ram} from the ramification {ram}"
            )
        if not 1 <= len(cyc) <= N:
            raise ClusteringError("disc count out of range")
        per_sun[k] = len(cyc)
        for c in cyc:
            for i in c:
                owner[(k, i)] = len(discs)
            discs.append(Disc(k, tuple(sorted(c))))
    links = []
    for d_idx, d in enumerate(discs):
        images = {owner[(S.sun_transport[d.sun], S.disc_transport[(d.sun, i)])] for i in d.local_sheets}
        if len(images) != 1:
            raise ClusteringError("the x-loop splits a solar disc")
        links.append(images.pop())
    groups = orbits(len(discs), [links])
    sun_torus = {k: _torus_of_sun(tori, exps, s.branch) for k, s in enumerate(S.suns)}
    out = []
    for ti in range(len(tori)):
        suns = [k for k in sun_torus if sun_torus[k] == ti]
        solids = [FilledTorus(ti, [discs[i] for i in orb], tori[ti].zone_index) for orb in groups if sun_torus[discs[orb[0]].sun] == ti]
        counts = {per_sun[k] for k in suns}
        if len(counts) != 1:
            raise ClusteringError("suns of one torus carry different disc counts")
        out.append(TorusFilling(ti, suns, counts.pop(), len(solids), solids))
    return out


@dataclass
class ExceptionalFiber:
    kind: str  # "centre" or "core"
    multiplicity: int
    points: int  # intersections with the fibre surface
    torus: int | None = None

    @property
    def exceptional(self) -> bool:
        return self.multiplicity > 1


@dataclass
class SeifertPiece:
    component_id: int
    zone_index: tuple[int, int]
    sheets: tuple[int, ...]  # basepoint sheets of the zone forming this piece
    base_genus: int
    boundary_count: int
    fibre_euler: int  # chi of the fibre surface F_P over one x
    orbifold_euler: Fraction
    generic_degree: int  # n_P
    fibration_slope: tuple[int, int]  # (e, d')
    exceptional_fibers: list[ExceptionalFiber]
    base_is_disc_zone: bool
    euler_char: int = 0  # of the 3-dimensional piece: circle-fibred, so 0

    @property
    def exceptional_count(self) -> int:
        return sum(1 for e in self.exceptional_fibers if e.exceptional)

    def describe(self) -> str:
        ms = [e.multiplicity for e in self.exceptional_fibers if e.exceptional]
        return (
            f"piece {self.component_id} in Z{self.zone_index}: base genus {self.base_genus}, "
            f"{self.boundary_count} boundary, exceptional {ms}, slope {self.fibration_slope}"
        )


def _cycles_on(perm: Sequence[int], subset: set[int]) -> int:
    return sum(1 for c in Perm(tuple(perm)).cycles() if c[0] in subset)


def _orbit_owner(orbit: Sequence[int], connect: Sequence[int], pieces: list[set[int]]) -> int:
    """Index of the piece whose sheets are carried into ``orbit`` by ``connect``."""
    hits = {pi for pi, P in enumerate(pieces) for i in P if connect[i] in orbit}
    if len(hits) != 1:
        raise InternalError("a boundary orbit meets several pieces")
    return hits.pop()


def zone_pieces(
    ladder: ZoneLadder,
    tori: Sequence[ApproxTorus],
    monodromy: MonodromyData,
    N: int,
    fillings: Sequence[TorusFilling] | None = None,
) -> list[SeifertPiece]:
    S = monodromy.sample
    fillings = list(fillings) if fillings is not None else fill_solid_tori(tori, monodromy, N)
    pieces: list[SeifertPiece] = []
    for zi, (z, zs) in enumerate(zip(ladder.zones, S.zones)):
        gens = [zs.circle, zs.h] + [S.suns[k].lasso for k in zs.suns]
        sheet_sets = [set(o) for o in orbits(N, gens)]
        chi_zone = 1 if z.inner is None else 0
        e, dp = z.pair.e_over_dprime.numerator, z.pair.d_prime
        outer_orbits = orbits(N, [S.boundaries[zi].circle, S.boundaries[zi].h])
        inner_orbits = orbits(N, [S.boundaries[zi - 1].circle, S.boundaries[zi - 1].h]) if zi else []
        for O in sheet_sets:
            chi = len(O) * chi_zone - sum(len(O) - _cycles_on(S.suns[k].lasso, O) for k in zs.suns)
            leaf_lengths = {len(c) for c in Perm(zs.leaf).cycles() if c[0] in O}
            if len(leaf_lengths) != 1:
                raise InternalError(f"leaf loop has unequal cycle lengths {leaf_lengths} on one piece")
            n_P = dp * leaf_lengths.pop()
            b = sum(1 for orb in outer_orbits if any(zs.to_outer[i] in orb for i in O))
            if zs.to_inner is not None:
                b += sum(1 for orb in inner_orbits if any(zs.to_inner[i] in orb for i in O))
            fibres: list[ExceptionalFiber] = []
            if zs.to_centre is not None:
                for c in Perm(S.centre_h).cycles():
                    if any(zs.to_centre[i] in c for i in O):
                        fibres.append(_fibre("centre", n_P, len(c)))
            for fill in fillings:
                for solid in fill.solids:
                    if solid.zone != z.index:
                        continue
                    d0 = solid.discs[0]
                    to_local = S.suns[d0.sun].to_local
                    if any(to_local[i] in d0.local_sheets for i in O):
                        fibres.append(_fibre("core", n_P, solid.fibre_points, fill.torus))
            defect = sum(1 - Fraction(1, x.multiplicity) for x in fibres)
            orb_chi = Fraction(chi, n_P)
            two_g = 2 - b - defect - orb_chi
            if two_g < 0 or two_g.denominator != 1 or two_g.numerator % 2:
                raise InternalError(f"piece in zone {z.index}: base orbifold data give 2g = {two_g}")
            pieces.append(
                SeifertPiece(
                    component_id=len(pieces),
                    zone_index=z.index,
                    sheets=tuple(sorted(O)),
                    base_genus=two_g.numerator // 2,
                    boundary_count=b,
                    fibre_euler=chi,
                    orbifold_euler=orb_chi,
                    generic_degree=n_P,
                    fibration_slope=(e, dp),
                    exceptional_fibers=fibres,
                    base_is_disc_zone=z.inner is None,
                )
            )
    return pieces


def _fibre(kind: str, n_P: int, k: int, torus: int | None = None) -> ExceptionalFiber:
    if n_P % k:
        raise InternalError(f"a {kind} fibre meets the fibre surface {k} times, not dividing n = {n_P}")
    return ExceptionalFiber(kind, n_P // k, k, torus)


def riemann_hurwitz_total(pieces: Sequence[SeifertPiece]) -> int:
    """chi of the whole transversal Milnor fibre, summed over zone pieces."""
    return sum(p.fibre_euler for p in pieces)


def riemann_hurwitz_from_ramification(monodromy: MonodromyData) -> int:
    """The same total from exact ramification data: ``N - sum over suns of sum(e_P - 1)``."""
    return monodromy.N - sum(monodromy.expansions[s.branch].multiplicity for s in monodromy.sample.suns)
