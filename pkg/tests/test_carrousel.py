from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import poly
from vanzone.algebra import numberfield as nf
from vanzone.carrousel import (
    THETA,
    ExponentPair,
    StaleLadder,
    approximation_tori,
    build_zone_ladder,
    classify_zone_membership,
    first_exponent_pairs,
    mediant,
)
from vanzone.geometry import ScaleMonomial
from vanzone.puiseux import nested_expand
from vanzone.puiseux.expand import BranchExpansion
from vanzone.puiseux.series import PuiseuxSeries

F = Fraction


def branch(q, e, b=1, d=None) -> BranchExpansion:
    q, e = F(q), F(e)
    d = d or e.denominator
    p = q.denominator
    return BranchExpansion(q, e, b, PuiseuxSeries.constant("x", 1), [], d, p, p, 1, d * p, None)


# -- pairs and ordering ----------------------------------------------------------------


def test_single_hirzebruch_class():
    Q, Qi, assign = first_exponent_pairs(nested_expand(poly("x*y^2 + t"), 5))
    assert Q == [F(1, 2)] and Qi == [[F(-1, 2)]] and assign == [(1, 1)]


def test_quotients_sorted_decreasing():
    Q, Qi, assign = first_exponent_pairs([branch(F(1, 2), F(-1, 2)), branch(F(3, 2), 0)])
    assert Q == [F(3, 2), F(1, 2)]
    assert assign == [(2, 1), (1, 1)]


def test_grouping_by_pair_only():
    _, _, assign = first_exponent_pairs([branch(F(1, 2), 0, b=1), branch(F(1, 2), 0, b=2)])
    assert assign == [(1, 1), (1, 1)]


# -- ladder ---------------------------------------------------------------------------------


def test_single_pair_ladder():
    ladder = build_zone_ladder([ExponentPair(F(1, 2), F(-1, 2))])
    [z] = ladder.zones
    assert z.solid and z.inner is None and z.outer == THETA
    assert ladder.s == [] and ladder.nu == [[]]


def test_quotient_separator_is_mediant():
    ladder = build_zone_ladder([ExponentPair(F(3, 2), 0), ExponentPair(F(1, 2), F(-1, 2))])
    assert ladder.s == [F(1)]
    assert [z.index for z in ladder.zones] == [(1, 1), (2, 1)]


def test_second_separator_is_mediant():
    ladder = build_zone_ladder([ExponentPair(F(1, 2), 0), ExponentPair(F(1, 2), F(-1, 2))])
    assert ladder.nu == [[F(-1, 3)]]
    assert F(-1, 2) < ladder.nu[0][0] < 0


def test_zone_bounds_of_three_pairs():
    ladder = build_zone_ladder([(F(3, 2), F(-1, 2)), (F(1, 2), F(-1, 2)), (F(1, 2), 0)])
    got = [(z.index, None if z.inner is None else z.inner, z.outer) for z in ladder.zones]
    assert got == [
        ((1, 1), None, ScaleMonomial.of(eta=1)),
        ((2, 1), ScaleMonomial.of(eta=1), ScaleMonomial.of(eta=F(1, 2), alpha=F(-1, 3))),
        ((2, 2), ScaleMonomial.of(eta=F(1, 2), alpha=F(-1, 3)), THETA),
    ]


def test_membership_examples():
    single = build_zone_ladder([(F(1, 2), F(-1, 2))])
    assert classify_zone_membership(ExponentPair(F(1, 2), F(-1, 2)), single)[0] == (1, 1)
    two = build_zone_ladder([(F(3, 2), 0), (F(1, 2), F(-1, 2))])
    assert classify_zone_membership(ExponentPair(F(3, 2), 0), two)[0] == (1, 1)
    assert classify_zone_membership(ExponentPair(F(1, 2), F(-1, 2)), two)[0] == (2, 1)
    with pytest.raises(StaleLadder):
        classify_zone_membership(ExponentPair(F(1, 3), 0), two)


# -- ladder laws on random pair sets -----------------------------------------------------


fractions = st.builds(F, st.integers(-12, 12), st.integers(1, 12))
quotients = st.builds(F, st.integers(1, 24), st.integers(1, 12))
pair_sets = st.sets(st.tuples(quotients, fractions), min_size=1, max_size=7)


def _radius_le(a, b) -> bool:
    return a == b or a < b


@settings(max_examples=1000, deadline=None)
@given(pair_sets, st.tuples(quotients, fractions))
def test_ladder_laws(pairs, probe):
    ladder = build_zone_ladder(pairs)
    zones = ladder.zones
    assert len(zones) == len(pairs)
    # coverage of [0, theta] with consecutive-only contact
    assert zones[0].inner is None and zones[0].solid
    assert zones[-1].outer == THETA
    for a, b in zip(zones, zones[1:]):
        assert a.outer == b.inner and not b.solid
    for z in zones[1:]:
        assert z.inner < z.outer
    for i, a in enumerate(zones):
        for b in zones[i + 2:]:
            assert a.outer < b.inner  # no contact beyond neighbours
    # separator strictness
    for i, s in enumerate(ladder.s):
        assert ladder.quotients[i + 1] < s < ladder.quotients[i]
    for sec, nus in zip(ladder.seconds, ladder.nu):
        for j, v in enumerate(nus):
            assert sec[j + 1] < v < sec[j]
    # membership soundness in both directions
    for q, e in pairs:
        m = ExponentPair(q, e).modulus()
        inside = [z.index for z in zones if (z.inner is None or z.inner < m) and m < z.outer]
        assert inside == [ladder.index_of(ExponentPair(q, e))]
        assert classify_zone_membership(ExponentPair(q, e), ladder)[0] == inside[0]
    if probe not in pairs:
        with pytest.raises(StaleLadder):
            classify_zone_membership(ExponentPair(*probe), ladder)


@settings(max_examples=200, deadline=None)
@given(fractions, fractions)
def test_mediant_strictly_between(a, b):
    if a == b:
        return
    lo, hi = sorted((a, b))
    assert lo < mediant(lo, hi) < hi


# -- approximation tori ------------------------------------------------------------------


def test_conjugate_pair_gives_one_torus():
    brs = nested_expand(poly("x*y^2 + t"), 5)
    ladder = build_zone_ladder(brs)
    [torus] = approximation_tori(brs, ladder)
    assert torus.l == 2 and torus.sun_count == 2
    assert torus.rho == F(-1, 2) + F(1, 4)
    assert torus.zone_index == (1, 1)
    assert any(c.startswith("tube in zone") for c in torus.certificates)


def test_integral_pair_single_sun():
    ladder = build_zone_ladder([(F(1), F(0))])
    [torus] = approximation_tori([branch(1, 0)], ladder)
    assert torus.l == 1


def test_distinct_moduli_give_distinct_tori():
    brs = [branch(1, 0, b=nf.Q(1)), branch(1, 0, b=nf.Q(2))]
    tori = approximation_tori(brs, build_zone_ladder(brs))
    assert len(tori) == 2
    assert all(any(c.startswith("separated") for c in t.certificates) for t in tori)


def test_roots_of_unity_share_a_torus():
    zeta = nf.root_of_unity(2)  # -1
    brs = [branch(F(1, 2), 0, b=nf.Q(1)), branch(F(1, 2), 0, b=zeta)]
    [torus] = approximation_tori(brs, build_zone_ladder(brs))
    assert len(torus.members) == 2
