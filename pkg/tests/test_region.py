import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsdof.errors import DimensionError, EmptyProfileError, OutsideRegionError
from rsdof.region import (
    CsitProfile,
    active_constraints,
    all_subsets,
    build_region,
    contains,
    facet_contains,
    facet_contains_direct,
    facet_spec,
    reduce_profile,
    scale_to_boundary,
)

from .conftest import Q, random_profile, vec


def rhs_map(region):
    return {c.subset: c.rhs for c in region.constraints}


# -- profile -----------------------------------------------------------------

def test_profile_canonicalizes_with_stable_ties():
    p = CsitProfile.from_alphas(vec(0.3, 0.6, 0.3, 0.9))
    assert p.alphas == vec(0.9, 0.6, 0.3, 0.3)
    assert p.perm == (3, 1, 0, 2)
    assert p.user_alphas == vec(0.3, 0.6, 0.3, 0.9)
    assert p.to_user(p.to_canonical("abcd")) == tuple("abcd")


def test_profile_rejects_bad_input():
    with pytest.raises(EmptyProfileError):
        CsitProfile.from_alphas([])
    with pytest.raises(ValueError):
        CsitProfile.from_alphas(vec(1.2))
    with pytest.raises(ValueError):
        CsitProfile(vec(0.2, 0.5))


def test_decimal_inputs_are_exact():
    assert CsitProfile.from_alphas([0.6]).alphas == (Fraction(3, 5),)


# -- build_region ------------------------------------------------------------

def test_build_region_single_user():
    region = build_region(CsitProfile.from_alphas(vec(0.7)))
    assert rhs_map(region) == {(0,): 1}


def test_build_region_two_users(p2):
    assert rhs_map(build_region(p2)) == {(0,): 1, (1,): 1, (0, 1): Q(1.3)}


def test_build_region_three_users(p3):
    rhs = rhs_map(build_region(p3))
    assert len(rhs) == 7
    assert rhs[(0, 1, 2)] == Q(1.7)
    assert rhs[(0, 2)] == Q(1.2)
    assert rhs[(1, 2)] == Q(1.2)
    assert rhs[(0, 1)] == Q(1.5)


def test_hyperplane_count():
    for K in range(1, 6):
        region = build_region(CsitProfile(tuple(Fraction(1, 2) for _ in range(K))))
        assert len(region.hyperplanes()) == 2**K + K - 1


# -- contains / active_constraints -------------------------------------------

def test_contains_examples(p2):
    region = build_region(p2)
    assert contains(region, vec(1, 0)).inside
    inside = contains(region, vec(0.9, 0.4))
    assert inside.inside and inside.violated == ()
    outside = contains(region, vec(1.0, 0.4))
    assert not outside.inside
    assert outside.violated == ((0, 1),)


def test_contains_negative_and_dimension(p2):
    region = build_region(p2)
    report = contains(region, vec(-0.1, 0.2))
    assert not report and report.negative == (0,)
    with pytest.raises(DimensionError):
        contains(region, vec(0.1))


def test_active_constraints_examples(p2, p3):
    r2 = build_region(p2)
    assert active_constraints(r2, vec(0.5, 0.5)) == []
    assert active_constraints(r2, vec(0.9, 0.4)) == [(0, 1)]
    assert active_constraints(build_region(p3), vec(0.9, 0.4, 0.3)) == [(0, 2)]
    with pytest.raises(OutsideRegionError):
        active_constraints(r2, vec(1, 1))


# -- scale_to_boundary -------------------------------------------------------

def test_scale_to_boundary_examples(p2):
    region = build_region(p2)
    assert scale_to_boundary(region, vec(0.45, 0.2)) == (vec(0.9, 0.4), Fraction(1, 2))
    assert scale_to_boundary(region, vec(0.9, 0.4)) == (vec(0.9, 0.4), 1)
    one = build_region(CsitProfile.from_alphas(vec(0.7)))
    assert scale_to_boundary(one, vec(0.5)) == ((Fraction(1),), Fraction(1, 2))


def test_scale_to_boundary_errors(p2):
    region = build_region(p2)
    with pytest.raises(ValueError):
        scale_to_boundary(region, vec(0, 0))
    with pytest.raises(ValueError):
        scale_to_boundary(region, vec(0.2, 0))
    with pytest.raises(OutsideRegionError):
        scale_to_boundary(region, vec(1, 1))


lattice = st.integers(min_value=0, max_value=20).map(lambda n: Fraction(n, 20))


@st.composite
def profile_and_point(draw, positive=False):
    K = draw(st.integers(1, 5))
    alphas = draw(st.lists(lattice, min_size=K, max_size=K))
    profile = CsitProfile.from_alphas(alphas)
    lo = 1 if positive else 0
    d = draw(st.lists(st.integers(lo, 30).map(lambda n: Fraction(n, 30)), min_size=K, max_size=K))
    return profile, tuple(d)


@settings(max_examples=300, deadline=None)
@given(profile_and_point(positive=True))
def test_scale_to_boundary_lands_on_boundary(case):
    profile, d = case
    region = build_region(profile)
    if not contains(region, d):
        return
    boundary, lam = scale_to_boundary(region, d)
    assert 0 < lam <= 1
    assert tuple(lam * x for x in boundary) == d
    assert contains(region, boundary)
    assert active_constraints(region, boundary)


# -- region properties -------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(profile_and_point(), st.data())
def test_downward_closure(case, data):
    profile, d = case
    region = build_region(profile)
    if not contains(region, d):
        return
    shrink = [data.draw(st.integers(0, 10)) for _ in d]
    smaller = tuple(x * Fraction(s, 10) for x, s in zip(d, shrink))
    assert contains(region, smaller)


@settings(max_examples=200, deadline=None)
@given(st.lists(lattice, min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_permutation_consistency(alphas, rnd):
    """Relabelling the users relabels the constraint set and nothing else."""
    order = list(range(len(alphas)))
    rnd.shuffle(order)
    shuffled = [alphas[i] for i in order]

    def as_user_sets(profile):
        region = build_region(profile)
        return {
            frozenset(profile.perm[i] for i in c.subset): c.rhs for c in region.constraints
        }

    base = as_user_sets(CsitProfile.from_alphas(alphas))
    other = as_user_sets(CsitProfile.from_alphas(shuffled))
    # user k of the shuffled list is user order[k] of the original
    relabelled = {frozenset(order[k] for k in s): r for s, r in other.items()}
    assert relabelled == base


@settings(max_examples=200, deadline=None)
@given(profile_and_point(), st.data())
def test_monotone_in_csit_quality(case, data):
    profile, d = case
    bumps = [data.draw(st.integers(0, 5)) for _ in profile.alphas]
    better = [min(Fraction(1), a + Fraction(b, 20)) for a, b in zip(profile.user_alphas, bumps)]
    richer = CsitProfile.from_alphas(better)
    # the canonical order can change, so compare in the original labelling
    d_user = profile.to_user(d)
    if contains(build_region(profile), d):
        assert contains(build_region(richer), richer.to_canonical(d_user))


# -- facets ------------------------------------------------------------------

def test_facet_spec_three_users(p3):
    spec = facet_spec(p3, (0, 2))
    assert spec.lower == {0: Q(0.2), 2: Q(0.2)}
    assert spec.upper == {1: Q(0.5)}
    assert spec.capped_by_lead == frozenset({1})
    assert spec.between == (1,) and spec.ahead == () and spec.behind == ()
    assert spec.rhs == Q(1.2)


def test_facet_spec_singleton(p2):
    spec = facet_spec(p2, (1,))
    assert spec.rhs == 1
    assert spec.lower[1] == spec.upper[1] == 1
    assert spec.upper[0] == Q(0.3)
    assert spec.ahead == (0,)


def test_facet_spec_full_set(p2):
    spec = facet_spec(p2, (0, 1))
    assert spec.lower == {0: Q(0.3), 1: Q(0.3)}
    assert spec.upper == {}
    assert spec.rhs == Q(1.3)


def test_facet_spec_rejects_empty(p2):
    with pytest.raises(ValueError):
        facet_spec(p2, ())


def test_facet_contains_examples(p2):
    full = facet_spec(p2, (0, 1))
    assert facet_contains(full, vec(0.9, 0.4))
    assert not facet_contains(full, vec(1.1, 0.2))
    assert facet_contains(facet_spec(p2, (1,)), vec(0.3, 1))
    assert not facet_contains(facet_spec(p2, (1,)), vec(0.31, 1))


def test_facet_forms_agree_on_random_hyperplane_points():
    """The per-user bound form matches 'on the hyperplane and inside the region'."""
    rng = random.Random(11)
    agree = hits = 0
    for K in (2, 3, 4):
        for _ in range(6):
            profile = random_profile(rng, K, 10)
            region = build_region(profile)
            for S in all_subsets(K):
                spec = facet_spec(profile, S)
                for _ in range(60):
                    d = [Fraction(rng.randint(0, 10), 10) for _ in range(K)]
                    d[S[0]] = spec.rhs - sum(d[i] for i in S[1:])
                    a = facet_contains(spec, d)
                    assert a == facet_contains_direct(region, S, d), (profile.alphas, S, d)
                    hits += a
                    agree += 1
    assert hits > 100


# -- reduce_profile ----------------------------------------------------------

def test_reduce_profile_examples(p2, p3):
    reduced, index_map = reduce_profile(p3, 1)
    assert reduced.alphas == vec(0.8, 0.2) and index_map == (0, 2)
    assert reduce_profile(p2, 0)[0].alphas == vec(0.3)
    assert reduce_profile(p3, 2)[0].alphas == vec(0.8, 0.5)
    with pytest.raises(ValueError):
        reduce_profile(CsitProfile(vec(0.5)), 0)


def test_reduced_region_is_the_zero_slice(p3):
    reduced, index_map = reduce_profile(p3, 1)
    big, small = build_region(p3), build_region(reduced)
    rng = random.Random(3)
    for _ in range(500):
        d_small = tuple(Fraction(rng.randint(0, 12), 10) for _ in range(2))
        d_big = [Fraction(0)] * 3
        for r, parent in enumerate(index_map):
            d_big[parent] = d_small[r]
        assert bool(contains(small, d_small)) == bool(contains(big, d_big))
