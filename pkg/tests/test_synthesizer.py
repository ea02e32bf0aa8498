import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsdof.errors import OutsideRegionError
from rsdof.region import CsitProfile, all_subsets, build_region, contains, facet_contains, facet_spec
from rsdof.scheme import RsScheme, total_dof, validate_scheme
from rsdof.synthesizer import (
    FacetCase,
    TimeSharingPlan,
    classify_point,
    facet_case,
    plan_dof,
    plan_to_user,
    synthesize,
    synthesize_facet_point,
)

from .conftest import Q, random_profile, vec


def test_facet_point_lead_within(p2):
    d = vec(0.5, 0.8)
    assert facet_case(p2, (0, 1), d) is FacetCase.LEAD_WITHIN
    s = synthesize_facet_point(p2, (0, 1), d)
    assert s.levels == vec(0.5, 0.5)
    assert s.common_split == vec(0, 0.5)
    assert total_dof(s, p2).total == d


def test_facet_point_lead_above(p2):
    d = vec(0.9, 0.4)
    assert facet_case(p2, (0, 1), d) is FacetCase.LEAD_ABOVE
    s = synthesize_facet_point(p2, (0, 1), d)
    assert s.levels == vec(0.6, 0.6)
    assert s.common_split == vec(0.3, 0.1)


def test_facet_point_three_users(p3):
    s = synthesize_facet_point(p3, (0, 2), vec(0.9, 0.4, 0.3))
    assert s.levels == vec(0.8, 0.7, 0.8)
    assert s.common_split == vec(0.1, 0, 0.1)
    assert total_dof(s, p3).total == vec(0.9, 0.4, 0.3)


def test_facet_point_single_user(p2):
    s = synthesize_facet_point(p2, (1,), vec(0.3, 1))
    assert s.levels == vec(0.3, 0.3)
    assert s.common_split == vec(0, 0.7)
    out = total_dof(s, p2)
    assert out.private == vec(0.3, 0.3)
    assert out.total == vec(0.3, 1)


def test_facet_point_rejects_off_facet(p2):
    with pytest.raises(OutsideRegionError):
        synthesize_facet_point(p2, (0, 1), vec(0.5, 0.5))
    with pytest.raises(ValueError):
        synthesize_facet_point(p2, (), vec(0.5, 0.5))


def test_between_tie_uses_first_branch():
    # alpha_2 == d_{s1}: user 2 sits between s1=1 and s2=3 with a tie
    p = CsitProfile.from_alphas(vec(0.8, 0.5, 0.2))
    d = vec(0.5, 0.5, 0.7)  # d1 + d3 = 1.2, d1 in [0.2, 0.8], d2 <= min(0.5, d1)
    assert facet_contains(facet_spec(p, (0, 2)), d)
    s = synthesize_facet_point(p, (0, 2), d)
    assert s.levels[1] == d[1]
    assert total_dof(s, p).total == d


def test_synthesize_scaled_point(p2):
    plan = synthesize(p2, vec(0.45, 0.2))
    assert len(plan.components) == 2
    (w1, s1), (w2, s2) = plan.components
    assert w1 == w2 == Fraction(1, 2)
    assert s1.levels == vec(0.6, 0.6) and s1.common_split == vec(0.3, 0.1)
    assert s2.is_silence
    assert plan_dof(plan, p2) == vec(0.45, 0.2)


def test_synthesize_zero_coordinate_recurses(p3):
    plan = synthesize(p3, vec(0.9, 0, 0.3))
    assert len(plan.components) == 1
    (w, s), = plan.components
    assert w == 1
    assert s.active == (True, False, True)
    assert s.levels == vec(0.8, 0, 0.8)
    assert s.common_split == vec(0.1, 0, 0.1)


def test_synthesize_zero_is_silence(p3):
    plan = synthesize(p3, vec(0, 0, 0))
    assert plan.components == ((1, RsScheme.silence(3)),)


def test_synthesize_rejects_exterior(p2):
    with pytest.raises(OutsideRegionError) as err:
        synthesize(p2, vec(1.0, 0.4))
    assert err.value.violated == ((0, 1),)


def test_plan_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        TimeSharingPlan(((Fraction(1, 2), RsScheme.silence(1)),), vec(0))


def test_classify_point(p2):
    c = classify_point(p2, vec(0.9, 0.4))
    assert c.kind == "boundary" and c.subsets == ((0, 1),)
    assert classify_point(p2, vec(0.1, 0.1)).kind == "interior"
    assert classify_point(p2, vec(2, 0)).kind == "exterior"
    z = classify_point(p2, vec(0, 0.5))
    assert z.kind == "boundary" and z.zero_coords == (0,) and z.subsets == ()


def test_plan_to_user_permutes_back():
    p = CsitProfile.from_alphas(vec(0.3, 0.6))  # user 2 has the better CSIT
    plan = plan_to_user(synthesize(p, p.to_canonical(vec(0.4, 0.9))), p)
    (w, s), = plan.components
    assert plan.achieved == vec(0.4, 0.9)
    assert s.levels == vec(0.6, 0.6) and s.common_split == vec(0.1, 0.3)


def _independent_max_level(profile, S, d):
    if len(S) == 1:
        return profile.alphas[S[0]]
    lead = S[0]
    return d[lead] if d[lead] <= profile.alphas[lead] else profile.alphas[lead]


def test_grid_on_every_facet_small():
    """Step-1/4 grids on every facet for K <= 3; the acceptance suite runs 1/8 up to K=5."""
    rng = random.Random(8)
    for K in (1, 2, 3):
        for _ in range(4):
            profile = random_profile(rng, K, 4)
            for S in all_subsets(K):
                spec = facet_spec(profile, S)
                free = [j for j in range(K) if j != S[0]]
                for values in product(range(5), repeat=len(free)):
                    d = [Fraction(0)] * K
                    for j, v in zip(free, values):
                        d[j] = Fraction(v, 4)
                    d[S[0]] = spec.rhs - sum(d[j] for j in S[1:])
                    if not facet_contains(spec, d):
                        continue
                    s = synthesize_facet_point(profile, S, d)
                    assert total_dof(s, profile).total == tuple(d)
                    assert validate_scheme(s, profile) == []
                    assert s.max_active_level == _independent_max_level(profile, S, d)


@st.composite
def profile_and_inside_point(draw):
    K = draw(st.integers(1, 5))
    alphas = draw(st.lists(st.integers(0, 12).map(lambda n: Fraction(n, 12)), min_size=K, max_size=K))
    profile = CsitProfile.from_alphas(alphas)
    d = draw(st.lists(st.integers(0, 12).map(lambda n: Fraction(n, 12)), min_size=K, max_size=K))
    return profile, tuple(d)


@settings(max_examples=400, deadline=None)
@given(profile_and_inside_point())
def test_synthesize_is_exact_everywhere(case):
    profile, d = case
    if not contains(build_region(profile), d):
        with pytest.raises(OutsideRegionError):
            synthesize(profile, d)
        return
    plan = synthesize(profile, d)
    assert plan_dof(plan, profile) == d
    assert sum(w for w, _ in plan.components) == 1
    for _, s in plan.components:
        assert validate_scheme(s, profile) == []
        assert all(0 <= a <= 1 for a in s.levels)
        for j in range(profile.K):
            if not s.active[j]:
                assert s.levels[j] == 0 and s.common_split[j] == 0
