"""Build explicit Rate-Splitting schemes for any point of the DoF region.

Points on a sum-constraint facet get a single scheme.  Points with a zero
coordinate are handled on the region of the remaining users and lifted back
with the zero user idle.  Every other point is a scaled-down boundary point and
is reached by time-sharing the boundary scheme with silence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, OutsideRegionError
from .rational import as_vector
from .region import (
    CsitProfile,
    active_constraints,
    build_region,
    contains,
    facet_contains,
    facet_spec,
    reduce_profile,
    scale_to_boundary,
)
from .scheme import RsScheme, total_dof, validate_scheme

__all__ = [
    "FacetCase",
    "TimeSharingPlan",
    "PointClass",
    "facet_case",
    "predicted_max_level",
    "synthesize_facet_point",
    "synthesize",
    "plan_dof",
    "classify_point",
    "plan_to_user",
]

ZERO = Fraction(0)


class FacetCase(enum.Enum):
    SINGLE = "single"  # |S| = 1
    LEAD_WITHIN = "lead_within"  # |S| >= 2, alpha_{s2} <= d_{s1} <= alpha_{s1}
    LEAD_ABOVE = "lead_above"  # |S| >= 2, d_{s1} > alpha_{s1}


@dataclass(frozen=True)
class TimeSharingPlan:
    components: tuple[tuple[Fraction, RsScheme], ...]
    achieved: tuple[Fraction, ...]

    def __post_init__(self):
        if sum((w for w, _ in self.components), ZERO) != 1:
            raise ValueError("time-sharing weights must sum to 1")
        if any(not 0 <= w <= 1 for w, _ in self.components):
            raise ValueError("time-sharing weights must lie in [0, 1]")

    @property
    def K(self) -> int:
        return len(self.achieved)


def plan_dof(plan: TimeSharingPlan, profile: CsitProfile) -> tuple[Fraction, ...]:
    acc = [ZERO] * profile.K
    for weight, scheme in plan.components:
        for j, x in enumerate(total_dof(scheme, profile).total):
            acc[j] += weight * x
    return tuple(acc)


def facet_case(profile: CsitProfile, subset: Sequence[int], d) -> FacetCase:
    S = tuple(sorted(subset))
    if len(S) == 1:
        return FacetCase.SINGLE
    d = as_vector(d)
    if d[S[0]] <= profile.alphas[S[0]]:
        return FacetCase.LEAD_WITHIN
    return FacetCase.LEAD_ABOVE


def predicted_max_level(profile: CsitProfile, subset: Sequence[int], d) -> Fraction:
    """Largest private level the facet construction should use."""
    S = tuple(sorted(subset))
    if facet_case(profile, S, d) is FacetCase.LEAD_WITHIN:
        return as_vector(d)[S[0]]
    return profile.alphas[S[0]]


def synthesize_facet_point(profile: CsitProfile, subset: Sequence[int], d) -> RsScheme:
    """Scheme achieving ``d`` exactly, for ``d`` on the facet of ``subset``."""
    d = as_vector(d)
    spec = facet_spec(profile, subset)
    if not facet_contains(spec, d):
        raise OutsideRegionError(f"{d} is not on the facet of subset {spec.subset}")
    K, alphas, S = profile.K, profile.alphas, spec.subset
    lead = spec.lead
    levels = [ZERO] * K
    split = [ZERO] * K
    case = facet_case(profile, S, d)

    if case is FacetCase.SINGLE:
        top = alphas[lead]
        levels[lead] = top
        for j in spec.ahead:
            levels[j] = d[j]
        for j in spec.behind:
            levels[j] = d[j] + top - alphas[j]
        split[lead] = 1 - top
    elif case is FacetCase.LEAD_WITHIN:
        top = d[lead]
        for j in S:
            levels[j] = top
        for j in spec.ahead:
            levels[j] = d[j]
        for j in spec.between:
            # ties alpha_j == d_{s1} take the first branch; both give a_j = d_j
            levels[j] = d[j] if alphas[j] >= top else d[j] + top - alphas[j]
        for j in spec.behind:
            levels[j] = d[j] + top - alphas[j]
        for j in S[1:]:
            split[j] = d[j] - alphas[j]
    else:
        top = alphas[lead]
        for j in S:
            levels[j] = top
            split[j] = d[j] - alphas[j]
        for j in spec.ahead:
            levels[j] = d[j]
        for j in spec.between + spec.behind:
            levels[j] = d[j] + top - alphas[j]

    scheme = RsScheme.all_active(levels, split)
    assert all(0 <= a <= 1 for a in levels), levels
    assert scheme.max_active_level == predicted_max_level(profile, S, d), (levels, case)
    assert not validate_scheme(scheme, profile), validate_scheme(scheme, profile)
    assert total_dof(scheme, profile).total == d
    return scheme


def _pick_facet(subsets: list[tuple[int, ...]]) -> tuple[int, ...]:
    return min(subsets, key=lambda s: (len(s), s))


def _synthesize(profile: CsitProfile, d: tuple[Fraction, ...], top_K: int) -> TimeSharingPlan:
    # each level of recursion removes one user, so depth = top_K - K
    K = profile.K
    assert 0 <= top_K - K < top_K
    if all(x == 0 for x in d):
        return TimeSharingPlan(((Fraction(1), RsScheme.silence(K)),), d)

    zeros = [j for j in range(K) if d[j] == 0]
    if zeros:
        j = zeros[0]
        reduced, index_map = reduce_profile(profile, j)
        sub = _synthesize(reduced, tuple(d[i] for i in index_map), top_K)
        components = tuple((w, s.lift(index_map, K)) for w, s in sub.components)
        for _, s in components:
            assert not s.active[j] and s.levels[j] == 0 and s.common_split[j] == 0
        return TimeSharingPlan(components, d)

    region = build_region(profile)
    boundary, lam = scale_to_boundary(region, d)
    subset = _pick_facet(active_constraints(region, boundary))
    scheme = synthesize_facet_point(profile, subset, boundary)
    if lam == 1:
        return TimeSharingPlan(((Fraction(1), scheme),), d)
    return TimeSharingPlan(((lam, scheme), (1 - lam, RsScheme.silence(K))), d)


def synthesize(profile: CsitProfile, d) -> TimeSharingPlan:
    """Time-sharing plan of RS schemes whose average DoF tuple is exactly ``d``.

    ``d`` is in canonical user order.
    """
    d = as_vector(d)
    if len(d) != profile.K:
        raise DimensionError(f"target has {len(d)} entries, profile has K={profile.K}")
    report = contains(build_region(profile), d)
    if not report:
        raise OutsideRegionError(f"{d} lies outside the DoF region", report.violated)
    plan = _synthesize(profile, d, profile.K)
    assert plan_dof(plan, profile) == d
    return plan


@dataclass(frozen=True)
class PointClass:
    kind: str  # "exterior" | "interior" | "boundary"
    subsets: tuple[tuple[int, ...], ...] = ()
    zero_coords: tuple[int, ...] = ()
    violated: tuple[tuple[int, ...], ...] = ()


def classify_point(profile: CsitProfile, d) -> PointClass:
    d = as_vector(d)
    region = build_region(profile)
    report = contains(region, d)
    if not report:
        return PointClass("exterior", violated=report.violated)
    subsets = tuple(active_constraints(region, d))
    zero_coords = tuple(j for j, x in enumerate(d) if x == 0)
    if subsets or zero_coords:
        return PointClass("boundary", subsets, zero_coords)
    return PointClass("interior")


def plan_to_user(plan: TimeSharingPlan, profile: CsitProfile) -> TimeSharingPlan:
    """Re-express a canonical-order plan in the profile's original user order."""
    inverse = [0] * profile.K
    for c, p in enumerate(profile.perm):
        inverse[p] = c
    return TimeSharingPlan(
        tuple((w, s.permuted(inverse)) for w, s in plan.components),
        profile.to_user(plan.achieved),
    )
