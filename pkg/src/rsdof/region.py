"""The DoF region of the K-user MISO broadcast channel with partial CSIT.

The region is the polyhedron

    d_i >= 0                                  for every user i
    sum_{i in S} d_i <= 1 + sum_{i in S, i != min S} alpha_i
                                              for every non-empty subset S

where users are indexed in non-increasing order of CSIT quality.  All
arithmetic in this module is exact (``fractions.Fraction``).  User indices are
0-based and refer to the *canonical* ordering held by :class:`CsitProfile`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Iterable, Sequence

from .errors import DimensionError, EmptyProfileError, OutsideRegionError
from .rational import as_rational, as_vector

__all__ = [
    "CsitProfile",
    "SubsetConstraint",
    "RegionDescription",
    "MembershipReport",
    "FacetDescription",
    "all_subsets",
    "subset_rhs",
    "build_region",
    "contains",
    "active_constraints",
    "scale_to_boundary",
    "facet_spec",
    "facet_contains",
    "facet_contains_direct",
    "reduce_profile",
]

Subset = tuple[int, ...]


@dataclass(frozen=True)
class CsitProfile:
    """CSIT quality exponents in canonical (non-increasing) order.

    ``perm[c]`` is the original user index of canonical user ``c``.  Build
    instances with :meth:`from_alphas` unless the exponents are already
    sorted.
    """

    alphas: tuple[Fraction, ...]
    perm: tuple[int, ...] = None

    def __post_init__(self):
        alphas = as_vector(self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if self.perm is None:
            object.__setattr__(self, "perm", tuple(range(len(alphas))))
        else:
            object.__setattr__(self, "perm", tuple(int(p) for p in self.perm))
        if not alphas:
            raise EmptyProfileError("a CSIT profile needs at least one user")
        for a in alphas:
            if not 0 <= a <= 1:
                raise ValueError(f"CSIT exponent {a} outside [0, 1]")
        if any(alphas[i] < alphas[i + 1] for i in range(len(alphas) - 1)):
            raise ValueError("alphas must be non-increasing; use CsitProfile.from_alphas")
        if sorted(self.perm) != list(range(len(alphas))):
            raise ValueError("perm is not a permutation of the users")

    @classmethod
    def from_alphas(cls, alphas: Iterable) -> "CsitProfile":
        """Canonicalize exponents given in arbitrary user order (stable sort)."""
        alphas = as_vector(alphas)
        if not alphas:
            raise EmptyProfileError("a CSIT profile needs at least one user")
        order = sorted(range(len(alphas)), key=lambda i: (-alphas[i], i))
        return cls(tuple(alphas[i] for i in order), tuple(order))

    @property
    def K(self) -> int:
        return len(self.alphas)

    @property
    def user_alphas(self) -> tuple[Fraction, ...]:
        return self.to_user(self.alphas)

    def to_canonical(self, values: Sequence):
        """Reorder a per-user vector from original user order to canonical order."""
        if len(values) != self.K:
            raise DimensionError(f"expected {self.K} entries, got {len(values)}")
        return tuple(values[p] for p in self.perm)

    def to_user(self, values: Sequence):
        if len(values) != self.K:
            raise DimensionError(f"expected {self.K} entries, got {len(values)}")
        out = [None] * self.K
        for c, p in enumerate(self.perm):
            out[p] = values[c]
        return tuple(out)


@dataclass(frozen=True)
class SubsetConstraint:
    subset: Subset
    rhs: Fraction

    def lhs(self, d: Sequence[Fraction]) -> Fraction:
        return sum((d[i] for i in self.subset), Fraction(0))


def all_subsets(K: int) -> list[Subset]:
    """Non-empty subsets of range(K), by size then lexicographically."""
    return [s for r in range(1, K + 1) for s in combinations(range(K), r)]


def subset_rhs(alphas: Sequence[Fraction], subset: Subset) -> Fraction:
    return 1 + sum((alphas[i] for i in subset[1:]), Fraction(0))


@dataclass(frozen=True)
class RegionDescription:
    profile: CsitProfile
    constraints: tuple[SubsetConstraint, ...]

    @property
    def K(self) -> int:
        return self.profile.K

    def rhs(self, subset: Subset) -> Fraction:
        return self._by_subset[tuple(subset)].rhs

    @property
    def _by_subset(self) -> dict:
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = {c.subset: c for c in self.constraints}
            object.__setattr__(self, "_cache", cache)
        return cache

    def subset_sums(self, d: Sequence[Fraction]) -> tuple[list[int], list[int]]:
        """Exact subset sums and right-hand sides over a common denominator.

        Returns ``(lhs, rhs)`` integer lists aligned with ``constraints``.
        """
        masks = self.__dict__.get("_masks")
        if masks is None:
            masks = [sum(1 << i for i in c.subset) for c in self.constraints]
            object.__setattr__(self, "_masks", masks)
            object.__setattr__(self, "_rhs_den", lcm(*(c.rhs.denominator for c in self.constraints)))
        D = lcm(self._rhs_den, *(x.denominator for x in d))
        ints = [x.numerator * (D // x.denominator) for x in d]
        sums = [0] * (1 << len(ints))
        for mask in range(1, len(sums)):
            low = mask & -mask
            sums[mask] = sums[mask ^ low] + ints[low.bit_length() - 1]
        rhs = [c.rhs.numerator * (D // c.rhs.denominator) for c in self.constraints]
        return [sums[m] for m in masks], rhs

    def hyperplanes(self) -> list[tuple[tuple[int, ...], Fraction, object]]:
        """All 2^K + K - 1 bounding hyperplanes as (coefficients, rhs, label).

        Labels are ``("zero", j)`` for ``d_j = 0`` and ``("sum", S)`` for the
        subset constraints.
        """
        K = self.K
        planes = []
        for j in range(K):
            coeffs = tuple(1 if i == j else 0 for i in range(K))
            planes.append((coeffs, Fraction(0), ("zero", j)))
        for c in self.constraints:
            coeffs = tuple(1 if i in c.subset else 0 for i in range(K))
            planes.append((coeffs, c.rhs, ("sum", c.subset)))
        return planes


@dataclass(frozen=True)
class MembershipReport:
    inside: bool
    violated: tuple[Subset, ...] = ()
    negative: tuple[int, ...] = ()

    def __bool__(self):
        return self.inside


def build_region(profile: CsitProfile) -> RegionDescription:
    if profile.K == 0:
        raise EmptyProfileError("empty profile")
    constraints = tuple(
        SubsetConstraint(s, subset_rhs(profile.alphas, s)) for s in all_subsets(profile.K)
    )
    return RegionDescription(profile, constraints)


def _check_dim(region: RegionDescription, d) -> tuple[Fraction, ...]:
    d = as_vector(d)
    if len(d) != region.K:
        raise DimensionError(f"tuple has {len(d)} entries, region has K={region.K}")
    return d


def contains(region: RegionDescription, d) -> MembershipReport:
    d = _check_dim(region, d)
    negative = tuple(i for i, x in enumerate(d) if x < 0)
    lhs, rhs = region.subset_sums(d)
    violated = tuple(
        c.subset for c, l, r in zip(region.constraints, lhs, rhs) if l > r
    )
    return MembershipReport(not negative and not violated, violated, negative)


def active_constraints(region: RegionDescription, d) -> list[Subset]:
    """Subsets whose sum constraint holds with equality at ``d``."""
    d = _check_dim(region, d)
    report = contains(region, d)
    if not report:
        raise OutsideRegionError(f"{d} lies outside the region", report.violated)
    lhs, rhs = region.subset_sums(d)
    return [c.subset for c, l, r in zip(region.constraints, lhs, rhs) if l == r]


def scale_to_boundary(region: RegionDescription, d) -> tuple[tuple[Fraction, ...], Fraction]:
    """Push a strictly positive tuple radially onto the region boundary.

    Returns ``(boundary, lam)`` with ``d == lam * boundary`` and ``0 < lam <= 1``.
    """
    d = _check_dim(region, d)
    if all(x == 0 for x in d):
        raise ValueError("the zero tuple has no radial boundary point")
    if any(x <= 0 for x in d):
        raise ValueError("scale_to_boundary needs strictly positive coordinates")
    report = contains(region, d)
    if not report:
        raise OutsideRegionError(f"{d} lies outside the region", report.violated)
    lam = max(c.lhs(d) / c.rhs for c in region.constraints)
    boundary = tuple(x / lam for x in d)
    return boundary, lam


@dataclass(frozen=True)
class FacetDescription:
    """Per-user bound form of the facet on the hyperplane of subset ``subset``.

    ``ahead``, ``between`` and ``behind`` split the users outside the subset
    into those with index below ``lead``, strictly between ``lead`` and
    ``second``, and above ``second`` (above ``lead`` when the subset is a
    singleton, in which case ``between`` is empty).
    """

    profile: CsitProfile
    subset: Subset
    rhs: Fraction
    lower: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)
    capped_by_lead: frozenset = frozenset()
    ahead: Subset = ()
    between: Subset = ()
    behind: Subset = ()

    @property
    def lead(self) -> int:
        return self.subset[0]

    @property
    def second(self):
        return self.subset[1] if len(self.subset) > 1 else None

    @property
    def K(self) -> int:
        return self.profile.K


def facet_spec(profile: CsitProfile, subset: Iterable[int]) -> FacetDescription:
    S = tuple(sorted(set(subset)))
    if not S:
        raise ValueError("facet subset must be non-empty")
    K = profile.K
    if S[0] < 0 or S[-1] >= K:
        raise DimensionError(f"subset {S} has indices outside range({K})")
    alphas = profile.alphas
    lead = S[0]
    rhs = subset_rhs(alphas, S)
    outside = [j for j in range(K) if j not in S]
    lower, upper = {}, {}
    if len(S) == 1:
        ahead = tuple(j for j in outside if j < lead)
        behind = tuple(j for j in outside if j > lead)
        lower[lead] = Fraction(1)
        upper[lead] = Fraction(1)
        for j in ahead:
            upper[j] = alphas[lead]
        for j in behind:
            upper[j] = alphas[j]
        return FacetDescription(profile, S, rhs, lower, upper, frozenset(), ahead, (), behind)

    second = S[1]
    ahead = tuple(j for j in outside if j < lead)
    between = tuple(j for j in outside if lead < j < second)
    behind = tuple(j for j in outside if j > second)
    lower[lead] = alphas[second]
    for j in S[1:]:
        lower[j] = alphas[j]
    for j in ahead:
        upper[j] = alphas[lead]
    for j in between + behind:
        upper[j] = alphas[j]
    capped = frozenset(ahead + between)
    return FacetDescription(profile, S, rhs, lower, upper, capped, ahead, between, behind)


def facet_contains(spec: FacetDescription, d) -> bool:
    d = as_vector(d)
    if len(d) != spec.K:
        raise DimensionError(f"tuple has {len(d)} entries, facet has K={spec.K}")
    if any(x < 0 for x in d):
        return False
    if sum((d[i] for i in spec.subset), Fraction(0)) != spec.rhs:
        return False
    for j, lo in spec.lower.items():
        if d[j] < lo:
            return False
    for j, hi in spec.upper.items():
        if d[j] > hi:
            return False
    lead_value = d[spec.lead]
    return all(d[j] <= lead_value for j in spec.capped_by_lead)


def facet_contains_direct(region: RegionDescription, subset: Iterable[int], d) -> bool:
    """Facet membership straight from the region inequalities.

    ``d`` must be non-negative, satisfy the subset equality, and satisfy every
    other subset inequality.  Independent of :func:`facet_spec`.
    """
    d = _check_dim(region, d)
    S = tuple(sorted(set(subset)))
    if any(x < 0 for x in d):
        return False
    lhs, rhs = region.subset_sums(d)
    for c, l, r in zip(region.constraints, lhs, rhs):
        if c.subset == S:
            if l != r:
                return False
        elif l > r:
            return False
    return True


def reduce_profile(profile: CsitProfile, excluded: int) -> tuple[CsitProfile, tuple[int, ...]]:
    """Drop canonical user ``excluded``.

    Returns the (K-1)-user profile and ``index_map`` with ``index_map[r]`` the
    parent canonical index of reduced user ``r``.
    """
    K = profile.K
    if K < 2:
        raise ValueError("cannot remove a user from a single-user profile")
    if not 0 <= excluded < K:
        raise DimensionError(f"user {excluded} not in range({K})")
    index_map = tuple(i for i in range(K) if i != excluded)
    reduced = CsitProfile(tuple(profile.alphas[i] for i in index_map))
    return reduced, index_map
