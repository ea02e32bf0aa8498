"""Brute-force cross-checks of the region and of the synthesizer.

Vertex enumeration intersects every K-subset of the 2^K + K - 1 bounding
hyperplanes, which is only practical for small K.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import GuardExceededError
from .linalg import solve
from .region import CsitProfile, build_region, contains
from .scheme import RsScheme, common_dof, total_dof
from .synthesizer import TimeSharingPlan, plan_dof, synthesize

__all__ = [
    "VertexRecord",
    "VertexReport",
    "AuditReport",
    "DEFAULT_MAX_K",
    "enumerate_vertices",
    "verify_vertices",
    "random_scheme",
    "random_membership_audit",
]

DEFAULT_MAX_K = 4


@dataclass(frozen=True)
class VertexRecord:
    point: tuple[Fraction, ...]
    active: tuple  # labels of every hyperplane tight at the point
    plan: TimeSharingPlan | None = None
    achieved: tuple[Fraction, ...] | None = None

    @property
    def synthesized(self) -> bool:
        return self.achieved is not None and self.achieved == self.point


@dataclass
class VertexReport:
    profile: CsitProfile
    vertices: list[VertexRecord]
    systems_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def enumerate_vertices(profile: CsitProfile, max_K: int = DEFAULT_MAX_K) -> VertexReport:
    K = profile.K
    if K > max_K:
        n = 2**K + K - 1
        raise GuardExceededError(
            f"K={K} exceeds the vertex-enumeration guard {max_K}: "
            f"{comb(n, K)} linear systems would be solved"
        )
    region = build_region(profile)
    planes = region.hyperplanes()
    found = set()
    checked = 0
    for combo in combinations(range(len(planes)), K):
        checked += 1
        x = solve([planes[i][0] for i in combo], [planes[i][1] for i in combo])
        if x is None or x in found:
            continue
        if contains(region, x):
            found.add(x)
    records = []
    for v in sorted(found):
        tight = tuple(
            label
            for coeffs, rhs, label in planes
            if sum((c * xi for c, xi in zip(coeffs, v)), Fraction(0)) == rhs
        )
        records.append(VertexRecord(v, tight))
    return VertexReport(profile, records, checked)


def verify_vertices(profile: CsitProfile, max_K: int = DEFAULT_MAX_K) -> VertexReport:
    """Synthesize every vertex and compare the achieved tuple exactly."""
    report = enumerate_vertices(profile, max_K)
    records, failures = [], []
    for rec in report.vertices:
        try:
            plan = synthesize(profile, rec.point)
            achieved = plan_dof(plan, profile)
        except Exception as exc:  # reported, not raised
            failures.append((rec.point, repr(exc)))
            records.append(rec)
            continue
        rec = replace(rec, plan=plan, achieved=achieved)
        if not rec.synthesized:
            failures.append((rec.point, f"achieved {achieved}"))
        records.append(rec)
    return VertexReport(profile, records, report.systems_checked, failures)


def _random_split(total: Fraction, K: int, rng: random.Random, grid: int) -> tuple[Fraction, ...]:
    weights = [rng.randint(0, grid) for _ in range(K)]
    if sum(weights) == 0:
        weights[rng.randrange(K)] = 1
    s = sum(weights)
    return tuple(total * w / s for w in weights)


def random_scheme(K: int, rng: random.Random, grid: int = 20) -> RsScheme:
    """Random admissible scheme: levels on a 1/grid lattice, random mask and split."""
    levels = tuple(Fraction(rng.randint(0, grid), grid) for _ in range(K))
    active = tuple(rng.random() < 0.8 for _ in range(K))
    levels = tuple(a if on else Fraction(0) for a, on in zip(levels, active))
    probe = RsScheme(levels, active, (Fraction(0),) * K)
    split = _random_split(common_dof(probe), K, rng, grid)
    return RsScheme(levels, active, split)


@dataclass
class AuditReport:
    trials: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def random_membership_audit(profile: CsitProfile, trials: int, seed: int = 0,
                            grid: int = 20) -> AuditReport:
    """Every random RS scheme must land inside the region."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    region = build_region(profile)
    report = AuditReport(trials)
    for _ in range(trials):
        scheme = random_scheme(profile.K, rng, grid)
        d = total_dof(scheme, profile).total
        membership = contains(region, d)
        if not membership:
            report.violations.append((scheme, d, membership.violated))
    return report
