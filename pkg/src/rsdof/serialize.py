"""JSON-friendly encodings of regions, facets, schemes, plans and vertex reports.

Rationals are always written as exact ``"p/q"`` strings.  Users are labelled
1-based in the *original* (input) order; subsets are sorted lists of labels.
"""

from __future__ import annotations

from fractions import Fraction

from .oracle import VertexReport
from .rational import fmt
from .region import (
    CsitProfile,
    FacetDescription,
    RegionDescription,
    build_region,
    facet_spec,
)
from .scheme import RsScheme
from .synthesizer import TimeSharingPlan, plan_to_user

__all__ = [
    "user_subset",
    "region_to_dict",
    "region_from_dict",
    "facet_to_dict",
    "facet_from_dict",
    "scheme_to_dict",
    "scheme_from_dict",
    "plan_to_dict",
    "plan_from_dict",
    "vertex_report_to_dict",
]


def _q(values):
    return [fmt(v) for v in values]


def user_subset(profile: CsitProfile, subset) -> list[int]:
    """Canonical 0-based subset -> sorted 1-based original user labels."""
    return sorted(profile.perm[i] + 1 for i in subset)


def _canonical_subset(profile: CsitProfile, labels) -> tuple[int, ...]:
    inverse = {p: c for c, p in enumerate(profile.perm)}
    return tuple(sorted(inverse[int(u) - 1] for u in labels))


def region_to_dict(region: RegionDescription) -> dict:
    profile = region.profile
    return {
        "K": profile.K,
        "alphas": _q(profile.user_alphas),
        "canonical_order": [p + 1 for p in profile.perm],
        "constraints": [
            {"subset": user_subset(profile, c.subset), "rhs": fmt(c.rhs)}
            for c in region.constraints
        ],
        "nonnegativity": list(range(1, profile.K + 1)),
    }


def region_from_dict(data: dict) -> RegionDescription:
    profile = CsitProfile.from_alphas(Fraction(a) for a in data["alphas"])
    region = build_region(profile)
    given = {
        _canonical_subset(profile, c["subset"]): Fraction(c["rhs"]) for c in data["constraints"]
    }
    expected = {c.subset: c.rhs for c in region.constraints}
    if given != expected:
        raise ValueError("serialized constraints do not match the region of the given alphas")
    return region


def facet_to_dict(spec: FacetDescription) -> dict:
    profile = spec.profile
    label = lambda j: profile.perm[j] + 1
    return {
        "alphas": _q(profile.user_alphas),
        "subset": user_subset(profile, spec.subset),
        "rhs": fmt(spec.rhs),
        "lower": {str(label(j)): fmt(v) for j, v in sorted(spec.lower.items())},
        "upper": {str(label(j)): fmt(v) for j, v in sorted(spec.upper.items())},
        "capped_by_lead": sorted(label(j) for j in spec.capped_by_lead),
        "lead": label(spec.lead),
    }


def facet_from_dict(data: dict) -> FacetDescription:
    profile = CsitProfile.from_alphas(Fraction(a) for a in data["alphas"])
    spec = facet_spec(profile, _canonical_subset(profile, data["subset"]))
    if facet_to_dict(spec) != data:
        raise ValueError("serialized facet does not match the facet of the given alphas")
    return spec


def scheme_to_dict(scheme: RsScheme) -> dict:
    return {
        "levels": _q(scheme.levels),
        "active": list(scheme.active),
        "common_split": _q(scheme.common_split),
    }


def scheme_from_dict(data: dict) -> RsScheme:
    return RsScheme(
        tuple(Fraction(x) for x in data["levels"]),
        tuple(bool(x) for x in data["active"]),
        tuple(Fraction(x) for x in data["common_split"]),
    )


def plan_to_dict(plan: TimeSharingPlan) -> dict:
    return {
        "achieved": _q(plan.achieved),
        "components": [
            {"weight": fmt(w), "silence": s.is_silence, "scheme": scheme_to_dict(s)}
            for w, s in plan.components
        ],
    }


def plan_from_dict(data: dict) -> TimeSharingPlan:
    components = tuple(
        (Fraction(c["weight"]), scheme_from_dict(c["scheme"])) for c in data["components"]
    )
    return TimeSharingPlan(components, tuple(Fraction(x) for x in data["achieved"]))


def vertex_report_to_dict(report: VertexReport) -> dict:
    profile = report.profile
    rows = []
    for rec in report.vertices:
        active = []
        for kind, arg in rec.active:
            if kind == "zero":
                active.append({"zero": profile.perm[arg] + 1})
            else:
                active.append({"sum": user_subset(profile, arg)})
        row = {
            "point": _q(profile.to_user(rec.point)),
            "active": active,
            "synthesized": rec.synthesized,
        }
        if rec.plan is not None:
            row["plan"] = plan_to_dict(plan_to_user(rec.plan, profile))
        rows.append(row)
    rows.sort(key=lambda r: [Fraction(x) for x in r["point"]])
    return {
        "alphas": _q(profile.user_alphas),
        "systems_checked": report.systems_checked,
        "vertex_count": len(rows),
        "vertices": rows,
        "failures": [
            {"point": _q(profile.to_user(p)), "reason": reason} for p, reason in report.failures
        ],
    }
