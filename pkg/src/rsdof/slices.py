"""Two-dimensional cross-sections of the DoF region, for plotting."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

from .linalg import solve
from .region import CsitProfile, build_region

__all__ = ["slice_polygon", "densify"]


def slice_polygon(profile: CsitProfile, fixed: dict[int, Fraction]) -> tuple[tuple[int, int], list]:
    """Corners of the region cut at ``d_u = fixed[u]`` (original 0-based users).

    Exactly two users must remain free.  Returns ``((u, v), corners)`` where
    ``corners`` is a counter-clockwise list of exact ``(d_u, d_v)`` pairs; it
    is empty when the slice misses the region.
    """
    K = profile.K
    free = [u for u in range(K) if u not in fixed]
    if len(free) != 2:
        raise ValueError(f"a slice needs exactly two free users, got {len(free)}")
    if any(Fraction(x) < 0 for x in fixed.values()):
        return tuple(free), []
    region = build_region(profile)
    halfplanes = [((-1, 0), Fraction(0)), ((0, -1), Fraction(0))]
    for c in region.constraints:
        users = {profile.perm[i] for i in c.subset}
        coeffs = tuple(1 if u in users else 0 for u in free)
        rhs = c.rhs - sum((Fraction(fixed[u]) for u in users if u in fixed), Fraction(0))
        if coeffs == (0, 0):
            if rhs < 0:
                return tuple(free), []
            continue
        halfplanes.append((coeffs, rhs))
    corners = set()
    for (a1, b1), (a2, b2) in combinations(halfplanes, 2):
        x = solve([a1, a2], [b1, b2])
        if x is None:
            continue
        if all(a[0] * x[0] + a[1] * x[1] <= b for a, b in halfplanes):
            corners.add(x)
    if not corners:
        return tuple(free), []
    cx = sum(float(p[0]) for p in corners) / len(corners)
    cy = sum(float(p[1]) for p in corners) / len(corners)
    ordered = sorted(corners, key=lambda p: (math.atan2(float(p[1]) - cy, float(p[0]) - cx), p))
    return tuple(free), ordered


def densify(corners: list, resolution: int = 1) -> list:
    """Closed polyline through ``corners`` with ``resolution`` segments per edge."""
    if not corners:
        return []
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    pts = []
    n = len(corners)
    for k in range(n):
        (x0, y0), (x1, y1) = corners[k], corners[(k + 1) % n]
        for s in range(resolution):
            t = Fraction(s, resolution)
            pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    pts.append(corners[0])
    return pts
