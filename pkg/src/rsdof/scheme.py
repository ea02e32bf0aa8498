"""Rate-Splitting schemes evaluated at the DoF level.

A scheme fixes, for each user, a private power-level exponent ``a_j`` (the
private symbol is sent at power of order ``P**a_j``), whether the user carries
a private symbol at all, and how the DoF of the common symbol is divided among
users.  Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InvalidSchemeError
from .rational import as_rational, as_vector
from .region import CsitProfile

__all__ = [
    "RsScheme",
    "RsDofOutcome",
    "common_dof",
    "private_dof",
    "total_dof",
    "sum_dof_scheme",
    "validate_scheme",
]

ZERO = Fraction(0)


@dataclass(frozen=True)
class RsScheme:
    levels: tuple[Fraction, ...]
    active: tuple[bool, ...]
    common_split: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", as_vector(self.levels))
        object.__setattr__(self, "active", tuple(bool(x) for x in self.active))
        object.__setattr__(self, "common_split", as_vector(self.common_split))
        if not (len(self.levels) == len(self.active) == len(self.common_split)):
            raise DimensionError("levels, active and common_split differ in length")

    @classmethod
    def all_active(cls, levels, common_split) -> "RsScheme":
        return cls(levels, (True,) * len(levels), common_split)

    @classmethod
    def silence(cls, K: int) -> "RsScheme":
        """The idle sentinel used as the zero-DoF component of time-sharing plans."""
        return cls((ZERO,) * K, (False,) * K, (ZERO,) * K)

    @property
    def K(self) -> int:
        return len(self.levels)

    @property
    def is_silence(self) -> bool:
        return not any(self.active) and all(s == 0 for s in self.common_split)

    @property
    def max_active_level(self) -> Fraction:
        return max((a for a, on in zip(self.levels, self.active) if on), default=ZERO)

    def lift(self, index_map: Sequence[int], K: int) -> "RsScheme":
        """Embed a scheme over a user subset into K users; others are idle."""
        levels, active, split = [ZERO] * K, [False] * K, [ZERO] * K
        for r, parent in enumerate(index_map):
            levels[parent] = self.levels[r]
            active[parent] = self.active[r]
            split[parent] = self.common_split[r]
        return RsScheme(tuple(levels), tuple(active), tuple(split))

    def permuted(self, order: Sequence[int]) -> "RsScheme":
        """Entry ``i`` of the result is entry ``order[i]`` of this scheme."""
        return RsScheme(
            tuple(self.levels[o] for o in order),
            tuple(self.active[o] for o in order),
            tuple(self.common_split[o] for o in order),
        )


@dataclass(frozen=True)
class RsDofOutcome:
    private: tuple[Fraction, ...]
    common_total: Fraction
    total: tuple[Fraction, ...]


def common_dof(scheme: RsScheme) -> Fraction:
    """DoF the common symbol can carry while staying decodable by everyone.

    With no active private stream the common symbol gets the full DoF.
    """
    return 1 - scheme.max_active_level


def private_dof(scheme: RsScheme, profile: CsitProfile) -> tuple[Fraction, ...]:
    if scheme.K != profile.K:
        raise DimensionError(f"scheme has K={scheme.K}, profile has K={profile.K}")
    alphas = profile.alphas
    levels, active = scheme.levels, scheme.active
    out = []
    for j in range(scheme.K):
        if not active[j]:
            out.append(ZERO)
            continue
        others = max((levels[i] for i in range(scheme.K) if i != j and active[i]), default=ZERO)
        leak = max(others - alphas[j], ZERO)
        out.append(max(levels[j] - leak, ZERO))
    return tuple(out)


def total_dof(scheme: RsScheme, profile: CsitProfile) -> RsDofOutcome:
    if scheme.is_silence:
        zeros = (ZERO,) * scheme.K
        return RsDofOutcome(zeros, ZERO, zeros)
    dc = common_dof(scheme)
    if sum(scheme.common_split, ZERO) != dc:
        raise InvalidSchemeError(
            f"common split sums to {sum(scheme.common_split, ZERO)}, common DoF is {dc}"
        )
    priv = private_dof(scheme, profile)
    total = tuple(p + c for p, c in zip(priv, scheme.common_split))
    return RsDofOutcome(priv, dc, total)


def sum_dof_scheme(profile: CsitProfile, b, split: Sequence | None = None) -> RsScheme:
    """Equal power levels ``b`` for all users, which attains the sum-DoF bound.

    ``b`` must lie in ``[alpha_2, alpha_1]`` (``[alpha_1, alpha_1]`` when K=1).
    ``split`` defaults to an even division of the common DoF ``1 - b``.
    """
    b = as_rational(b)
    alphas = profile.alphas
    low = alphas[1] if profile.K > 1 else alphas[0]
    if not low <= b <= alphas[0]:
        raise ValueError(f"b={b} outside [{low}, {alphas[0]}]")
    dc = 1 - b
    if split is None:
        split = (dc / profile.K,) * profile.K
    else:
        split = as_vector(split)
        if len(split) != profile.K:
            raise DimensionError("split length differs from K")
        if sum(split, ZERO) != dc:
            raise InvalidSchemeError(f"split must sum to 1 - b = {dc}")
    return RsScheme.all_active((b,) * profile.K, split)


def validate_scheme(scheme: RsScheme, profile: CsitProfile | None = None) -> list[str]:
    """Return a list of human-readable violations; empty means valid."""
    problems = []
    if profile is not None and scheme.K != profile.K:
        problems.append(f"dimension mismatch: scheme K={scheme.K}, profile K={profile.K}")
    if scheme.is_silence:
        return problems
    for j, (a, on) in enumerate(zip(scheme.levels, scheme.active)):
        if on and not 0 <= a <= 1:
            problems.append(f"user {j}: level {a} out of [0,1]")
    for j, s in enumerate(scheme.common_split):
        if s < 0:
            problems.append(f"user {j}: negative common split {s}")
    dc = common_dof(scheme)
    total = sum(scheme.common_split, ZERO)
    if total != dc:
        problems.append(f"split sum {total} != common DoF {dc}")
    return problems
