"""DoF region of the K-user MISO broadcast channel with partial CSIT.

Exact region construction, Rate-Splitting scheme synthesis for every point of
the region, brute-force verification and finite-SNR Monte Carlo checks.
"""

from .errors import (
    DimensionError,
    EmptyProfileError,
    GuardExceededError,
    InvalidSchemeError,
    OutsideRegionError,
    RsdofError,
    SimulationError,
)
from .region import (
    CsitProfile,
    RegionDescription,
    active_constraints,
    build_region,
    contains,
    facet_contains,
    facet_spec,
    reduce_profile,
    scale_to_boundary,
)
from .scheme import RsScheme, common_dof, private_dof, sum_dof_scheme, total_dof, validate_scheme
from .synthesizer import (
    TimeSharingPlan,
    classify_point,
    plan_dof,
    plan_to_user,
    synthesize,
    synthesize_facet_point,
)

__version__ = "0.1.0"
