"""Voting power in two-tier voting systems.

Citizens vote within states; state delegates cast weighted votes in a
council.  This package computes voter influences for several within-state
vote models, exact state influences in the council by coalition
enumeration, the squared-deviation quota analysis (including the
inflection-point quota), and Gaussian approximations with rigorous
Berry-Esseen error certificates.
"""

from .council import (
    KERNEL,
    CouncilAnalysis,
    SweepPoint,
    SweepResult,
    analyze,
    passes,
    quota_sweep,
    state_influence_exact,
    state_influences,
)
from .errors import DatasetError, SizeLimitError
from .gaussian import (
    BERRY_ESSEEN_2C,
    ApproxCertificate,
    berry_esseen_bound,
    certificate,
    gaussian_beta,
    inflection_quota,
    jagcom_beta_approx,
    normal_cdf,
    total_influence_bounds,
)
from .models import (
    CircularMajority,
    CollectiveBias,
    DiscreteAtoms,
    IndependentFair,
    InfluenceReport,
    MixingLaw,
    PointMass,
    TwoAtoms,
    UniformOn01,
    VoteModel,
    absolute_influence,
    asymptotic_fair_influence,
    brute_force_report,
    circular_joint_distribution,
    circular_pair_correlation,
    conditional_influence,
    influence_report,
    least_squares_objective,
    least_squares_weight,
    margin_distribution,
    mean_abs_margin,
    success_probability,
)
from .union import (
    QuotaSpec,
    StateRecord,
    Union,
    WeightVector,
    eu27_path,
    jagcom_quota,
    load_eu27,
    load_union,
    normalize,
    sqrt_weights,
)

__version__ = "0.1.0"
