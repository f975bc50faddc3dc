"""Gaussian approximation of state influences with rigorous error bounds.

The signed weight sum of the other states is approximately normal with mean
zero and variance sum of their squared weights.  This module evaluates the
resulting integral and density approximations of the pivot probability, the
inflection-point quota they suggest, and Berry-Esseen certificates that turn
the approximation into a rigorous (if wide) interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .union import QuotaSpec, Union, WeightVector, jagcom_quota

__all__ = [
    "ApproxCertificate",
    "normal_cdf",
    "gaussian_beta",
    "jagcom_beta_approx",
    "berry_esseen_bound",
    "certificate",
    "inflection_quota",
    "total_influence_bounds",
    "BERRY_ESSEEN_2C",
]

# Twice the proven universal Berry-Esseen constant (C <= 0.56 for general
# independent summands); conservative by design.
BERRY_ESSEEN_2C = 1.12

_SQRT2 = math.sqrt(2.0)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ApproxCertificate:
    """Gaussian estimate of one state influence with a rigorous error bar.

    The interval [interval_lo, interval_hi] = gauss_integral ± be_bound
    always contains the exact pivot probability; it is deliberately not
    clipped to [0,1], so the lower end may be negative.
    """

    j: int
    gauss_integral: float
    jagcom_density_approx: float
    be_bound: float
    interval_lo: float
    interval_hi: float
    sigma_j: float

    def __post_init__(self):
        if self.be_bound < 0:
            raise ValueError("error bound must be nonnegative")
        if not self.sigma_j > 0:
            raise ValueError("sigma must be positive")
        if not self.jagcom_density_approx > 0:
            raise ValueError("density approximation must be positive")


def normal_cdf(z: float) -> float:
    """Standard normal distribution function, via the complementary error
    function; absolute error well below 1e-9 over |z| <= 8."""
    return 0.5 * math.erfc(-z / _SQRT2)


def _normal_pdf(z: float, sigma: float) -> float:
    return math.exp(-0.5 * (z / sigma) ** 2) / (sigma * _SQRT_TWO_PI)


def _sigma(w: WeightVector, j: int) -> float:
    if not 0 <= j < len(w):
        raise ValueError(f"state index {j} out of range for {len(w)} states")
    if len(w) == 1:
        raise ValueError("Gaussian approximation needs at least 2 states")
    return math.sqrt(math.fsum(x * x for k, x in enumerate(w.weights) if k != j))


def gaussian_beta(w: WeightVector, q: QuotaSpec, j: int) -> float:
    """Normal-integral approximation of the pivot probability of state j:
    the N(0, sigma_j^2) mass of the window (qW - w_j, qW + w_j]."""
    sigma = _sigma(w, j)
    threshold = q.q * w.total
    wj = w.weights[j]
    return normal_cdf((threshold + wj) / sigma) - normal_cdf((threshold - wj) / sigma)


def jagcom_beta_approx(w: WeightVector, q: QuotaSpec, j: int) -> float:
    """Density (linearised) approximation of the pivot probability:
    2 w_j times the N(0, sigma_j^2) density at qW."""
    sigma = _sigma(w, j)
    return 2.0 * w.weights[j] * _normal_pdf(q.q * w.total, sigma)


def berry_esseen_bound(w: WeightVector, j: int) -> float:
    """Rigorous bound on |exact beta_j - gaussian_beta|: twice the
    Berry-Esseen distance of the other states' signed weight sum from
    normal, using the conservative constant 2C = 1.12.  Third absolute
    moments of the ±w_k summands are w_k^3."""
    sigma = _sigma(w, j)
    third = math.fsum(x**3 for k, x in enumerate(w.weights) if k != j)
    return BERRY_ESSEEN_2C * third / sigma**3


def certificate(w: WeightVector, q: QuotaSpec, j: int) -> ApproxCertificate:
    """Assemble the Gaussian estimates and the rigorous interval for state j."""
    gauss = gaussian_beta(w, q, j)
    bound = berry_esseen_bound(w, j)
    return ApproxCertificate(
        j=j,
        gauss_integral=gauss,
        jagcom_density_approx=jagcom_beta_approx(w, q, j),
        be_bound=bound,
        interval_lo=gauss - bound,
        interval_hi=gauss + bound,
        sigma_j=_sigma(w, j),
    )


def inflection_quota(w: WeightVector) -> QuotaSpec:
    """Quota placing the pass threshold at the inflection point of the
    approximating normal density: q = sqrt(sum w_k^2) / W.  For square-root
    weights this coincides with the population-based quota formula."""
    return QuotaSpec(
        math.sqrt(math.fsum(x * x for x in w.weights)) / w.total,
        "jagcom-star",
    )


def total_influence_bounds(u: Union, q: QuotaSpec) -> tuple[float, float]:
    """Heuristic j-independent bracket for the total voter influences under
    square-root weights, divided by the shared fair-voting constant.

    With Delta = sqrt(total population) and delta the largest population
    share, the inflection quota gives
    (2/Delta) exp(-1/(2(1-delta))) ... (2/(Delta sqrt(1-delta))) exp(-1/2),
    and q = 0 the same bracket with the exponential factors removed.
    Derived from the unquantified normal approximation, so the bracket is
    heuristic and only those two quotas are supported.
    """
    populations = u.populations
    total = sum(populations)
    delta = max(populations) / total
    big_delta = math.sqrt(total)
    if q.q == 0.0:
        return 2.0 / big_delta, 2.0 / (big_delta * math.sqrt(1.0 - delta))
    star = jagcom_quota(u).q
    if q.provenance == "jagcom-star" or math.isclose(
        q.q, star, rel_tol=0.0, abs_tol=1e-12
    ):
        lower = (2.0 / big_delta) * math.exp(-0.5 / (1.0 - delta))
        upper = (2.0 / (big_delta * math.sqrt(1.0 - delta))) * math.exp(-0.5)
        return lower, upper
    raise ValueError(
        "total-influence bracket is defined for q = 0 and the inflection "
        f"quota only (got q={q.q})"
    )
