"""Within-state vote models and the influence calculus.

Three families of probabilistic voting models over ±1 votes are provided:
independent fair coins, conditionally-i.i.d. votes driven by a shared random
bias, and a circular model where each vote is the local majority of three
fair coins on a cycle.  For each model the module computes, with respect to
the strict-majority decision event:

* absolute influence -- the probability that a single voter's switch from
  -1 to +1 flips the outcome (the Banzhaf/Penrose power);
* conditional influence -- the gap between the pass probabilities
  conditioned on that voter's two possible votes;
* success probability -- the probability of voting on the winning side;
* the mean absolute majority margin E|S|, which is also the least-squares
  optimal council weight for the state.

Every closed form has an exhaustive-enumeration oracle
(:func:`brute_force_report`) computed only from the explicit joint
distribution, used by the test suite to validate the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import SizeLimitError

__all__ = [
    "MixingLaw",
    "PointMass",
    "UniformOn01",
    "TwoAtoms",
    "DiscreteAtoms",
    "VoteModel",
    "IndependentFair",
    "CollectiveBias",
    "CircularMajority",
    "InfluenceReport",
    "absolute_influence",
    "conditional_influence",
    "success_probability",
    "mean_abs_margin",
    "margin_distribution",
    "least_squares_weight",
    "least_squares_objective",
    "circular_pair_correlation",
    "circular_joint_distribution",
    "brute_force_report",
    "influence_report",
    "asymptotic_fair_influence",
]

# Exhaustive enumeration caps: 2^25 configurations for the oracle, 2^24 coin
# vectors for the circular model.  Desk-scale verification only.
ENUMERATION_CAP = 25
CIRCULAR_CAP = 24

_SYMMETRY_TOL = 1e-12
_CHUNK = 1 << 20


# ---------------------------------------------------------------------------
# Mixing laws for the shared random bias


class MixingLaw:
    """Distribution of the shared bias U on (0,1); must be symmetric under
    u -> 1-u so the resulting vote vector is symmetric."""

    def atom_list(self) -> tuple[tuple[float, float], ...] | None:
        """Finite support as ((value, probability), ...), or None if the
        law is continuous uniform on (0,1)."""
        raise NotImplementedError


def _check_unit_interval(u: float) -> None:
    if not (0.0 < u < 1.0):
        raise ValueError(f"bias atom {u!r} must lie strictly inside (0,1)")


def _check_symmetric_atoms(atoms: Sequence[tuple[float, float]]) -> None:
    for u, p in atoms:
        partner = math.fsum(q for v, q in atoms if abs(v - (1.0 - u)) <= _SYMMETRY_TOL)
        if abs(partner - p) > _SYMMETRY_TOL:
            raise ValueError(
                "mixing law is not symmetric under u -> 1-u "
                f"(mass {p} at {u} vs {partner} at {1.0 - u})"
            )


@dataclass(frozen=True)
class PointMass(MixingLaw):
    """Degenerate bias P(U = u0) = 1.  Only u0 = 1/2 is symmetric."""

    u0: float

    def __post_init__(self):
        _check_unit_interval(self.u0)
        _check_symmetric_atoms(((self.u0, 1.0),))

    def atom_list(self):
        return ((self.u0, 1.0),)


@dataclass(frozen=True)
class UniformOn01(MixingLaw):
    """U uniform on (0,1)."""

    def atom_list(self):
        return None


@dataclass(frozen=True)
class TwoAtoms(MixingLaw):
    """P(U = a) = P(U = b) = 1/2; requires b = 1-a (polarised bias)."""

    a: float
    b: float

    def __post_init__(self):
        _check_unit_interval(self.a)
        _check_unit_interval(self.b)
        _check_symmetric_atoms(self.atom_list())

    def atom_list(self):
        return ((self.a, 0.5), (self.b, 0.5))


@dataclass(frozen=True)
class DiscreteAtoms(MixingLaw):
    """Arbitrary finite symmetric bias law given as (value, probability) pairs."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("need at least one atom")
        for u, p in self.atoms:
            _check_unit_interval(u)
            if not p > 0:
                raise ValueError("atom probabilities must be positive")
        if abs(math.fsum(p for _, p in self.atoms) - 1.0) > _SYMMETRY_TOL:
            raise ValueError("atom probabilities must sum to 1")
        _check_symmetric_atoms(self.atoms)

    def atom_list(self):
        return self.atoms


# ---------------------------------------------------------------------------
# Vote models


class VoteModel:
    """A probabilistic model for the vector of ±1 votes within one state."""


@dataclass(frozen=True)
class IndependentFair(VoteModel):
    """Votes are i.i.d. uniform on {-1,+1}."""


@dataclass(frozen=True)
class CollectiveBias(VoteModel):
    """Conditionally i.i.d. votes: given U = u each voter is +1 with
    probability u, independently."""

    mixing: MixingLaw

    def __post_init__(self):
        if not isinstance(self.mixing, MixingLaw):
            raise TypeError("mixing must be a MixingLaw")


@dataclass(frozen=True)
class CircularMajority(VoteModel):
    """Voters sit on a cycle; vote i is the majority of three adjacent fair
    coins Z_{i-1}, Z_i, Z_{i+1}.  Symmetric but not exchangeable."""


@dataclass(frozen=True)
class InfluenceReport:
    """Per-voter influence summary for one model and electorate size."""

    m: int
    alpha: float
    kappa: float
    eta: float
    mean_abs_margin: float
    mean_edge: float

    def __post_init__(self):
        tol = 1e-9
        if not (-tol <= self.alpha <= 1 + tol and -tol <= self.kappa <= 1 + tol):
            raise ValueError("influences must lie in [0,1]")
        if not (0.5 - tol <= self.eta <= 1 + tol):
            raise ValueError("success probability must lie in [1/2, 1]")
        if self.mean_abs_margin < -tol or self.mean_edge < -tol:
            raise ValueError("margins must be nonnegative")


# ---------------------------------------------------------------------------
# Validation and numeric helpers


def _validate_electorate(model: VoteModel, m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise ValueError("electorate size must be a positive integer")
    if m % 2 == 0:
        raise ValueError(
            f"electorate size must be odd so the majority event has no ties; got {m}"
        )
    if isinstance(model, CircularMajority):
        if m < 5:
            raise ValueError("circular model needs at least 5 voters (odd, >= 4)")
        if m > CIRCULAR_CAP:
            raise SizeLimitError(
                f"circular model enumerates 2^m coin vectors; m <= {CIRCULAR_CAP}"
            )


def _central_binomial_half(r: int) -> float:
    """C(2r, r) / 4^r, the fair-coin pivot probability with 2r peers."""
    if r <= 500:
        return math.comb(2 * r, r) / 4**r
    return math.exp(
        math.lgamma(2 * r + 1) - 2.0 * math.lgamma(r + 1) - 2 * r * math.log(2.0)
    )


def _binom_pmf(n: int, k: int, u: float) -> float:
    """P(Binomial(n, u) = k), u strictly inside (0,1)."""
    if n <= 500:
        return math.comb(n, k) * (u**k) * ((1.0 - u) ** (n - k))
    return math.exp(
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(u)
        + (n - k) * math.log1p(-u)
    )


def _binom_tail_geq(n: int, k: int, u: float) -> float:
    """P(Binomial(n, u) >= k)."""
    if k <= 0:
        return 1.0
    if k > n:
        return 0.0
    return math.fsum(_binom_pmf(n, j, u) for j in range(k, n + 1))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gl_panel(f: Callable[[float], float], a: float, b: float) -> float:
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * math.fsum(
        w * f(mid + half * x) for x, w in zip(_GL_NODES, _GL_WEIGHTS)
    )


def _adaptive_gauss_legendre(f, a, b, tol, depth=0):
    # Bisecting 20-point panels; tol is an absolute error target.
    whole = _gl_panel(f, a, b)
    mid = 0.5 * (a + b)
    refined = _gl_panel(f, a, mid) + _gl_panel(f, mid, b)
    if abs(refined - whole) <= tol or depth >= 40:
        return refined
    return _adaptive_gauss_legendre(f, a, mid, 0.5 * tol, depth + 1) + (
        _adaptive_gauss_legendre(f, mid, b, 0.5 * tol, depth + 1)
    )


# ---------------------------------------------------------------------------
# Influence operations (closed forms)


def absolute_influence(model: VoteModel, m: int) -> float:
    """Probability that one voter's switch from -1 to +1 flips the strict
    majority outcome.

    With 2r peers this is the probability that the peers split r/r, weighted
    over the bias law when there is one.  For the uniform bias the Beta
    integral collapses to exactly 1/m.
    """
    _validate_electorate(model, m)
    r = (m - 1) // 2
    if isinstance(model, IndependentFair):
        return _central_binomial_half(r)
    if isinstance(model, CollectiveBias):
        atoms = model.mixing.atom_list()
        if atoms is None:
            return 1.0 / m
        return math.fsum(p * _binom_pmf(2 * r, r, u) for u, p in atoms)
    if isinstance(model, CircularMajority):
        return _circular_summary(m).alpha
    raise TypeError(f"unsupported vote model: {model!r}")


def conditional_influence(model: VoteModel, m: int) -> float:
    """P(pass | vote +1) - P(pass | vote -1) for the strict majority event.

    Under a shared bias the conditioning reweights the bias law by u
    (respectively 1-u); the peers' tally is a Binomial(m-1, u) and the two
    conditional pass probabilities are its reweighted upper tails.  Atoms are
    summed exactly; the uniform law is integrated by adaptive Gauss-Legendre
    quadrature to absolute tolerance 1e-10.
    """
    _validate_electorate(model, m)
    if isinstance(model, IndependentFair):
        return absolute_influence(model, m)
    if isinstance(model, CollectiveBias):
        n = m - 1
        r = n // 2

        def signed_tail(u: float) -> float:
            return u * _binom_tail_geq(n, r, u) - (1.0 - u) * _binom_tail_geq(
                n, r + 1, u
            )

        atoms = model.mixing.atom_list()
        if atoms is None:
            # E[U] = 1/2 normalises the reweighted tails.
            return 2.0 * _adaptive_gauss_legendre(signed_tail, 0.0, 1.0, 5e-11)
        return 2.0 * math.fsum(p * signed_tail(u) for u, p in atoms)
    if isinstance(model, CircularMajority):
        return _circular_summary(m).kappa
    raise TypeError(f"unsupported vote model: {model!r}")


def success_probability(model: VoteModel, m: int) -> float:
    """Probability of voting on the winning side, (1 + kappa) / 2."""
    return 0.5 * (1.0 + conditional_influence(model, m))


def margin_distribution(model: VoteModel, m: int) -> tuple[list[int], list[float]]:
    """Exact distribution of the signed vote sum S, as (values, probabilities).

    Values run over m+1 points 2h - m for h = 0..m; probabilities come from
    the exact binomial mixture (bias models), the flat Beta-integral law for
    the uniform bias, or exhaustive enumeration for the circular model.
    """
    _validate_electorate(model, m)
    margins = [2 * h - m for h in range(m + 1)]
    if isinstance(model, IndependentFair):
        if m <= 1000:
            probs = [math.comb(m, h) / 2**m for h in range(m + 1)]
        else:
            log_half = -m * math.log(2.0)
            lg = math.lgamma
            probs = [
                math.exp(lg(m + 1) - lg(h + 1) - lg(m - h + 1) + log_half)
                for h in range(m + 1)
            ]
        return margins, probs
    if isinstance(model, CollectiveBias):
        atoms = model.mixing.atom_list()
        if atoms is None:
            flat = 1.0 / (m + 1)
            return margins, [flat] * (m + 1)
        probs = [
            math.fsum(p * _binom_pmf(m, h, u) for u, p in atoms)
            for h in range(m + 1)
        ]
        return margins, probs
    if isinstance(model, CircularMajority):
        counts = _circular_margin_counts(m)
        scale = math.ldexp(1.0, -m)
        return margins, [c * scale for c in counts]
    raise TypeError(f"unsupported vote model: {model!r}")


def mean_abs_margin(model: VoteModel, m: int) -> float:
    """E|S|: the expected absolute majority margin, from the distribution of
    S itself (not via the influence identity, which the tests check
    independently)."""
    margins, probs = margin_distribution(model, m)
    return math.fsum(p * abs(s) for s, p in zip(margins, probs))


def least_squares_weight(model: VoteModel, m: int) -> float:
    """Council weight minimising the mean squared delegation error: E|S|."""
    return mean_abs_margin(model, m)


def _margin_second_moment(model: VoteModel, m: int) -> float:
    margins, probs = margin_distribution(model, m)
    return math.fsum(p * s * s for s, p in zip(margins, probs))


def least_squares_objective(
    models: Sequence[VoteModel],
    sizes: Sequence[int],
    w,
) -> float:
    """Mean squared error of the weighted delegate votes against the raw
    state margins, Q = sum_j Var(S_j - w_j chi_j), for independent states.

    Expands per state to E(S^2) - 2 w E|S| + w^2 since the delegate vote is
    the sign of S and S never vanishes for odd electorates.
    """
    weights = list(w)
    if not (len(models) == len(sizes) == len(weights)):
        raise ValueError("models, sizes and weights must have equal length")
    terms = []
    for model, m, wj in zip(models, sizes, weights):
        second = _margin_second_moment(model, m)
        first = mean_abs_margin(model, m)
        terms.append(second - 2.0 * wj * first + wj * wj)
    return math.fsum(terms)


def asymptotic_fair_influence(population: int) -> float:
    """Large-electorate absolute influence under independent fair voting,
    sqrt(2 / (pi * population))."""
    if population < 1:
        raise ValueError("population must be positive")
    return math.sqrt(2.0 / (math.pi * population))


def influence_report(model: VoteModel, m: int) -> InfluenceReport:
    """Influence summary via the closed-form/enumeration production paths."""
    _validate_electorate(model, m)
    kappa = conditional_influence(model, m)
    e_abs = mean_abs_margin(model, m)
    return InfluenceReport(
        m=m,
        alpha=absolute_influence(model, m),
        kappa=kappa,
        eta=0.5 * (1.0 + kappa),
        mean_abs_margin=e_abs,
        mean_edge=e_abs,
    )


# ---------------------------------------------------------------------------
# Exhaustive enumeration: shared bit machinery

_POP8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint16)


def _popcount32(a: np.ndarray) -> np.ndarray:
    return (
        _POP8[a & 0xFF]
        + _POP8[(a >> 8) & 0xFF]
        + _POP8[(a >> 16) & 0xFF]
        + _POP8[(a >> 24) & 0xFF]
    )


def _index_chunks(total: int):
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        yield np.arange(start, stop, dtype=np.uint32)


# ---------------------------------------------------------------------------
# Exhaustive enumeration: product and bias models


def _config_probability_by_popcount(model: VoteModel, m: int) -> np.ndarray:
    """P(one specific ±1 configuration with h votes of +1), for h = 0..m."""
    if isinstance(model, IndependentFair):
        return np.full(m + 1, math.ldexp(1.0, -m))
    atoms = model.mixing.atom_list()
    if atoms is None:
        # integral of u^h (1-u)^(m-h) du over (0,1), an exact rational
        fact = math.factorial
        return np.array(
            [
                float(Fraction(fact(h) * fact(m - h), fact(m + 1)))
                for h in range(m + 1)
            ]
        )
    return np.array(
        [
            math.fsum(p * u**h * (1.0 - u) ** (m - h) for u, p in atoms)
            for h in range(m + 1)
        ]
    )


def brute_force_report(model: VoteModel, m: int) -> InfluenceReport:
    """Influence summary by exhaustive enumeration of the joint distribution.

    Every configuration of the 2^m votes (or of the 2^m underlying coins for
    the circular model) is visited with its probability computed from first
    principles; nothing is shared with the closed-form paths.  Chunks are
    reduced in a fixed order so results are bitwise deterministic.
    """
    _validate_electorate(model, m)
    if m > ENUMERATION_CAP:
        raise SizeLimitError(
            f"brute force enumerates 2^m configurations; m <= {ENUMERATION_CAP}"
        )
    if isinstance(model, CircularMajority):
        return _circular_summary(m)

    prob_by_pop = _config_probability_by_popcount(model, m)
    up_parts = []  # P(X^0 in A)
    down_parts = []  # P(X_0 in A)
    plus_parts = []  # P(X0 = +1)
    plus_pass_parts = []  # P(X0 = +1, S > 0)
    minus_pass_parts = []  # P(X0 = -1, S > 0)
    abs_margin_parts = []
    edge_parts = []
    for configs in _index_chunks(1 << m):
        pop = _popcount32(configs).astype(np.int64)
        prob = prob_by_pop[pop]
        sign0 = 2 * (configs & 1).astype(np.int64) - 1
        margin = 2 * pop - m
        peers = margin - sign0
        # forcing voter 0 to +1 / -1 shifts the sum to peers ± 1
        up_parts.append(float(prob[peers + 1 > 0].sum()))
        down_parts.append(float(prob[peers - 1 > 0].sum()))
        votes_plus = sign0 == 1
        passing = margin > 0
        plus_parts.append(float(prob[votes_plus].sum()))
        plus_pass_parts.append(float(prob[votes_plus & passing].sum()))
        minus_pass_parts.append(float(prob[(~votes_plus) & passing].sum()))
        abs_margin_parts.append(float((prob * np.abs(margin)).sum()))
        edge_parts.append(float((prob * np.abs(2 * pop - m)).sum()))
    p_up = math.fsum(up_parts)
    p_down = math.fsum(down_parts)
    p_plus = math.fsum(plus_parts)
    p_plus_pass = math.fsum(plus_pass_parts)
    p_minus_pass = math.fsum(minus_pass_parts)
    kappa = p_plus_pass / p_plus - p_minus_pass / (1.0 - p_plus)
    return InfluenceReport(
        m=m,
        alpha=p_up - p_down,
        kappa=kappa,
        eta=p_plus_pass + ((1.0 - p_plus) - p_minus_pass),
        mean_abs_margin=math.fsum(abs_margin_parts),
        mean_edge=math.fsum(edge_parts),
    )


# ---------------------------------------------------------------------------
# Exhaustive enumeration: circular model


def _circular_x_bit(coins: np.ndarray, i: int, m: int) -> np.ndarray:
    a = (coins >> ((i - 1) % m)) & 1
    b = (coins >> (i % m)) & 1
    c = (coins >> ((i + 1) % m)) & 1
    return (a & b) | (a & c) | (b & c)


def _circular_positive_counts(coins: np.ndarray, m: int) -> np.ndarray:
    """Number of +1 votes per coin configuration."""
    pos = np.zeros(len(coins), dtype=np.int64)
    for i in range(m):
        pos += _circular_x_bit(coins, i, m)
    return pos


@lru_cache(maxsize=16)
def _circular_margin_counts(m: int) -> tuple[int, ...]:
    if m > CIRCULAR_CAP:
        raise SizeLimitError(f"circular enumeration capped at m = {CIRCULAR_CAP}")
    counts = np.zeros(m + 1, dtype=np.int64)
    for coins in _index_chunks(1 << m):
        pos = _circular_positive_counts(coins, m)
        counts += np.bincount(pos, minlength=m + 1)
    return tuple(int(c) for c in counts)


@lru_cache(maxsize=16)
def _circular_summary(m: int) -> InfluenceReport:
    # exact integer counts over the 2^m equally likely coin vectors
    total = 1 << m
    pivot_up = pivot_down = 0
    plus = plus_pass = minus_pass = 0
    abs_margin = edge = 0
    for coins in _index_chunks(total):
        pos = _circular_positive_counts(coins, m)
        margin = 2 * pos - m
        x0 = _circular_x_bit(coins, 0, m).astype(np.int64)
        peers = margin - (2 * x0 - 1)
        pivot_up += int(np.count_nonzero(peers + 1 > 0))
        pivot_down += int(np.count_nonzero(peers - 1 > 0))
        passing = margin > 0
        votes_plus = x0 == 1
        plus += int(np.count_nonzero(votes_plus))
        plus_pass += int(np.count_nonzero(votes_plus & passing))
        minus_pass += int(np.count_nonzero(~votes_plus & passing))
        abs_margin += int(np.abs(margin).sum())
        edge += int(np.abs(2 * pos - m).sum())
    minus = total - plus
    kappa = plus_pass / plus - minus_pass / minus
    return InfluenceReport(
        m=m,
        alpha=(pivot_up - pivot_down) / total,
        kappa=kappa,
        eta=(plus_pass + (minus - minus_pass)) / total,
        mean_abs_margin=abs_margin / total,
        mean_edge=edge / total,
    )


def circular_pair_correlation(m: int, i: int, j: int) -> float:
    """Exact covariance of votes i and j in the circular model.

    Votes at circular distance >= 3 share no coins and the covariance is
    exactly zero; at distances 1 and 2 it is positive.
    """
    if not isinstance(m, int) or m < 4:
        raise ValueError("circular model needs m >= 4")
    if m > CIRCULAR_CAP:
        raise SizeLimitError(f"circular enumeration capped at m = {CIRCULAR_CAP}")
    if not (0 <= i < m and 0 <= j < m):
        raise ValueError("vote indices must lie in range(m)")
    total = 1 << m
    agree = 0
    for coins in _index_chunks(total):
        xi = _circular_x_bit(coins, i, m)
        xj = _circular_x_bit(coins, j, m)
        agree += int(np.count_nonzero(xi == xj))
    # votes are centred, so covariance = E[X_i X_j] = (agree - disagree)/2^m
    return (2 * agree - total) / total


def circular_joint_distribution(m: int) -> np.ndarray:
    """Exact joint counts of the circular vote vector: entry k is the number
    of coin configurations mapping to the vote pattern with bit i of k equal
    to 1 iff vote i is +1.  Intended for small m (capped at 16)."""
    if not isinstance(m, int) or m < 4:
        raise ValueError("circular model needs m >= 4")
    if m > 16:
        raise SizeLimitError("joint distribution table capped at m = 16")
    counts = np.zeros(1 << m, dtype=np.int64)
    for coins in _index_chunks(1 << m):
        pattern = np.zeros(len(coins), dtype=np.uint32)
        for i in range(m):
            pattern |= _circular_x_bit(coins, i, m) << np.uint32(i)
        counts += np.bincount(pattern, minlength=1 << m)
    return counts
