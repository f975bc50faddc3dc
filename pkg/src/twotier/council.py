"""Exact state influences in the weighted council vote.

A state is pivotal when, over the independent fair ±1 votes of the other
delegates, the signed weight sum of the others lands in the half-open window
(qW - w_j, qW + w_j].  The probability is computed exactly by enumerating
all 2^(s-1) sign assignments with a Gray-code kernel; the compiled extension
is used when present, with a pure-Python fallback selected at import time.
"""

from __future__ import annotations

import math
import os
from array import array
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import SizeLimitError
from .union import QuotaSpec, WeightVector

try:
    from ._gray import count_in_window

    KERNEL = "compiled"
except ImportError:  # extension not built; ~100x slower
    from ._pure import count_in_window

    KERNEL = "pure"

__all__ = [
    "CouncilAnalysis",
    "SweepPoint",
    "SweepResult",
    "state_influence_exact",
    "state_influences",
    "analyze",
    "quota_sweep",
    "passes",
    "KERNEL",
]

# Exact enumeration visits 2^(s-1) coalitions per state; beyond 30 states the
# Gaussian approximation (twotier.gaussian) is the supported route.
MAX_EXACT_STATES = 30

_ARGMIN_TIE_TOL = 1e-12


@dataclass(frozen=True)
class CouncilAnalysis:
    """Per-state influence table for one quota.

    beta[j] is the exact pivot probability of state j; the normalised
    columns rescale weights and influences to sum to 100; ratios compares
    them; objective is the sum of squared normalised deviations; and
    total_influence[j] multiplies beta[j] by the supplied per-state voter
    influence.
    """

    quota: QuotaSpec
    beta: tuple[float, ...]
    beta_normalised: tuple[float, ...]
    weight_normalised: tuple[float, ...]
    ratios: tuple[float, ...]
    beta_total: float
    objective: float
    total_influence: tuple[float, ...]


@dataclass(frozen=True)
class SweepPoint:
    quota: QuotaSpec
    objective: float
    beta_total: float


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]
    argmin_index: int


def _check_analysis_inputs(w: WeightVector, q: QuotaSpec) -> None:
    if len(w) > MAX_EXACT_STATES:
        raise SizeLimitError(
            f"exact enumeration supports at most {MAX_EXACT_STATES} states "
            f"(got {len(w)}); use the Gaussian approximation instead"
        )
    if not abs(q.q) < 1.0:
        raise ValueError(
            f"|q| must be < 1 for analysis (q={q.q}): passage would be "
            "impossible or guaranteed"
        )


def _window_job(w: WeightVector, threshold: float, j: int):
    others = array("d", (x for k, x in enumerate(w.weights) if k != j))
    wj = w.weights[j]
    return others, threshold - wj, threshold + wj


def state_influence_exact(w: WeightVector, q: QuotaSpec, j: int) -> float:
    """Exact probability that state j is pivotal in the council vote.

    Enumerates all 2^(s-1) equally likely sign assignments of the other
    states and counts those whose weighted sum Z satisfies
    qW - w_j < Z <= qW + w_j (strict left, inclusive right).
    """
    _check_analysis_inputs(w, q)
    if not 0 <= j < len(w):
        raise ValueError(f"state index {j} out of range for {len(w)} states")
    others, lo, hi = _window_job(w, q.q * w.total, j)
    hits = count_in_window(others, lo, hi)
    return math.ldexp(float(hits), 1 - len(w))


def _influences(w: WeightVector, q: QuotaSpec, threads: int) -> list[float]:
    _check_analysis_inputs(w, q)
    if threads < 0:
        raise ValueError("threads must be >= 0 (0 selects the CPU count)")
    s = len(w)
    threshold = q.q * w.total
    jobs = [_window_job(w, threshold, j) for j in range(s)]
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads == 1 or s == 1:
        counts = [count_in_window(*job) for job in jobs]
    else:
        # the compiled kernel releases the GIL, so threads give real speedup
        with ThreadPoolExecutor(max_workers=min(threads, s)) as pool:
            counts = list(pool.map(lambda job: count_in_window(*job), jobs))
    return [math.ldexp(float(c), 1 - s) for c in counts]


def state_influences(
    w: WeightVector, q: QuotaSpec, *, threads: int = 0
) -> tuple[float, ...]:
    """Exact pivot probabilities of all states, enumerated in parallel."""
    return tuple(_influences(w, q, threads))


def analyze(
    w: WeightVector,
    q: QuotaSpec,
    alpha: Sequence[float],
    *,
    threads: int = 0,
) -> CouncilAnalysis:
    """Full influence table at quota q.

    alpha supplies the per-state voter influences used for the total
    (voter-level) influences alpha_j * beta_j; for square-root weights on
    real populations the asymptotic fair-voting value
    sqrt(2/(pi*population)) is the conventional choice.

    threads=0 picks the CPU count; each state's enumeration is independent
    and internally sequential, so results do not depend on thread count.
    """
    alpha = tuple(float(a) for a in alpha)
    if len(alpha) != len(w):
        raise ValueError("alpha must supply one voter influence per state")
    if any(not a > 0 for a in alpha):
        raise ValueError("alpha entries must be positive")
    beta = _influences(w, q, threads)
    beta_total = math.fsum(beta)
    if not beta_total > 0:
        raise ValueError(
            "all state influences are zero at this quota; "
            "normalised columns are undefined"
        )
    weight_total = w.total
    weight_norm = [100.0 * x / weight_total for x in w.weights]
    beta_norm = [100.0 * b / beta_total for b in beta]
    ratios = [bn / wn for bn, wn in zip(beta_norm, weight_norm)]
    objective = math.fsum((wn - bn) ** 2 for wn, bn in zip(weight_norm, beta_norm))
    return CouncilAnalysis(
        quota=q,
        beta=tuple(beta),
        beta_normalised=tuple(beta_norm),
        weight_normalised=tuple(weight_norm),
        ratios=tuple(ratios),
        beta_total=beta_total,
        objective=objective,
        total_influence=tuple(a * b for a, b in zip(alpha, beta)),
    )


def quota_sweep(
    w: WeightVector,
    grid: Sequence[QuotaSpec],
    *,
    threads: int = 0,
) -> SweepResult:
    """Evaluate the squared-deviation objective and total influence over a
    quota grid.

    Returns the points in grid order plus the argmin of the objective; ties
    within 1e-12 resolve toward the quota of smaller magnitude.
    """
    grid = tuple(grid)
    if not grid:
        raise ValueError("quota grid must be non-empty")
    points = []
    for q in grid:
        beta = _influences(w, q, threads)
        beta_total = math.fsum(beta)
        if not beta_total > 0:
            raise ValueError(f"all state influences are zero at q={q.q}")
        weight_total = w.total
        weight_norm = (100.0 * x / weight_total for x in w.weights)
        beta_norm = [100.0 * b / beta_total for b in beta]
        objective = math.fsum((wn - bn) ** 2 for wn, bn in zip(weight_norm, beta_norm))
        points.append(SweepPoint(q, objective, beta_total))
    best = 0
    for i in range(1, len(points)):
        delta = points[i].objective - points[best].objective
        if delta < -_ARGMIN_TIE_TOL:
            best = i
        elif abs(delta) <= _ARGMIN_TIE_TOL and abs(points[i].quota.q) < abs(
            points[best].quota.q
        ):
            best = i
    return SweepResult(tuple(points), best)


def passes(w: WeightVector, q: QuotaSpec, yes_set: Iterable[int]) -> bool:
    """Whether the motion passes when exactly the states in yes_set (0-based
    indices) vote in favour: strict inequality V > qW for the signed
    weighted vote sum V."""
    yes = set(yes_set)
    if not yes <= set(range(len(w))):
        raise ValueError("yes_set must contain valid 0-based state indices")
    v = math.fsum(x if j in yes else -x for j, x in enumerate(w.weights))
    return v > q.q * w.total
