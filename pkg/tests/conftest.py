"""Shared fixtures and independent oracles for the test suite."""

import math
import random

import pytest

import twotier


@pytest.fixture(scope="session")
def eu27():
    return twotier.load_eu27()


@pytest.fixture(scope="session")
def eu27_weights(eu27):
    return twotier.sqrt_weights(eu27)


@pytest.fixture(scope="session")
def eu27_qstar(eu27):
    return twotier.jagcom_quota(eu27)


@pytest.fixture(scope="session")
def naive_window_count():
    """Independent oracle: recompute every subset sum from scratch with
    compensated summation, no incremental updates shared with the kernels."""

    def count(weights, lo, hi):
        ws = list(weights)
        n = len(ws)
        hits = 0
        for mask in range(1 << n):
            z = math.fsum(ws[k] if (mask >> k) & 1 else -ws[k] for k in range(n))
            if lo < z <= hi:
                hits += 1
        return hits

    return count


@pytest.fixture
def rng():
    return random.Random(20250810)


def random_weight_vector(rng, s):
    return twotier.WeightVector(tuple(rng.uniform(0.05, 10.0) for _ in range(s)))
