"""Counter-based RNG: determinism, scalar/vector agreement, uniformity."""

import math

import numpy as np
import pytest

from biphoton.rng import (
    TrialStream,
    derive_seed,
    draw_u64,
    draw_uniform,
    uniform_array,
)

SEEDS = [0, 1, 42, 2**63 - 1, 2**64 - 1, -1, -987654321]


def test_draw_u64_is_deterministic():
    a = draw_u64(1234, 56, 7)
    b = draw_u64(1234, 56, 7)
    assert a == b
    assert isinstance(a, int)
    assert 0 <= a < 2**64


def test_distinct_counters_give_distinct_words():
    words = {draw_u64(99, 0, c) for c in range(64)}
    assert len(words) == 64


def test_distinct_trials_give_distinct_words():
    words = {draw_u64(99, t, 0) for t in range(64)}
    assert len(words) == 64


@pytest.mark.parametrize("seed", SEEDS)
def test_uniform_range_half_open(seed):
    for trial in range(200):
        u = draw_uniform(seed, trial, 0)
        assert 0.0 <= u < 1.0


def test_uniform_is_top_53_bits():
    # u must be k * 2**-53 for integer k, so u * 2**53 is exact.
    for trial in range(200):
        u = draw_uniform(7, trial, 1)
        scaled = u * 2.0**53
        assert scaled == math.floor(scaled)


@pytest.mark.parametrize("seed", SEEDS)
def test_vector_matches_scalar(seed):
    rng = np.random.default_rng(abs(seed) + 3)
    trials = rng.integers(0, 2**64, size=257, dtype=np.uint64)
    for counter in (0, 1, 5):
        vec = uniform_array(seed, trials, counter)
        ref = np.array(
            [draw_uniform(seed, int(t), counter) for t in trials]
        )
        assert vec.dtype == np.float64
        np.testing.assert_array_equal(vec, ref)


def test_vector_matches_scalar_contiguous_range():
    trials = np.arange(1000, dtype=np.uint64)
    vec = uniform_array(31337, trials, 0)
    ref = np.array([draw_uniform(31337, t, 0) for t in range(1000)])
    np.testing.assert_array_equal(vec, ref)


def test_uniformity_chi_square_16_bins():
    n = 100_000
    bins = 16
    u = uniform_array(2024, np.arange(n, dtype=np.uint64), 0)
    counts = np.bincount((u * bins).astype(np.int64), minlength=bins)
    expected = n / bins
    chi2 = float(np.sum((counts - expected) ** 2) / expected)
    # df = 15: mean 15, sd sqrt(30); stay within 3 sigma.
    assert chi2 < 15.0 + 3.0 * math.sqrt(30.0)


def test_derive_seed_deterministic_and_distinct():
    assert derive_seed(5, 0) == derive_seed(5, 0)
    streams = {derive_seed(5, k) for k in range(32)}
    assert len(streams) == 32
    assert derive_seed(5, 0) != derive_seed(6, 0)


def test_trial_stream_matches_draw_uniform():
    stream = TrialStream(777, 12)
    got = [stream.uniform() for _ in range(6)]
    want = [draw_uniform(777, 12, c) for c in range(6)]
    assert got == want


def test_trial_streams_are_independent_objects():
    s1 = TrialStream(777, 12)
    s2 = TrialStream(777, 12)
    s1.uniform()
    assert s2.uniform() == draw_uniform(777, 12, 0)
