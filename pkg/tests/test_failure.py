"""Reproducible failure/repair sampling and attempt bookkeeping."""

from __future__ import annotations

import math
from statistics import fmean

import pytest

from gridrely import (
    FailureProfile,
    NodeStats,
    Outcome,
    failure_stream,
    record_attempt,
    repair_stream,
    sample_time_to_failure,
    sample_time_to_repair,
)


class TestStreams:
    def test_same_seed_same_node_replays_identically(self):
        a = failure_stream(123, 4)
        b = failure_stream(123, 4)
        assert [a.uniform() for _ in range(10)] == [b.uniform() for _ in range(10)]

    def test_different_nodes_get_independent_streams(self):
        a = failure_stream(123, 0)
        b = failure_stream(123, 1)
        assert [a.uniform() for _ in range(5)] != [b.uniform() for _ in range(5)]

    def test_failure_and_repair_streams_differ(self):
        a = failure_stream(123, 0)
        b = repair_stream(123, 0)
        assert [a.uniform() for _ in range(5)] != [b.uniform() for _ in range(5)]

    def test_different_seeds_differ(self):
        a = failure_stream(1, 0)
        b = failure_stream(2, 0)
        assert [a.uniform() for _ in range(5)] != [b.uniform() for _ in range(5)]

    def test_uniform_range(self):
        rng = failure_stream(99, 7)
        draws = [rng.uniform() for _ in range(1000)]
        assert all(0.0 <= u < 1.0 for u in draws)


class TestSampling:
    def test_zero_failure_rate_means_never(self):
        profile = FailureProfile(lambda_per_hour=0.0, mu_per_hour=1.0)
        rng = failure_stream(0, 0)
        assert sample_time_to_failure(profile, rng) == math.inf

    def test_draws_are_positive_and_finite(self):
        profile = FailureProfile(lambda_per_hour=2.0, mu_per_hour=6.0)
        f, r = failure_stream(3, 1), repair_stream(3, 1)
        for _ in range(100):
            ttf = sample_time_to_failure(profile, f)
            ttr = sample_time_to_repair(profile, r)
            assert 0.0 < ttf < math.inf
            assert 0.0 < ttr < math.inf

    def test_mean_time_to_failure_matches_rate(self):
        # lambda = 4/h -> mean 900 s; 20k draws keep the sample mean within 3%
        profile = FailureProfile(lambda_per_hour=4.0, mu_per_hour=1.0)
        rng = failure_stream(2024, 0)
        mean = fmean(sample_time_to_failure(profile, rng) for _ in range(20_000))
        assert mean == pytest.approx(900.0, rel=0.03)

    def test_mean_time_to_repair_matches_rate(self):
        # mu = 12/h -> mean 300 s
        profile = FailureProfile(lambda_per_hour=1.0, mu_per_hour=12.0)
        rng = repair_stream(2024, 0)
        mean = fmean(sample_time_to_repair(profile, rng) for _ in range(20_000))
        assert mean == pytest.approx(300.0, rel=0.03)

    def test_higher_rate_gives_stochastically_shorter_times(self):
        fast = FailureProfile(lambda_per_hour=100.0, mu_per_hour=1.0)
        slow = FailureProfile(lambda_per_hour=0.01, mu_per_hour=1.0)
        rng_a, rng_b = failure_stream(5, 0), failure_stream(5, 1)
        fast_mean = fmean(sample_time_to_failure(fast, rng_a) for _ in range(2000))
        slow_mean = fmean(sample_time_to_failure(slow, rng_b) for _ in range(2000))
        assert fast_mean < slow_mean


class TestRecordAttempt:
    def test_success_increments_both_counters(self):
        s = record_attempt(NodeStats(3), Outcome.SUCCESS)
        assert (s.node_id, s.attempts, s.successes) == (3, 1, 1)

    def test_failure_increments_attempts_only(self):
        s = record_attempt(NodeStats(3), Outcome.FAILURE)
        assert (s.node_id, s.attempts, s.successes) == (3, 1, 0)

    def test_original_stats_are_not_mutated(self):
        s0 = NodeStats(0)
        record_attempt(s0, Outcome.SUCCESS)
        assert (s0.attempts, s0.successes) == (0, 0)

    def test_folds_a_history(self):
        s = NodeStats(0)
        for outcome in [Outcome.SUCCESS, Outcome.SUCCESS, Outcome.FAILURE, Outcome.SUCCESS]:
            s = record_attempt(s, outcome)
        assert (s.attempts, s.successes) == (4, 3)
