"""Distribution helpers and dense linear algebra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from densetest.errors import NotPositiveDefinite, OutOfRange, TooFewSamples, ZeroLoading
from densetest.numerics import (
    cholesky,
    householder_complement,
    ks_test_standard_normal,
    normal_cdf,
    normal_quantile,
    solve_spd,
)


class TestCholesky:
    def test_matches_numpy_on_random_spd(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            p = rng.integers(2, 30)
            m = rng.standard_normal((p, p))
            sigma = m @ m.T + p * np.eye(p)
            L = cholesky(sigma)
            assert np.allclose(L, np.tril(L))
            assert np.allclose(L @ L.T, sigma, atol=1e-9)

    def test_rejects_asymmetric(self):
        m = np.array([[2.0, 0.5], [0.4, 2.0]])
        with pytest.raises(NotPositiveDefinite):
            cholesky(m)

    def test_rejects_indefinite(self):
        m = np.array([[1.0, 2.0], [2.0, 1.0]])
        with pytest.raises(NotPositiveDefinite):
            cholesky(m)

    def test_rejects_semidefinite(self):
        v = np.array([1.0, 2.0])
        with pytest.raises(NotPositiveDefinite):
            cholesky(np.outer(v, v))

    def test_rejects_nonsquare(self):
        with pytest.raises(NotPositiveDefinite):
            cholesky(np.ones((2, 3)))


class TestSolveSpd:
    def test_solves_against_numpy(self):
        rng = np.random.default_rng(1)
        m = rng.standard_normal((12, 12))
        sigma = m @ m.T + 12 * np.eye(12)
        b = rng.standard_normal(12)
        assert np.allclose(solve_spd(sigma, b), np.linalg.solve(sigma, b), atol=1e-9)

    def test_solves_matrix_rhs(self):
        rng = np.random.default_rng(2)
        sigma = np.eye(5) * 3.0
        B = rng.standard_normal((5, 4))
        assert np.allclose(solve_spd(sigma, B), B / 3.0)


class TestHouseholderComplement:
    @given(st.integers(min_value=2, max_value=60), st.integers(min_value=0, max_value=2**31))
    @settings(max_examples=60, deadline=None)
    def test_orthonormal_complement_properties(self, p, seed):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal(p)
        while np.linalg.norm(a) < 1e-3:
            a = rng.standard_normal(p)
        u = householder_complement(a)
        assert u.shape == (p, p - 1)
        assert np.allclose(u.T @ u, np.eye(p - 1), atol=1e-10)
        proj = np.eye(p) - np.outer(a, a) / np.dot(a, a)
        assert np.allclose(u @ u.T, proj, atol=1e-10)
        assert np.allclose(u.T @ a, 0.0, atol=1e-9 * np.linalg.norm(a))

    def test_basis_vector_loading(self):
        # For a = e1 the complement is (up to column signs) the remaining axes.
        u = householder_complement(np.array([1.0, 0.0, 0.0]))
        assert np.allclose(np.abs(u), np.eye(3)[:, 1:], atol=1e-12)

    def test_pairwise_difference_loading(self):
        # Testing b1 = b2 consolidates the averaged pair into one column:
        # the complement of (1, -1, 0, ...) contains (1, 1, 0, ...)/sqrt(2).
        p = 6
        a = np.zeros(p)
        a[0], a[1] = 1.0, -1.0
        u = householder_complement(a)
        target = np.zeros(p)
        target[0] = target[1] = 1.0 / math.sqrt(2.0)
        overlap = u.T @ target
        assert np.isclose(np.linalg.norm(overlap), 1.0, atol=1e-10)

    def test_deterministic(self):
        a = np.array([0.3, -1.2, 0.7, 2.0])
        assert np.array_equal(householder_complement(a), householder_complement(a))

    def test_zero_loading_rejected(self):
        with pytest.raises(ZeroLoading):
            householder_complement(np.zeros(4))


class TestNormalCdf:
    def test_known_values(self):
        assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
        assert normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-12)
        assert normal_cdf(-1.959963984540054) == pytest.approx(0.025, abs=1e-12)
        assert normal_cdf(6.0) == pytest.approx(1.0 - 9.865876450377018e-10, abs=1e-15)

    def test_symmetry(self):
        for x in (0.3, 1.7, 4.2):
            assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-15)

    def test_vectorized(self):
        xs = np.array([[-1.0, 0.0], [1.0, 2.0]])
        out = normal_cdf(xs)
        assert out.shape == xs.shape
        assert out[0, 1] == pytest.approx(0.5)


class TestNormalQuantile:
    def test_round_trip_with_cdf(self):
        # normal_cdf comes from math.erfc, an independent route.
        for p in (1e-10, 1e-4, 0.01, 0.025, 0.3, 0.5, 0.7, 0.975, 0.99, 1 - 1e-7):
            assert normal_cdf(normal_quantile(p)) == pytest.approx(p, abs=1e-9)

    def test_reference_quantiles(self):
        assert normal_quantile(0.975) == pytest.approx(1.959963984540054, abs=1e-9)
        assert normal_quantile(0.5) == pytest.approx(0.0, abs=1e-12)
        assert normal_quantile(0.841344746068543) == pytest.approx(1.0, abs=1e-9)

    def test_antisymmetry(self):
        for p in (0.01, 0.2, 0.45):
            assert normal_quantile(p) == pytest.approx(-normal_quantile(1 - p), abs=1e-9)

    @given(st.floats(min_value=1e-12, max_value=1 - 1e-12))
    @settings(max_examples=200, deadline=None)
    def test_monotone_and_accurate(self, p):
        x = normal_quantile(p)
        assert normal_cdf(x) == pytest.approx(p, abs=1e-9)

    def test_domain(self):
        for bad in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(OutOfRange):
                normal_quantile(bad)


class TestKsTest:
    def test_statistic_matches_hand_computation(self):
        # Two points: D = max over i of max(i/n - F(x_i), F(x_i) - (i-1)/n).
        sample = [-1.0] * 5 + [1.0] * 5
        d, _ = ks_test_standard_normal(sample)
        # The sup-gap sits just left of the fifth order statistic (ECDF 0.5
        # versus F(-1)) and symmetrically just left of the sixth.
        expected = 0.5 - normal_cdf(-1.0)
        assert d == pytest.approx(expected, abs=1e-12)

    def test_p_value_matches_kolmogorov_series(self):
        # For a sample placed exactly at normal quantiles of (i - 0.5)/n the
        # sup-gap is 1/(2n); the p-value must equal the Kolmogorov series at
        # lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D, computed here directly.
        n = 40
        sample = [normal_quantile((i - 0.5) / n) for i in range(1, n + 1)]
        d, p = ks_test_standard_normal(sample)
        assert d == pytest.approx(0.5 / n, abs=1e-10)
        lam = (math.sqrt(n) + 0.12 + 0.11 / math.sqrt(n)) * d
        ref = 2.0 * sum((-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
                        for k in range(1, 200))
        assert p == pytest.approx(min(max(ref, 0.0), 1.0), abs=1e-9)

    def test_larger_gap_gives_smaller_p(self):
        rng = np.random.default_rng(7)
        sample = rng.standard_normal(400)
        d1, p1 = ks_test_standard_normal(sample)
        d2, p2 = ks_test_standard_normal(sample + 0.5)
        assert d2 > d1 and p2 < p1

    def test_null_sample_passes(self):
        rng = np.random.default_rng(11)
        d, p = ks_test_standard_normal(rng.standard_normal(2000))
        assert p > 0.01
        assert d < 0.05

    def test_shifted_sample_fails(self):
        rng = np.random.default_rng(12)
        _, p = ks_test_standard_normal(rng.standard_normal(2000) + 0.3)
        assert p < 1e-6

    def test_p_value_in_unit_interval(self):
        rng = np.random.default_rng(13)
        for scale in (0.1, 1.0, 10.0):
            _, p = ks_test_standard_normal(scale * rng.standard_normal(50))
            assert 0.0 <= p <= 1.0

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamples):
            ks_test_standard_normal(np.zeros(5))
