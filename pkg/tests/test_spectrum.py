"""Symmetric-polynomial operations against brute-force oracles."""

import itertools

import numpy as np
import pytest

from oddpu import (FrequencySpectrum, complete_homog, complete_homogeneous,
                   elementary_sigma, reduced_sigma, rho, verify_identities)
from oddpu.verify import random_spectrum


def elementary_oracle(values, degree):
    """Sum of products over all subsets of the given size."""
    if degree == 0:
        return 1.0
    return sum(np.prod(c) for c in itertools.combinations(values, degree))


def complete_oracle(values, k):
    """Sum over all degree-k monomials (multi-index enumeration)."""
    if k < 0:
        return 0.0
    total = 0.0
    for combo in itertools.combinations_with_replacement(values, k):
        total += np.prod(combo) if combo else 1.0
    return total


class TestFrequencySpectrum:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            FrequencySpectrum((1.0, -2.0))
        with pytest.raises(ValueError):
            FrequencySpectrum((0.0,))

    def test_rejects_degenerate_gap(self):
        with pytest.raises(ValueError):
            FrequencySpectrum((1.0, 1.0))
        with pytest.raises(ValueError):
            FrequencySpectrum((1.0, np.sqrt(1.0 + 1e-8)))

    def test_sorts_with_flag(self):
        spec = FrequencySpectrum((2.0, 1.0))
        assert spec.omegas == (1.0, 2.0)
        assert spec.was_sorted
        assert not FrequencySpectrum((1.0, 2.0)).was_sorted

    def test_jet_dim(self):
        assert FrequencySpectrum((1.0, 2.0, 3.0)).jet_dim == 14


class TestElementarySigma:
    def test_top_coefficient_is_one(self):
        assert elementary_sigma(FrequencySpectrum((1.0, 2.0)), 2) == 1.0

    def test_frozen_n2(self):
        # expansion of (d^2+1)(d^2+4) = d^4 + 5 d^2 + 4
        spec = FrequencySpectrum((1.0, 2.0))
        assert elementary_sigma(spec, 0) == pytest.approx(4.0)
        assert elementary_sigma(spec, 1) == pytest.approx(5.0)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_against_subset_enumeration(self, n):
        rng = np.random.default_rng(10 + n)
        spec = random_spectrum(rng, n)
        for k in range(n + 1):
            oracle = elementary_oracle(spec.omega_sq, n - k)
            assert elementary_sigma(spec, k) == pytest.approx(oracle, rel=1e-12)

    def test_range_errors(self):
        spec = FrequencySpectrum((1.0, 2.0))
        with pytest.raises(ValueError):
            elementary_sigma(spec, -1)
        with pytest.raises(ValueError):
            elementary_sigma(spec, 3)


class TestReducedSigma:
    def test_top_is_one(self):
        spec = FrequencySpectrum((1.0, 2.0))
        assert reduced_sigma(spec, 1, 0) == 1.0
        assert reduced_sigma(spec, 1, 1) == 1.0

    def test_frozen_n2(self):
        spec = FrequencySpectrum((1.0, 2.0))
        assert reduced_sigma(spec, 0, 0) == pytest.approx(4.0)
        assert reduced_sigma(spec, 0, 1) == pytest.approx(1.0)

    @pytest.mark.parametrize("n", range(2, 6))
    def test_against_subset_enumeration(self, n):
        rng = np.random.default_rng(20 + n)
        spec = random_spectrum(rng, n)
        for k in range(n):
            rest = [v for idx, v in enumerate(spec.omega_sq) if idx != k]
            for m in range(n):
                oracle = elementary_oracle(rest, n - m - 1)
                assert reduced_sigma(spec, m, k) == pytest.approx(oracle, rel=1e-12)

    def test_range_errors(self):
        spec = FrequencySpectrum((1.0, 2.0))
        with pytest.raises(ValueError):
            reduced_sigma(spec, 2, 0)
        with pytest.raises(ValueError):
            reduced_sigma(spec, 0, 2)


class TestRho:
    def test_single_mode_is_one(self):
        assert rho(FrequencySpectrum((1.0,)), 0) == 1.0
        assert rho(FrequencySpectrum((5.5,)), 0) == 1.0

    def test_frozen_n2(self):
        spec = FrequencySpectrum((1.0, 2.0))
        assert rho(spec, 0) == pytest.approx(1.0 / 3.0)
        assert rho(spec, 1) == pytest.approx(1.0 / 3.0)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_product_oracle_and_positivity(self, n):
        rng = np.random.default_rng(30 + n)
        spec = random_spectrum(rng, n)
        w2 = spec.omega_sq
        for k in range(n):
            prod = 1.0
            for m in range(n):
                if m != k:
                    prod *= w2[m] - w2[k]
            assert rho(spec, k) == pytest.approx((-1.0) ** k / prod, rel=1e-12)
            # sorted spectrum: the (-1)^k compensates the negative factors
            assert rho(spec, k) > 0


class TestCompleteHomog:
    def test_negative_degree_is_zero(self):
        assert complete_homog(FrequencySpectrum((1.0, 2.0)), -1) == 0.0
        assert complete_homog(FrequencySpectrum((1.0, 2.0)), -3) == 0.0

    def test_degree_zero_is_one(self):
        assert complete_homog(FrequencySpectrum((1.0, 2.0)), 0) == 1.0

    def test_frozen_n2(self):
        # multi-indices l0 + l1 = 2 over (1, 4): 1 + 4 + 16
        assert complete_homog(FrequencySpectrum((1.0, 2.0)), 2) == pytest.approx(21.0)

    @pytest.mark.parametrize("n", range(1, 6))
    def test_against_enumeration(self, n):
        rng = np.random.default_rng(40 + n)
        spec = random_spectrum(rng, n)
        for k in range(8):
            oracle = complete_oracle(spec.omega_sq, k)
            assert complete_homog(spec, k) == pytest.approx(oracle, rel=1e-11)

    def test_recursion_identity_random_subsets(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            vals = list(rng.uniform(0.3, 9.0, size=rng.integers(2, 6)))
            a, b, rest = vals[0], vals[1], vals[2:]
            for s in range(1, 6):
                lhs = (complete_homogeneous(rest + [a], s)
                       - complete_homogeneous(rest + [b], s))
                rhs = (a - b) * complete_homogeneous(rest + [a, b], s - 1)
                scale = max(abs(complete_homogeneous(rest + [a], s)), abs(rhs), 1.0)
                assert abs(lhs - rhs) <= 1e-9 * scale


class TestVerifyIdentities:
    def test_frozen_id1_first_n2(self):
        # p = 0, s = 0: 4 - 1 = 3 = 1/rho_0
        spec = FrequencySpectrum((1.0, 2.0))
        lhs = reduced_sigma(spec, 0, 0) - 1.0 ** 2 * reduced_sigma(spec, 1, 0)
        assert lhs == pytest.approx(1.0 / rho(spec, 0))

    def test_frozen_id2_n2(self):
        # k = 0: -(w0^2 rho_0 - w1^2 rho_1) = 1 = P_0
        spec = FrequencySpectrum((1.0, 2.0))
        rhs = -(1.0 * rho(spec, 0) - 4.0 * rho(spec, 1))
        assert rhs == pytest.approx(complete_homog(spec, 0))

    def test_frozen_id2_negative_k(self):
        # k = -1, n = 2: power 2n+2k-2 = 0, so sum_s (-1)^s rho_s
        # must vanish, matching P_{-2} = 0
        spec = FrequencySpectrum((1.0, 2.0))
        total = rho(spec, 0) - rho(spec, 1)
        assert total == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_all_identities_pass(self, n):
        rng = np.random.default_rng(50 + n)
        for _ in range(5):
            spec = random_spectrum(rng, n)
            report = verify_identities(spec)
            assert report.all_passed, report.to_json_dict()
            for res in report.results.values():
                assert res.max_residual >= 0.0
                assert res.max_residual <= 1e-8

    def test_report_serializes(self):
        report = verify_identities(FrequencySpectrum((1.0, 2.0)))
        d = report.to_json_dict()
        assert set(d) == {"id1_first", "id1_second", "id2", "power_diff", "p_diff"}
        assert all("max_residual" in v for v in d.values())
