import math

import numpy as np
import pytest
from mpmath import mp

from src.data_pipeline.zero_store import ZeroSet
from src.number_theory.landau import (landau_main_term, landau_report, phase_sum, small_x_main_term,
                                      zero_sum)
from src.number_theory.primes import (is_prime_power, nearest_prime_power, prime_sieve, von_mangoldt,
                                      von_mangoldt_sieve)
from src.number_theory.summation import chunk_bounds, compensated_sum, kahan_sum, pairwise_combine
from src.utils.errors import DomainError, InsufficientDataError, LandauError


def test_von_mangoldt():
    assert von_mangoldt(8) == pytest.approx(math.log(2))
    assert von_mangoldt(6) == 0.0
    assert von_mangoldt(1) == 0.0
    assert von_mangoldt(49) == pytest.approx(math.log(7))
    with pytest.raises(DomainError):
        von_mangoldt(0)


def test_prime_power_detection_matches_sieve():
    lam = von_mangoldt_sieve(20_000)
    for n in range(1, 20_001):
        assert (lam[n] > 0) == is_prime_power(n)
        assert lam[n] == pytest.approx(von_mangoldt(n))


def test_prime_sieve_small():
    primes, is_prime = prime_sieve(30)
    assert primes.tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert is_prime[29] and not is_prime[27]


@pytest.mark.parametrize("x, expected", [(2.1, 2), (10, 9), (100, 101), (6.1, 7), (1.2, 2), (12.4, 13)])
def test_nearest_prime_power(x, expected):
    assert nearest_prime_power(x) == expected


def test_nearest_prime_power_domain():
    with pytest.raises(DomainError):
        nearest_prime_power(1.0)


def test_main_term_degenerate_branch():
    value = landau_main_term(2, 1000)
    assert value.imag == 0.0
    assert value.real == pytest.approx(-1000 * math.log(2) / (2 * math.pi))
    assert value.real == pytest.approx(-110.32, abs=0.01)


def test_main_term_oscillatory_branch():
    value = landau_main_term(2.5, 1000)
    log_ratio = math.log(1.25)
    expected = -(math.log(2) / (2 * math.pi)) * (np.exp(1j * 1000 * log_ratio) - 1) / (1j * log_ratio)
    assert value == pytest.approx(expected)
    assert abs(value) <= 2 * (math.log(2) / (2 * math.pi)) / log_ratio


def test_main_term_uses_nearest_prime_power():
    log_ratio = math.log(6.1 / 7)
    expected = -(math.log(7) / (2 * math.pi)) * (np.exp(1j * 50 * log_ratio) - 1) / (1j * log_ratio)
    assert landau_main_term(6.1, 50) == pytest.approx(expected)


def test_main_term_domain():
    with pytest.raises(DomainError):
        landau_main_term(1.0, 10)
    with pytest.raises(DomainError):
        landau_main_term(2.0, 0)


def test_small_x_main_term_limit():
    T = 1e4
    scale = T * math.log(T / (2 * math.pi))
    value = small_x_main_term(1 + 1e-8, T)
    assert abs(value - scale) / scale <= 1e-3
    tiny = small_x_main_term(1 + 1e-15, 100.0)
    assert tiny.real == pytest.approx(100 * math.log(100 / (2 * math.pi)), rel=1e-9)


def test_small_x_main_term_matches_exponential_form():
    x, T = 1.001, 50.0
    z = T * math.log(x)
    expected = T * math.log(T / (2 * math.pi)) * (np.exp(1j * z) - 1) / (1j * z)
    assert small_x_main_term(x, T) == pytest.approx(expected, rel=1e-12)


def test_zero_sum_of_empty_set():
    assert zero_sum(ZeroSet(np.array([])), 2.0, 0.0) == 0


def test_zero_sum_range_checks(true_zeros):
    with pytest.raises(InsufficientDataError):
        zero_sum(true_zeros, 2.0, true_zeros.t_max + 1)
    with pytest.raises(DomainError):
        zero_sum(true_zeros, 1.0, 50.0)
    with pytest.raises(InsufficientDataError):
        zero_sum(ZeroSet(np.array([])), 2.0, 10.0)


def test_zero_sum_matches_direct_sum(true_zeros):
    with mp.workdps(30):
        direct = complex(mp.fsum(mp.expjpi(mp.mpf(float(g)) * mp.log(2) / mp.pi) for g in true_zeros.gammas))
    assert zero_sum(true_zeros, 2.0, true_zeros.t_max) == pytest.approx(direct, abs=1e-9)


def test_extended_phase_agrees(true_zeros):
    plain = zero_sum(true_zeros, 3.0, true_zeros.t_max)
    extended = zero_sum(true_zeros, 3.0, true_zeros.t_max, extended_phase=True)
    assert extended == pytest.approx(plain, abs=1e-9)


def test_extended_phase_is_bitwise_identical_across_workers(synthetic_zeros):
    zeros = ZeroSet(synthetic_zeros.gammas[:20_000])
    precision = mp.prec
    results = {workers: zero_sum(zeros, 3.0, zeros.t_max, workers=workers, chunk_size=2000, extended_phase=True)
               for workers in (1, 2, 4, 8)}
    assert mp.prec == precision
    reference = results[1]
    for value in results.values():
        assert value.real.hex() == reference.real.hex()
        assert value.imag.hex() == reference.imag.hex()


def test_extended_phase_needs_double_precision(true_zeros):
    with pytest.raises(LandauError):
        zero_sum(true_zeros, 2.0, 50.0, extended_phase=True, extended_bits=32)
    assert zero_sum(true_zeros, 2.0, 50.0, extended_phase=True, extended_bits=53) == \
        pytest.approx(zero_sum(true_zeros, 2.0, 50.0), abs=1e-12)


def test_phase_sum_is_bitwise_identical_across_workers(synthetic_zeros):
    T = synthetic_zeros.t_max
    results = {workers: phase_sum(synthetic_zeros, math.log(2), T, workers=workers) for workers in (1, 2, 4, 8)}
    reference = results[1]
    for value in results.values():
        assert value.real.hex() == reference.real.hex()
        assert value.imag.hex() == reference.imag.hex()


def test_phase_sum_conjugates_under_negated_frequency(synthetic_zeros):
    T = synthetic_zeros.t_max
    forward = phase_sum(synthetic_zeros, math.log(3), T, workers=2)
    backward = phase_sum(synthetic_zeros, -math.log(3), T, workers=2)
    assert backward.real == forward.real
    assert backward.imag == -forward.imag


def test_landau_report_fields(true_zeros):
    report = landau_report(true_zeros, 2.0)
    assert report.T == true_zeros.t_max
    assert report.n_obs == true_zeros.count
    assert report.n_x == 2
    assert report.residual == report.sum - report.main_term
    assert report.main_term == pytest.approx(landau_main_term(2.0, report.T) / math.sqrt(2))
    payload = report.to_dict()
    assert set(payload["sum"]) == {"re", "im"}
    assert payload["error_scale_x"] == pytest.approx(2 * math.log(4 * report.T) ** 2)


def test_landau_report_on_empty_table():
    empty = ZeroSet(np.array([]))
    with pytest.raises(InsufficientDataError):
        landau_report(empty, 2.0)
    with pytest.raises(InsufficientDataError):
        landau_report(empty, 2.0, T=10.0)


def test_landau_report_uses_degenerate_threshold(true_zeros):
    x = 2.0 + 1e-6
    wide = landau_report(true_zeros, x, degenerate=2.0 ** -20)
    narrow = landau_report(true_zeros, x, degenerate=2.0 ** -40)
    assert wide.main_term.imag == 0.0
    assert wide.main_term.real == pytest.approx(-wide.T * math.log(2) / (2 * math.pi) / math.sqrt(x), rel=1e-12)
    assert abs(narrow.main_term.imag) > 1e-5


def test_zero_sum_at_non_prime_power(thousand_zeros):
    T = thousand_zeros.t_max
    total = zero_sum(thousand_zeros, 1.5, T)
    assert abs(total) <= 0.05 * T + 500
    report = landau_report(thousand_zeros, 1.5)
    assert report.n_x == 2
    assert abs(report.main_term) <= 2 * (math.log(2) / (2 * math.pi)) / abs(math.log(0.75))


def test_small_x_main_term_tracks_zero_sum(thousand_zeros):
    # the zero density is log(t/2pi)/(2pi), so the sum follows small_x_main_term/(2pi)
    T = thousand_zeros.t_max
    x = math.exp(0.1 / T)
    total = zero_sum(thousand_zeros, x, T)
    assert abs(total - small_x_main_term(x, T) / (2 * math.pi)) <= 2 * T


def test_small_x_main_term_on_real_zeros(real_zeros):
    T = real_zeros.height_of(min(real_zeros.count, 10_000))
    x = math.exp(0.1 / T)
    total = zero_sum(real_zeros, x, T, workers=4)
    assert abs(total - small_x_main_term(x, T) / (2 * math.pi)) <= 2 * T


def test_compensated_sum_accuracy():
    values = np.full(1_000_003, 0.1)
    assert compensated_sum(values, chunk_size=4096) == pytest.approx(math.fsum(values.tolist()), rel=1e-14)
    assert kahan_sum(np.array([1.0, 1e-16, 1e-16, 1e-16, 1e-16])) == 1.0 + 4e-16


def test_compensated_sum_independent_of_workers():
    values = np.random.default_rng(5).standard_normal(200_000)
    sums = {compensated_sum(values, chunk_size=1000, workers=w) for w in (1, 3, 8)}
    assert len(sums) == 1


def test_pairwise_and_chunks():
    assert pairwise_combine([]) == 0.0
    assert pairwise_combine([1.0, 2.0, 3.0]) == 6.0
    assert chunk_bounds(10, 4) == [(0, 4), (4, 8), (8, 10)]


def test_main_term_on_real_zeros(real_zeros):
    T = real_zeros.height_of(min(real_zeros.count, 100_000))
    total = zero_sum(real_zeros, 2.0, T, workers=4)
    assert -0.088 <= total.real / T <= -0.068
    for x in (2, 3, 4, 5, 8, 9):
        value = zero_sum(real_zeros, float(x), T, workers=4) * math.sqrt(x)
        assert abs(value - (-T * von_mangoldt(x) / (2 * math.pi))) <= 0.01 * T * math.sqrt(x)
