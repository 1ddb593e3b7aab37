import math

import pytest
from hypothesis import given, settings, strategies as st

from qrstats.arith import jacobi
from qrstats.charsums import (
    burgess_exponent,
    burgess_report,
    burgess_sweep,
    default_sweep_length,
    incomplete_char_sum,
    rough_char_sum,
    rough_error_scale,
    rough_partition,
)
from qrstats.errors import (
    InvalidModulusError,
    ParameterError,
    PerfectSquareModulusError,
)
from qrstats.sieve import rough_set

odd_moduli = st.integers(min_value=1, max_value=49).map(lambda k: 2 * k + 1)


@given(st.integers(min_value=0, max_value=300), odd_moduli)
def test_incomplete_sum_matches_brute_force(M, q):
    assert incomplete_char_sum(M, q) == sum(jacobi(m, q) for m in range(1, M + 1))


def test_incomplete_sum_pinned():
    assert incomplete_char_sum(966, 30021) == -14


def test_full_period_sums():
    # one period cancels unless q is a square, where the symbol is the
    # coprimality indicator and the period sum is phi(q)
    assert incomplete_char_sum(15, 15) == 0
    assert incomplete_char_sum(30021, 30021) == 0
    assert incomplete_char_sum(9, 9) == 6
    assert incomplete_char_sum(225, 225) == 120


@given(odd_moduli, st.integers(min_value=0, max_value=40), st.integers(min_value=0, max_value=3))
def test_period_reuse_consistent(q, rem, full):
    M = full * q + rem
    direct = sum(jacobi(m, q) for m in range(1, M + 1))
    assert incomplete_char_sum(M, q) == direct


def test_incomplete_sum_validates():
    with pytest.raises(InvalidModulusError):
        incomplete_char_sum(10, 8)
    with pytest.raises(InvalidModulusError):
        incomplete_char_sum(10, 1)
    with pytest.raises(ParameterError):
        incomplete_char_sum(-1, 9)


def test_burgess_exponents():
    assert burgess_exponent(1) == 0.5
    assert burgess_exponent(2) == 3 / 16
    assert burgess_exponent(3) == 1 / 9
    with pytest.raises(ParameterError):
        burgess_exponent(0)


def test_burgess_report_basic():
    rep = burgess_report(100, 1003, nu=2)
    assert rep.sum == incomplete_char_sum(100, 1003)
    assert rep.benchmark == pytest.approx(100**0.5 * 1003 ** (3 / 16))
    assert rep.ratio == pytest.approx(abs(rep.sum) / rep.benchmark)
    assert not rep.nu_beyond_classical


def test_burgess_report_rejects_square_modulus():
    with pytest.raises(PerfectSquareModulusError):
        burgess_report(100, 225)


def test_burgess_report_flags_large_nu():
    assert burgess_report(100, 1003, nu=5).nu_beyond_classical
    assert not burgess_report(100, 1003, nu=3).nu_beyond_classical


def test_default_sweep_length():
    assert default_sweep_length(1000) == 100
    assert default_sweep_length(10**6) == 10**4


def test_burgess_sweep_deterministic():
    a = burgess_sweep(20, 10**4, 10**6, nu=2, seed=7)
    b = burgess_sweep(20, 10**4, 10**6, nu=2, seed=7)
    assert [r.q for r in a.reports] == [r.q for r in b.reports]
    assert a.max_ratio == b.max_ratio and a.median_ratio == b.median_ratio


def test_burgess_sweep_seed1_head():
    s = burgess_sweep(5, 10**4, 10**6, nu=2, seed=1)
    assert [r.q for r in s.reports] == [550629, 291743, 287175, 908311, 692183]
    for r in s.reports:
        assert r.M == default_sweep_length(r.q)


def test_burgess_sweep_explicit_M():
    s = burgess_sweep(5, 10**4, 10**6, nu=2, seed=1, M=500)
    assert all(r.M == 500 for r in s.reports)


def test_burgess_sweep_validates():
    with pytest.raises(ParameterError):
        burgess_sweep(0, 10, 100)
    with pytest.raises(ParameterError):
        burgess_sweep(5, 2, 100)
    with pytest.raises(ParameterError):
        burgess_sweep(5, 100, 102)


def test_rough_partition_example():
    part = rough_partition(0.5, 30, 7)
    assert (part.count_plus, part.count_minus, part.count_zero) == (4, 3, 1)
    assert part.total == rough_set(0.5, 30).count
    assert part.deviation_plus == pytest.approx(part.count_plus - part.main_term)
    assert part.ratio_plus == pytest.approx(part.deviation_plus / part.error_scale)


def test_rough_partition_precomputed_must_match():
    rs = rough_set(0.5, 30)
    same = rough_partition(0.5, 30, 7, rough=rs)
    assert same.count_plus == 4
    with pytest.raises(ParameterError):
        rough_partition(0.5, 40, 7, rough=rs)


def test_rough_char_sum_example():
    assert rough_char_sum(0.5, 30, 7) == 1


@settings(deadline=None)
@given(
    st.sampled_from([0.3, 0.5, 0.7]),
    st.integers(min_value=10, max_value=200),
    st.sampled_from([7, 11, 15, 21, 33]),
)
def test_rough_partition_identity(eta, M, q):
    rs = rough_set(eta, M)
    part = rough_partition(eta, M, q, rough=rs)
    assert part.total == rs.count
    assert part.count_plus - part.count_minus == rough_char_sum(eta, M, q, rough=rs)


def test_rough_char_sum_rejects_square_modulus():
    with pytest.raises(PerfectSquareModulusError):
        rough_char_sum(0.5, 30, 9)


def test_rough_error_scale():
    got = rough_error_scale(0.25, 100)
    assert got == pytest.approx(0.25 ** (2 / 4 - 1) * 100 / math.log(100))
    with pytest.raises(ParameterError):
        rough_error_scale(1.5, 100)
    with pytest.raises(ParameterError):
        rough_error_scale(0.5, 1)
