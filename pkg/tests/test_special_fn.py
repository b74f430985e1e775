import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from depthsep.errors import DomainError
from depthsep.special_fn import LogNumber, dimension_exact, log_gamma, log_N, logsumexp2


@pytest.mark.parametrize("x, expected", [
    (1.0, 0.0),
    (0.5, 0.5723649429247001),
    (10.0, math.log(362880)),
])
def test_log_gamma_examples(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-13)


@given(st.floats(min_value=1e-3, max_value=1e6))
def test_log_gamma_matches_mpmath(x):
    ref = float(mpmath.loggamma(mpmath.mpf(x)))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.nan])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_log_N_examples():
    assert log_N(7, 0).log_abs == 0.0
    assert log_N(5, 1).log_abs == pytest.approx(math.log(5), abs=1e-14)
    assert log_N(3, 7).log_abs == pytest.approx(math.log(15), abs=1e-14)


def test_dimension_exact_small_values():
    assert [dimension_exact(3, n) for n in range(5)] == [1, 3, 5, 7, 9]
    assert dimension_exact(2, 4) == 2
    assert dimension_exact(6, 4) == 105


@given(st.integers(2, 50), st.integers(0, 40))
def test_log_N_matches_big_integers(d, n):
    exact = dimension_exact(d, n)
    assert log_N(d, n).log_abs == pytest.approx(math.log(exact), abs=1e-11)


@given(st.integers(3, 300), st.integers(1, 500))
def test_log_N_increasing_in_n(d, n):
    assert log_N(d, n + 1).log_abs > log_N(d, n).log_abs


def test_log_N_huge_arguments_stay_finite():
    v = log_N(1000, 10 ** 6)
    assert math.isfinite(v.log_abs) and v.log_abs > 700
    assert v.to_float() == math.inf


@pytest.mark.parametrize("d, n", [(1, 0), (3, -1), (2.5, 1)])
def test_log_N_domain(d, n):
    with pytest.raises(DomainError):
        log_N(d, n)


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda v: abs(v) > 1e-6 or v == 0)


@given(finite, finite)
def test_lognumber_arithmetic(a, b):
    A, Bn = LogNumber.from_float(a), LogNumber.from_float(b)
    assert (A * Bn).to_float() == pytest.approx(a * b, rel=1e-12, abs=1e-300)
    assert (A + Bn).to_float() == pytest.approx(a + b, rel=1e-9, abs=1e-9)
    assert (A - Bn).to_float() == pytest.approx(a - b, rel=1e-9, abs=1e-9)
    if b != 0:
        assert (A / Bn).to_float() == pytest.approx(a / b, rel=1e-12)
    assert (A < Bn) == (a < b)


def test_lognumber_zero_and_sqrt():
    z = LogNumber.from_float(0.0)
    assert z.sign == 0 and z.log_abs == -math.inf and z.to_float() == 0.0
    assert LogNumber.from_float(16.0).sqrt().to_float() == pytest.approx(4.0)
    with pytest.raises(DomainError):
        LogNumber.from_float(-4.0).sqrt()


def test_lognumber_log2():
    assert LogNumber.from_float(1024.0).log2_abs == pytest.approx(10.0)


def test_logsumexp2():
    assert logsumexp2(1000.0, 1000.0) == pytest.approx(1000.0 + math.log(2))
    assert logsumexp2(-math.inf, 3.0) == 3.0
