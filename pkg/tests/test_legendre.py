import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from depthsep.errors import DomainError
from depthsep.legendre import LegendreFamily, recurrence_coefficients
from depthsep.quadrature import orthonormal_by_recurrence


def test_eval_all_examples():
    assert np.all(LegendreFamily(5, 12).eval_all(1.0) == pytest.approx(1.0, abs=1e-12))
    assert LegendreFamily(7, 3).eval_all(0.3)[1] == 0.3
    assert LegendreFamily(4, 2).eval_all(0.5)[2] == pytest.approx(0.0, abs=1e-15)


@given(st.integers(3, 60), st.floats(-1, 1))
def test_second_degree_closed_form(d, x):
    assert LegendreFamily(d, 2).eval_all(x)[2] == pytest.approx((d * x * x - 1) / (d - 1), abs=1e-14)


def test_classical_legendre_at_d3():
    x = np.linspace(-1, 1, 41)
    P = LegendreFamily(3, 8).eval_all(x)
    for n in range(9):
        ref = np.polynomial.legendre.legval(x, [0] * n + [1])
        assert np.allclose(P[n], ref, atol=1e-13)


def test_eval_orthonormal_examples():
    q = LegendreFamily(3, 10).eval_orthonormal(1.0)
    assert np.allclose(q, np.sqrt(2 * np.arange(11) + 1), rtol=1e-13)
    assert LegendreFamily(9, 4).eval_orthonormal(0.37)[0] == 1.0
    assert LegendreFamily(3, 1).eval_orthonormal(0.0)[1] == 0.0


def test_orthonormal_overflow_safe():
    fam = LegendreFamily(400, 300)
    q = fam.eval_orthonormal(np.array([0.0, 0.05, 1.0]))
    assert np.all(np.isfinite(q[:, :2]))
    assert q[-1, 2] == math.inf or math.isfinite(q[-1, 2])


def test_recurrence_examples():
    b = recurrence_coefficients(3, 2).off_diagonal
    assert b[0] == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    assert b[1] == pytest.approx(2 / math.sqrt(15), rel=1e-14)
    assert recurrence_coefficients(2, 1).off_diagonal[0] == pytest.approx(1 / math.sqrt(2), rel=1e-14)


@pytest.mark.parametrize("d", [2, 3, 5, 10, 100])
def test_recurrence_coefficients_in_unit_interval(d):
    b = recurrence_coefficients(d, 200).off_diagonal
    assert np.all((b > 0) & (b < 1))
    assert 0.4 <= b[199] <= 0.6


@pytest.mark.parametrize("d", [3, 4, 7, 25])
def test_reconstruction_property(d):
    K = 30
    x = np.linspace(-1, 1, 100)
    fam = LegendreFamily(d, K + 1)
    q = fam.eval_orthonormal(x)
    sup = np.sqrt(np.exp(fam.log_norms()))  # max |q_k| = q_k(1)
    b = recurrence_coefficients(d, K + 1).off_diagonal
    for k in range(K + 1):
        rhs = b[k] * q[k + 1] + (b[k - 1] * q[k - 1] if k else 0.0)
        assert np.max(np.abs(x * q[k] - rhs)) <= 1e-9 * sup[k + 1]


@pytest.mark.parametrize("d", [3, 5, 10, 25])
def test_two_routes_to_orthonormal_family(d):
    x = np.linspace(-1, 1, 57)
    a = LegendreFamily(d, 40).eval_orthonormal(x)
    b = orthonormal_by_recurrence(d, 40, x)
    assert np.allclose(a, b, rtol=1e-9, atol=1e-9 * np.abs(a).max())


@pytest.mark.parametrize("d", [3, 5, 10, 25])
def test_sup_norm_is_one(d):
    P = LegendreFamily(d, 50).eval_all(np.linspace(-1, 1, 10_000))
    assert np.max(np.abs(P)) <= 1 + 1e-9


def test_domain_errors():
    with pytest.raises(DomainError):
        LegendreFamily(2, 2)
    with pytest.raises(DomainError):
        LegendreFamily(3, 2).eval_all(1.0001)
    with pytest.raises(DomainError):
        recurrence_coefficients(3, 0)
    assert LegendreFamily(2, 1).eval_all(0.25)[1] == 0.25
