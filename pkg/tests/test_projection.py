import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthsep.bounds import sine_lemma_bound
from depthsep.errors import DomainError
from depthsep.legendre import LegendreFamily
from depthsep.projection import (
    ResolutionWarning,
    best_poly_error_oracle,
    expand,
    residual,
    sine_lemma_min_dimension,
    sine_lemma_profile,
)
from depthsep.quadrature import gauss_rule


def q_profile(d, j):
    fam = LegendreFamily(d, j)
    return lambda x: fam.eval_orthonormal(np.asarray(x, dtype=float))[j]


def test_constant_profile():
    e = expand(lambda x: np.ones_like(x), 5, 6)
    assert e.coefficients[0] == pytest.approx(1.0, abs=1e-14)
    assert np.allclose(e.coefficients[1:], 0.0, atol=1e-14)
    assert e.norm_sq_estimate == pytest.approx(1.0, abs=1e-14)


def test_identity_profile_d3():
    e = expand(lambda x: x, 3, 5)
    ref = np.zeros(6)
    ref[1] = 1 / math.sqrt(3)
    assert np.allclose(e.coefficients, ref, atol=1e-14)


def test_square_profile_d3():
    e = expand(lambda x: x ** 2, 3, 5)
    ref = np.zeros(6)
    ref[0], ref[2] = 1 / 3, (2 / 3) / math.sqrt(5)
    assert np.allclose(e.coefficients, ref, atol=1e-14)
    assert residual(e, 2) == pytest.approx(2 / (3 * math.sqrt(5)), abs=1e-12)


def test_basis_function_residuals():
    e = expand(q_profile(7, 5), 7, 8)
    assert residual(e, 5) == pytest.approx(1.0, abs=1e-12)
    assert residual(e, 6) == pytest.approx(0.0, abs=1e-8)


def test_oracle_examples():
    assert best_poly_error_oracle(q_profile(6, 3), 6, 2) == pytest.approx(1.0, abs=1e-10)
    assert best_poly_error_oracle(lambda x: x ** 2, 3, 1) == pytest.approx(4 / 45, abs=1e-12)
    g = sine_lemma_profile(100, 10)
    assert best_poly_error_oracle(g, 100, 5, n_nodes=600) >= sine_lemma_bound(10, 5)


profiles = {
    "exp": np.exp,
    "sin2": lambda x: np.sin(2 * x),
    "rational": lambda x: 1 / (3 + x),
    "gauss": lambda x: np.exp(-4 * x * x),
    "cubic": lambda x: x ** 3 - 0.5 * x,
}


@pytest.mark.parametrize("name", sorted(profiles))
@pytest.mark.parametrize("d", [3, 10, 100])
def test_two_path_agreement(name, d):
    g = profiles[name]
    rule = gauss_rule(d, 120)
    for k in (0, 1, 4, 9, 20):
        a = residual(expand(g, d, k + 1, rule), k + 1) ** 2
        assert a == pytest.approx(best_poly_error_oracle(g, d, k, n_nodes=120), abs=1e-7)


@given(st.integers(3, 40), st.lists(st.floats(-3, 3), min_size=1, max_size=8))
@settings(max_examples=50)
def test_bessel_parseval_monotone(d, coeffs):
    p = np.polynomial.Polynomial(coeffs)
    deg = len(coeffs) - 1
    N = deg + 3
    e = expand(p, d, N, gauss_rule(d, N + 2))
    total = math.fsum(a * a for a in e.coefficients)
    assert total <= e.norm_sq_estimate + 1e-8
    assert total == pytest.approx(e.norm_sq_estimate, abs=1e-8)
    r = e.residuals()
    assert np.all(np.diff(r) <= 1e-12)
    assert r[deg + 1] == pytest.approx(0.0, abs=1e-6)


def test_bessel_for_non_polynomial():
    e = expand(np.abs, 10, 12, gauss_rule(10, 80))
    assert math.fsum(a * a for a in e.coefficients) <= e.norm_sq_estimate + 1e-8


def test_abs_has_only_even_coefficients():
    e = expand(np.abs, 10, 15, gauss_rule(10, 100))
    assert np.allclose(e.coefficients[1::2], 0.0, atol=1e-13)
    assert np.all(np.abs(e.coefficients[0::2][:4]) > 1e-3)


def test_sine_lemma_min_dimension_reports_a_dimension():
    d = sine_lemma_min_dimension(10, 5, [20, 50, 100])
    assert d in (20, 50, 100)


def test_under_resolution_warning():
    g = sine_lemma_profile(100, 20)
    with pytest.warns(ResolutionWarning):
        expand(g, 100, 2, gauss_rule(100, 20))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        expand(np.exp, 10, 5)


def test_errors():
    with pytest.raises(DomainError):
        expand(np.exp, 5, 10, gauss_rule(5, 4))
    with pytest.raises(DomainError):
        expand(np.exp, 5, 2, gauss_rule(6, 4))
    e = expand(np.exp, 5, 3)
    with pytest.raises(IndexError):
        residual(e, 5)
    with pytest.raises(DomainError):
        best_poly_error_oracle(np.exp, 5, -1)
