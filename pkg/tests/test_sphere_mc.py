import math

import numpy as np
import pytest

from depthsep.constructor import build_depth3
from depthsep.errors import DomainError
from depthsep.legendre import LegendreFamily
from depthsep.projection import expand
from depthsep.quadrature import gauss_rule
from depthsep.sphere_mc import (
    SphereSampler,
    inner_product_function,
    ks_critical,
    l2_error,
    mc_mean,
    pushforward_check,
    reproducing_check,
    verify_eq3,
)


def e(d, i):
    v = np.zeros(d)
    v[i] = 1.0
    return v


def q_profile(d, j):
    fam = LegendreFamily(d, j)
    return lambda x: fam.eval_orthonormal(np.asarray(x, dtype=float))[j]


@pytest.mark.parametrize("d", [2, 3, 17])
def test_samples_are_unit_vectors(d):
    X = SphereSampler(d, seed=1).sample_batch(10_000)
    assert np.max(np.abs(np.linalg.norm(X, axis=1) - 1)) <= 1e-12
    assert SphereSampler(d).sample().shape == (d,)


def test_streams_reproducible_and_distinct():
    a = SphereSampler(5, seed=3, stream=2).sample_batch(100)
    b = SphereSampler(5, seed=3).stream(2).sample_batch(100)
    c = SphereSampler(5, seed=3, stream=1).sample_batch(100)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, c)


def test_coordinate_moments():
    d, n = 7, 10 ** 6
    X = SphereSampler(d, seed=11).sample_batch(n)
    x1 = X[:, 0]
    assert abs(x1.mean()) <= 4 * x1.std() / math.sqrt(n)
    sq = x1 ** 2
    assert abs(sq.mean() - 1 / d) <= 4 * sq.std() / math.sqrt(n)


def test_l2_error_identical_functions_is_zero():
    F = inner_product_function(np.exp)
    est = l2_error(F, F, 4, 5000)
    assert est.squared.mean == 0.0 and est.norm == 0.0


def test_l2_error_isometry_q1():
    est = l2_error(inner_product_function(q_profile(3, 1)), lambda X, Xp: np.zeros(len(X)), 3, 200_000)
    assert est.squared.within(1.0, 4)


@pytest.mark.parametrize("d", [3, 5, 10])
@pytest.mark.parametrize("name", ["q0", "q1", "q3", "square", "exp"])
def test_isometry_against_quadrature_norm(d, name):
    g = {"q0": q_profile(d, 0), "q1": q_profile(d, 1), "q3": q_profile(d, 3),
         "square": lambda x: x ** 2, "exp": np.exp}[name]
    norm_sq = expand(g, d, 4, gauss_rule(d, 40)).norm_sq_estimate
    est = mc_mean(lambda X, Xp: inner_product_function(g)(X, Xp) ** 2, d, 200_000, seed=d)
    # q0 has zero variance, so allow for rounding on top of the 4-SE band.
    assert abs(est.mean - norm_sq) <= 4 * est.std_error + 1e-12


def test_l2_error_of_depth3_net_below_eps_squared():
    from depthsep.profiles import parse_profile

    built = build_depth3(parse_profile("sine(3)"), 3.0, 3, 0.1)
    est = l2_error(built.net, inner_product_function(parse_profile("sine(3)")), 3, 50_000, seed=9)
    assert est.squared.mean <= 0.1 ** 2


@pytest.mark.parametrize("d", [3, 10])
def test_pushforward_passes(d):
    assert pushforward_check(d, 100_000, seed=1) <= ks_critical(100_000)


def test_pushforward_negative_control():
    assert pushforward_check(3, 100_000, seed=1, reference_d=10) > ks_critical(100_000)


def test_verify_eq3_predictions():
    d = 3
    _, pred = verify_eq3(d, 2, 1, 2, e(d, 0), e(d, 1), n_samples=1000)
    assert pred == 0.0
    _, pred = verify_eq3(5, 3, 3, 3, e(5, 0), e(5, 0), n_samples=1000)
    assert pred == pytest.approx(1 / math.sqrt(30), rel=1e-12)  # N_{5,3} = 30
    est, pred = verify_eq3(d, 2, 2, 2, e(d, 0), e(d, 1), n_samples=10 ** 6, seed=4)
    assert pred == pytest.approx(-0.5 / math.sqrt(5), rel=1e-12)
    assert est.within(pred, 4)


def test_reproducing_property():
    v, vp = e(4, 0), np.array([0.6, 0.8, 0.0, 0.0])
    est, pred = reproducing_check(4, 2, 2, v, vp, n_samples=400_000, seed=2)
    assert pred == pytest.approx(LegendreFamily(4, 2).eval_all(0.6)[2])
    assert est.within(pred, 4)
    est, pred = reproducing_check(4, 1, 3, v, vp, n_samples=400_000, seed=3)
    assert pred == 0.0 and est.within(0.0, 4)


def test_mc_determinism():
    f = lambda X, Xp: np.exp(np.sum(X * Xp, axis=1))  # noqa: E731
    assert mc_mean(f, 6, 150_000, seed=8) == mc_mean(f, 6, 150_000, seed=8)
    assert mc_mean(f, 6, 150_000, seed=8) != mc_mean(f, 6, 150_000, seed=9)


def test_mc_independent_of_chunk_count_up_to_rounding():
    f = lambda X, Xp: np.sum(X * Xp, axis=1) ** 2  # noqa: E731
    # Chunk c always draws from stream c; one chunk of n is stream 0 exactly.
    a = mc_mean(f, 4, 1000, seed=1, chunk=1000)
    X, Xp = SphereSampler(4, 1).stream(0).pairs(1000)
    assert a.mean == pytest.approx(f(X, Xp).mean(), rel=1e-15)


def test_domain_errors():
    with pytest.raises(DomainError):
        SphereSampler(1)
    with pytest.raises(DomainError):
        verify_eq3(30, 1, 1, 1, e(30, 0), e(30, 0))
    with pytest.raises(DomainError):
        verify_eq3(3, 1, 1, 1, np.array([1.0, 1.0, 0.0]), e(3, 0))
    with pytest.raises(DomainError):
        mc_mean(lambda X, Xp: X[:, 0], 3, 1)
