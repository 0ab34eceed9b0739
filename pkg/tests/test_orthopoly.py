import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsesph import orthopoly as op
from sparsesph import DomainError, ParameterError

from oracles import gram_schmidt_polys


def test_p0_legendre():
    t = op.build_recurrence(0.0, 0)
    assert op.eval_all(t, 0.3)[0] == pytest.approx(0.7071067811865476, abs=1e-15)
    assert gram_schmidt_polys(0, 0, 0.3)[0, 0] == pytest.approx(1 / math.sqrt(2))


def test_p1_legendre_at_half():
    v = op.eval_all(op.build_recurrence(0.0, 1), 0.5)[1]
    assert v == pytest.approx(0.6123724356957945, abs=1e-14)
    assert v == pytest.approx(gram_schmidt_polys(0, 1, 0.5)[1, 0], abs=1e-12)


@pytest.mark.parametrize("t", [0.0, math.pi / 4, math.pi / 2])
def test_chebyshev_ratio_is_cosine(t):
    table = op.build_recurrence(-0.5, 3)
    v = op.eval_all(table, math.cos(t))[2] / op.eval_all(table, 1.0)[2]
    assert v == pytest.approx(math.cos(2 * t), abs=1e-14)


def test_legendre_endpoint_values():
    vals = op.eval_all(op.build_recurrence(0.0, 2), 1.0)
    expected = [math.sqrt((2 * n + 1) / 2) for n in range(3)]
    assert vals == pytest.approx(expected, rel=1e-14)
    assert vals == pytest.approx(gram_schmidt_polys(0, 2, 1.0)[:, 0], rel=1e-10)


def test_odd_degrees_vanish_at_zero():
    vals = op.eval_all(op.build_recurrence(0.0, 15), 0.0)
    assert np.all(vals[1::2] == 0.0)


def test_alpha2_endpoint_symmetry():
    vals = op.eval_all(op.build_recurrence(2.0, 12), np.array([1.0, -1.0]))
    assert np.all(np.isfinite(vals))
    assert np.array_equal(np.abs(vals[:, 0]), np.abs(vals[:, 1]))


def test_recurrence_coefficients_form():
    t = op.build_recurrence(1.5, 6)
    assert np.all(t.offset == 0)
    assert t.leading.shape == (6,) and t.lag.shape == (6,)
    assert t.norm0 == pytest.approx(1 / math.sqrt(op.weight_mass(1.5)))


@pytest.mark.parametrize("bad", [-1.0, -2.0, math.nan, math.inf])
def test_invalid_alpha(bad):
    with pytest.raises(ParameterError):
        op.build_recurrence(bad, 3)


def test_domain_error():
    with pytest.raises(DomainError):
        op.eval_all(op.build_recurrence(0.0, 3), 1.0001)


def test_gauss_legendre_small_rules():
    r1 = op.gauss_legendre_rule(1)
    assert list(r1.nodes) == [0.0] and list(r1.weights) == [2.0]
    r2 = op.gauss_legendre_rule(2)
    assert r2.nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)], abs=1e-15)
    assert r2.weights == pytest.approx([1.0, 1.0], abs=1e-15)
    assert r2.exact_degree == 3
    with pytest.raises(ParameterError):
        op.gauss_legendre_rule(0)


@pytest.mark.parametrize("n", [3, 10, 33, 64, 128, 257])
def test_gauss_legendre_against_numpy(n):
    rule = op.gauss_legendre_rule(n)
    x, w = np.polynomial.legendre.leggauss(n)
    assert rule.nodes == pytest.approx(x, abs=1e-14)
    # endpoint weights carry ~1e-10 relative error in double precision (numpy too)
    assert rule.weights == pytest.approx(w, rel=1e-9, abs=1e-15)
    assert abs(rule.weights.sum() - 2.0) <= 1e-12


@pytest.mark.parametrize("n", [1, 4, 20, 64])
def test_gauss_legendre_moments(n):
    rule = op.gauss_legendre_rule(n)
    for d in range(rule.exact_degree + 1):
        exact = 0.0 if d % 2 else 2.0 / (d + 1)
        assert rule.integrate(rule.nodes**d) == pytest.approx(exact, rel=1e-12, abs=1e-14)


def test_orthonormality_examples():
    assert op.check_orthonormality(op.build_recurrence(0.0, 20), op.gauss_legendre_rule(64)) <= 1e-10
    assert op.check_orthonormality(op.build_recurrence(1.0, 10), op.gauss_legendre_rule(64)) <= 1e-10
    assert op.check_orthonormality(op.build_recurrence(0.7, 0)) <= 1e-14


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0, 3.0, 5.0])
def test_orthonormality_invariant(alpha):
    table = op.build_recurrence(alpha, 20)
    rule = None if not float(alpha).is_integer() else op.gauss_legendre_rule(128)
    assert op.check_orthonormality(table, rule) <= 1e-8


def test_probability_normalized_orthonormality():
    assert op.check_orthonormality(op.build_recurrence(2.5, 15, True)) <= 1e-10


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.sampled_from([0.0, 0.5, 1.0, 3.0, 7.5]))
def test_parity(x, alpha):
    t = op.build_recurrence(alpha, 25)
    v, w = op.eval_all(t, x), op.eval_all(t, -x)
    sign = (-1.0) ** np.arange(26)
    assert np.allclose(w, sign * v, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 4.0])
def test_recurrence_matches_gram_schmidt(alpha):
    x = np.linspace(-1, 1, 41)
    ours = op.eval_all(op.build_recurrence(alpha, 15), x)
    ref = gram_schmidt_polys(alpha, 15, x)
    assert np.max(np.abs(ours - ref)) <= 1e-8


def test_legendre_bound_examples():
    assert op.weighted_sup(0.0, 10) <= op.LEGENDRE_BOUND
    v = op.weighted_sup(0.0, 200, probability_normalized=True)
    assert 0.95 * op.LEGENDRE_BOUND <= v <= op.LEGENDRE_BOUND


def test_legendre_bound_all_degrees():
    for norm in (False, True):
        assert op.weighted_sups(0.0, 200, 4096, norm).max() <= op.LEGENDRE_BOUND + 1e-9


def test_unnormalized_legendre_limit():
    # measure dx: the weighted sup approaches sqrt(2/pi), well below 2/sqrt(pi)
    assert op.weighted_sup(0.0, 200) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-4)


def test_grid_size_precondition():
    with pytest.raises(ParameterError):
        op.weighted_sup(0.0, 3, grid_size=500)


def test_ultraspherical_ratio_stable():
    def max_ratio(n_max):
        return max(
            np.max(op.weighted_sups(a, n_max)[1:] / op.ultraspherical_envelope(a, np.arange(1, n_max + 1)))
            for a in range(3, 21)
        )

    r50, r100 = max_ratio(50), max_ratio(100)
    assert np.isfinite(r50)
    assert r100 <= 1.01 * r50
    # single point from the ultraspherical example, below the grid-wide max
    assert op.weighted_sup(3.0, 5) / op.ultraspherical_envelope(3.0, 5) <= r50


def test_chebyshev_uniform_bound():
    t = op.build_recurrence(-0.5, 8, probability_normalized=True)
    vals = np.abs(op.eval_all(t, op.chebyshev_grid(4096)))
    assert vals[0].max() == pytest.approx(1.0)
    assert vals[1:].max(axis=1) == pytest.approx(math.sqrt(2), abs=1e-12)
