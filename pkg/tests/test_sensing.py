import math

import numpy as np
import pytest

from sparsesph import sensing, spherical
from sparsesph import ParameterError
from sparsesph.spherical import HarmonicIndex, SpherePoint


def test_sampling_deterministic():
    for tag in sensing.MEASURES:
        a = sensing.sample_points(50, tag, 123)
        b = sensing.sample_points(50, tag, 123)
        assert np.array_equal(a.phi, b.phi) and np.array_equal(a.theta, b.theta)
        assert not np.array_equal(a.phi, sensing.sample_points(50, tag, 124).phi)


def test_sampling_ranges():
    for tag in sensing.MEASURES:
        s = sensing.sample_points(10_000, tag, 1)
        assert np.all((s.phi >= 0) & (s.phi <= math.pi))
        assert np.all((s.theta >= 0) & (s.theta < 2 * math.pi))


def test_sampling_errors():
    with pytest.raises(ParameterError):
        sensing.sample_points(0, "product", 0)
    with pytest.raises(ParameterError):
        sensing.sample_points(5, "uniform", 0)


def test_product_measure_mean():
    m = 10**5
    s = sensing.sample_points(m, "product", 2)
    se = (math.pi / math.sqrt(12)) / math.sqrt(m)
    assert abs(s.phi.mean() - math.pi / 2) <= 3 * se


def test_surface_measure_mean_cos():
    m = 10**5
    s = sensing.sample_points(m, "surface", 2)
    se = (1 / math.sqrt(3)) / math.sqrt(m)
    assert abs(np.cos(s.phi).mean()) <= 3 * se


def test_measures_differ_near_poles():
    # the product measure puts mass 2/pi * ... near the poles; surface puts ~ phi^2/2
    cap = 0.1
    p = sensing.sample_points(10**5, "product", 4)
    s = sensing.sample_points(10**5, "surface", 4)
    assert np.mean(p.phi < cap) == pytest.approx(cap / math.pi, abs=3e-3)
    assert np.mean(s.phi < cap) == pytest.approx((1 - math.cos(cap)) / 2, abs=1e-3)


def test_ensemble_d1():
    s = sensing.sample_points(40, "product", 9)
    ens = sensing.build_ensemble(1, s)
    expected = math.sqrt(2 * math.pi**2 / 40) * np.sqrt(np.sin(s.phi)) / math.sqrt(4 * math.pi)
    assert np.allclose(ens.normalized[:, 0], expected, rtol=1e-14, atol=0)


def test_ensemble_entries_bitwise():
    s = sensing.sample_points(12, "surface", 10)
    ens = sensing.build_ensemble(5, s)
    for j, pt in enumerate(s.points()):
        for i in (0, 3, 7, 12, 20, 24):
            assert ens.phi_matrix[j, i] == spherical.eval_Y(spherical.from_linear(i), pt)


def test_normalized_equals_preconditioned_q():
    s = sensing.sample_points(25, "product", 11)
    ens = sensing.build_ensemble(6, s)
    assert np.all((ens.precond_diag >= 0) & (ens.precond_diag <= 1))
    rng = np.random.default_rng(0)
    for _ in range(40):
        j, i = int(rng.integers(25)), int(rng.integers(36))
        q = spherical.eval_Q(spherical.from_linear(i), SpherePoint(float(s.phi[j]), float(s.theta[j])))
        assert abs(ens.normalized[j, i] * math.sqrt(25) / (math.pi * math.sqrt(2)) - q) <= 1e-12


def test_normalized_entries_bounded_by_q_sup():
    D = 10
    ens = sensing.build_ensemble(D, sensing.sample_points(500, "product", 12))
    # sup over the sphere of |Q| for l < D, on the dense grid
    K = math.pi * math.sqrt(2) * spherical.q_sup_norms(D - 1).max()
    assert np.max(np.abs(ens.normalized)) * math.sqrt(ens.m) <= K * (1 + 1e-6)
    # Q sup grows like N^(1/8); the empirical constant at D = 10
    C = spherical.q_sup_norms(D - 1).max() / (D * D) ** 0.125
    assert 0.1 < C < 1.0


def test_measurements_shape_check():
    ens = sensing.build_ensemble(2, sensing.sample_points(5, "product", 0))
    with pytest.raises(ParameterError):
        ens.measurements(np.zeros(4))


def test_expected_gram_d1_scalar():
    # entry = (2 pi^2 / m) sum sin(phi_j) / (4 pi) -> 2 pi^2 * (2/pi) / (4 pi) = 1
    s = sensing.sample_points(10**6, "product", 5)
    entry = 2 * math.pi**2 * np.mean(np.sin(s.phi)) / (4 * math.pi)
    dev = sensing.expected_gram_check(1, 10**6, 5)
    assert dev == pytest.approx(abs(entry - 1), abs=1e-12)
    assert dev <= 5e-3


@pytest.mark.slow
def test_expected_gram_d3():
    D, m = 3, 10**6
    K = math.pi * math.sqrt(2) * spherical.q_sup_norms(D - 1).max()
    dev = sensing.expected_gram_check(D, m, 7)
    assert dev <= 10 * math.sqrt(K**4 / m)


def test_expected_gram_scaling():
    small = np.mean([sensing.expected_gram_check(2, 4000, s) for s in range(10)])
    large = np.mean([sensing.expected_gram_check(2, 16000, s) for s in range(10)])
    # quadrupling m halves the deviation on average
    assert 1.4 <= small / large <= 2.8


@pytest.mark.slow
def test_gram_convergence_by_measure():
    m = 10**6
    assert sensing.expected_gram_check(2, m, 1, "surface", precondition=False) <= 0.02
    assert sensing.expected_gram_check(2, m, 1, "product", precondition=False) >= 0.1
    assert sensing.expected_gram_check(2, m, 1, "product", precondition=True) <= 0.02


def test_samples_csv_round_trip(tmp_path):
    s = sensing.sample_points(20, "surface", 3)
    path = tmp_path / "pts.csv"
    sensing.write_samples(s, path)
    assert path.read_text().splitlines()[0] == "phi,theta"
    back = sensing.read_samples(path, "surface", 3)
    assert np.array_equal(back.phi, s.phi) and np.array_equal(back.theta, s.theta)


def test_derive_seed_order_independent():
    a = [sensing.derive_seed(1, 2, t) for t in range(5)]
    b = [sensing.derive_seed(1, 2, t) for t in reversed(range(5))][::-1]
    assert a == b and len(set(a)) == 5
