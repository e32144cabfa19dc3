import math

import numpy as np
import pytest

pyptc = pytest.importorskip("pyptc")


def test_closed_forms():
    assert pyptc.uniform_entropy([(0.0, 1.0)] * 5) == pytest.approx(0.0)
    assert pyptc.gaussian_entropy(np.eye(5)) == pytest.approx(7.094692666023363)
    assert pyptc.student_t_entropy(1.0) == pytest.approx(math.log(4 * math.pi))


def test_sampling_is_deterministic():
    spec = pyptc.gaussian_spec([0.0, 0.0])
    a = pyptc.sample(spec, 100, seed=7)
    b = pyptc.sample(spec, 100, seed=7)
    assert a.shape == (100, 2)
    np.testing.assert_array_equal(a, b)
    assert pyptc.true_entropy(spec) == pytest.approx(1 + math.log(2 * math.pi))


def test_histogram_pipeline():
    spec = pyptc.uniform_spec([(0.0, 1.0)] * 2)
    samples = pyptc.sample(spec, 2000, seed=1)
    grid = pyptc.grid_from_samples(samples, bins_per_dim=10)
    hist = pyptc.build_histogram(samples, grid)
    assert hist.total_samples == 2000
    assert hist.outside == 0
    assert 0 < hist.occupancy() <= 1
    # uniform entropy over roughly the unit square
    assert hist.entropy() == pytest.approx(0.0, abs=0.15)


def test_fit_and_entropy_near_truth():
    spec = pyptc.gaussian_spec([0.0, 0.0, 0.0])
    samples = pyptc.sample(spec, 5000, seed=3)
    grid = pyptc.grid_from_samples(samples, bins_per_dim=20)
    hist = pyptc.build_histogram(samples, grid)
    fit = pyptc.fit_poisson_cp(hist, rank=2, seed=3)
    assert fit.outer_iterations >= 1
    trace = fit.loglik_trace
    assert all(b >= a - 1e-8 for a, b in zip(trace, trace[1:]))

    density = pyptc.ptc_density(fit.model, grid)
    truth = pyptc.true_entropy(spec)
    assert density.entropy() == pytest.approx(truth, abs=0.35)

    report = density.entropy_thresholded(1e-4)
    assert report.entropy_estimate == pytest.approx(density.entropy(), abs=1e-2)
    assert report.retained_terms <= report.total_terms
    assert 0.0 <= report.retained_mass_fraction <= 1.0


def test_mixture_constraint_raises():
    with pytest.raises(Exception):
        pyptc.equidistant_mixture(5, 3)


def test_knn_entropy():
    spec = pyptc.gaussian_spec([0.0, 0.0])
    samples = pyptc.sample(spec, 5000, seed=11)
    assert pyptc.knn_entropy(samples, 5) == pytest.approx(2.8379, abs=0.15)


def test_scott_width():
    assert pyptc.scott_width(2500, 6, 3.5) == pytest.approx(1.31621, abs=1e-4)
