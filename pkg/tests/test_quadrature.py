import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roughsupport.quadrature import (LOOSE, TIGHT, Domain, Histogram2D, QuadratureError, QuadratureSpec,
                                     compare_histogram, expected_fractions, fit_report, integrate_1d,
                                     integrate_2d, tv_distance)


def test_one_dimensional_examples():
    assert integrate_1d(lambda x: 1.0, 0, 1) == pytest.approx(1, abs=1e-12)
    assert abs(integrate_1d(math.sin, 0, math.pi) - 2) <= 1e-10
    assert abs(integrate_1d(lambda x: x / (1 + x) ** 3, 0, 1) - 1 / 8) <= 1e-10


def test_two_dimensional_examples():
    area = integrate_2d(lambda x, y: 1.0, 0, math.pi, lambda x: math.pi - x, math.pi)
    assert abs(area - math.pi**2 / 2) <= 1e-8
    assert abs(integrate_2d(lambda x, y: 1.0, -1, 0, 0, 1) - 1) <= 1e-12
    assert abs(integrate_2d(lambda x, y: x * y, 0, 1, 0, 1) - 0.25) <= 1e-10


def test_budget_exhaustion_raises():
    with pytest.raises(QuadratureError):
        integrate_1d(lambda x: math.sin(1 / x) / x, 1e-9, 1, QuadratureSpec(1e-14, 1e-14, 10))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(0, 1e-6)
    with pytest.raises(ValueError):
        QuadratureSpec(1e-6, 1e-6, 3)
    with pytest.raises(ValueError):
        integrate_1d(math.sin, 1, 0)


coef = st.floats(-5, 5, allow_nan=False)


@given(coef, coef, coef, coef, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(a, b, k1, k2, alpha, beta):
    f = lambda x: math.sin(k1 * x) + a * x**2
    g = lambda x: math.exp(-((x - b) ** 2)) + math.cos(k2 * x)
    lhs = integrate_1d(lambda x: alpha * f(x) + beta * g(x), -1, 2)
    rhs = alpha * integrate_1d(f, -1, 2) + beta * integrate_1d(g, -1, 2)
    assert abs(lhs - rhs) <= 10 * 1e-10 * max(1.0, abs(lhs))


@given(st.floats(0.05, math.pi - 0.05), st.floats(math.pi / 2, math.pi))
def test_partition_additivity(cut, y_cut):
    f = lambda x, y: math.exp(-x) * math.cos(y / 3) + x * y
    tri_lo = lambda x: math.pi - x
    whole = integrate_2d(f, 0, math.pi, tri_lo, math.pi)
    left = integrate_2d(f, 0, cut, tri_lo, math.pi)
    right = integrate_2d(f, cut, math.pi, tri_lo, math.pi)
    assert abs(whole - left - right) <= 1e-8
    lower = integrate_2d(f, 0, math.pi, tri_lo, lambda x: max(y_cut, math.pi - x))
    upper = integrate_2d(f, 0, math.pi, lambda x: max(y_cut, math.pi - x), math.pi)
    assert abs(whole - lower - upper) <= 1e-8


def _hist(counts, domain=Domain.INTERVAL_RECT):
    counts = np.asarray(counts)
    return Histogram2D(np.linspace(0, 1, counts.shape[0] + 1), np.linspace(0, 1, counts.shape[1] + 1),
                       counts, domain)


def test_tv_zero_for_exact_counts():
    h = _hist([[10, 30], [20, 40]])
    report = compare_histogram(h, None, expected=np.array([[0.1, 0.3], [0.2, 0.4]]))
    assert report.tv_distance == 0 and report.chi_square == 0


def test_tv_single_bin_against_uniform():
    assert tv_distance([1, 0], [1, 1]) == 0.5
    h = Histogram2D([0, 1, 2], [0, 1], np.array([[7], [0]]))
    assert compare_histogram(h, None, expected=np.array([[0.5], [0.5]])).tv_distance == 0.5


@given(st.permutations(range(9)), st.lists(st.integers(0, 200), min_size=9, max_size=9))
def test_comparison_is_permutation_invariant(perm, counts):
    if sum(counts) == 0:
        counts[0] = 1
    counts = np.array(counts)
    expected = np.linspace(1, 2, 9)
    expected /= expected.sum()
    perm = np.array(perm)
    a = compare_histogram(_hist(counts.reshape(3, 3)), None, expected=expected.reshape(3, 3))
    b = compare_histogram(_hist(counts[perm].reshape(3, 3)), None, expected=expected[perm].reshape(3, 3))
    assert a.tv_distance == pytest.approx(b.tv_distance, abs=1e-15)
    assert a.chi_square == pytest.approx(b.chi_square, rel=1e-12)
    assert a.dof == b.dof


def test_pooling_of_small_bins():
    r = fit_report(np.array([0.5, 0.5, 0, 0]), np.array([0.49, 0.49, 0.01, 0.01]), 100)
    assert r.n_effective_bins == 3 and r.dof == 2
    tiny = fit_report(np.array([1.0, 0.0]), np.array([0.5, 0.5]), 2)
    assert tiny.dof == 0 and math.isnan(tiny.reduced_chi_square)


def test_histogram_validation_and_merge():
    h = _hist([[1, 2], [3, 4]])
    assert h.total == 10
    assert h.merge(h).total == 20
    with pytest.raises(ValueError):
        _hist([[1, -2], [3, 4]])
    with pytest.raises(ValueError):
        Histogram2D([0, 1], [0, 1], np.zeros((2, 2), int))
    with pytest.raises(ValueError):
        h.merge(Histogram2D([0, 2, 3], [0, 1, 2], np.zeros((2, 2), int)))


def test_triangle_bins_clip_to_domain():
    edges = np.linspace(0, math.pi, 5)
    h = Histogram2D(edges, edges, np.zeros((4, 4), int), Domain.THETA_TRIANGLE)
    frac = expected_fractions(h, lambda x, y: 1.0, math.pi**2 / 2, LOOSE)
    assert frac.sum() == pytest.approx(1, abs=1e-8)
    assert frac[0, 0] == 0 and frac[0, 3] > 0
    # diagonal bins hold half a cell
    assert frac[1, 2] == pytest.approx(frac[2, 2] / 2, rel=1e-8)


def test_sampled_density_against_itself():
    # rejection sampling from (x + y) on the unit square, 10^6 draws
    rng = np.random.default_rng(0)
    xs = []
    while sum(len(v) for v in xs) < 10**6:
        x, y, u = rng.random((3, 400_000))
        keep = 2 * u < x + y
        xs.append(np.stack([x[keep], y[keep]], axis=1))
    pts = np.concatenate(xs)[: 10**6]
    edges = np.linspace(0, 1, 11)
    h = Histogram2D.from_samples(pts[:, 0], pts[:, 1], edges, edges)
    report = compare_histogram(h, lambda x, y: x + y, 1.0, TIGHT)
    assert report.tv_distance < 3 * math.sqrt(100 / 10**6)
    assert report.reduced_chi_square < 1.5
