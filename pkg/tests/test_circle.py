import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from roughsupport.circle import (ContactAngles, GapAngles, GapKernelTable, NotAnEquilibriumError,
                                 PlanePlacement, canonicalize, ceiling_overlap_factor,
                                 ceiling_overlap_quadrature, cot_identity_residuals, gap_kernel,
                                 gaps_from_angles, hoop_survival, kernel_table, plane_coefficients,
                                 prob_comb_below_plane, triangle_mass, triple_density)

TWO_PI = 2 * math.pi


@st.composite
def gap_triples(draw, margin=1e-3):
    t1 = draw(st.floats(3 * margin, math.pi - margin))
    t2 = draw(st.floats(math.pi - t1 + margin, math.pi - margin))
    return GapAngles((t1, t2, TWO_PI - t1 - t2))


# ---------------------------------------------------------------------------
# gap triples


def test_gap_examples():
    assert gaps_from_angles((0, TWO_PI / 3, 2 * TWO_PI / 3)) == pytest.approx((TWO_PI / 3,) * 3)
    assert gaps_from_angles((0.3, 1.9, 4.0)) == pytest.approx((2.1, TWO_PI - 4.0 + 0.3, 1.6))
    with pytest.raises(NotAnEquilibriumError):
        gaps_from_angles((0, math.pi / 2, math.pi))
    with pytest.raises(NotAnEquilibriumError):
        ContactAngles((0.0, 4.0, 1.9))


def test_canonicalize():
    eq = GapAngles((TWO_PI / 3,) * 3)
    assert canonicalize(eq) == eq
    t = GapAngles((2.0, 1.5, TWO_PI - 3.5))
    assert canonicalize(t).theta == (1.5, TWO_PI - 3.5, 2.0)


@given(gap_triples())
def test_canonical_form_is_rotation_invariant(theta):
    assert len({canonicalize(r) for r in theta.rotations()}) == 1


# ---------------------------------------------------------------------------
# kernel and density


def test_kernel_table_matches_exact_quadrature():
    table = kernel_table()
    xi = np.linspace(0, math.pi, 997)
    exact = np.array([gap_kernel(x) for x in xi])
    assert np.max(np.abs(table(xi) - exact)) <= 1e-8


def test_kernel_positive_and_increasing():
    xi = np.linspace(0, math.pi, 400)
    f = kernel_table()(xi)
    assert f[0] == pytest.approx(0, abs=1e-14)
    assert np.all(f[1:] > 0) and np.all(np.diff(f) > 0)


def test_coarse_table_is_less_accurate():
    coarse = GapKernelTable(33)
    assert abs(coarse(1.0) - gap_kernel(1.0)) > abs(kernel_table()(1.0) - gap_kernel(1.0))


def test_density_at_equilateral():
    t = TWO_PI / 3
    expected = TWO_PI * (math.sqrt(3) / 2) ** 3 * (1 / math.pi**2 + 3 * gap_kernel(t))
    assert triple_density(t, t, kernel="exact") == pytest.approx(expected, rel=1e-14)
    assert triple_density(t, t) == pytest.approx(expected, rel=1e-9)


@given(gap_triples())
def test_density_cyclic_invariance(theta):
    vals = {triple_density(*r.theta) for r in theta.rotations()}
    assert max(vals) - min(vals) <= 1e-14 * max(vals)


def test_density_vanishes_at_zero_gap():
    s = np.linspace(math.pi - 1e-4, math.pi, 5)
    # theta3 = 2 pi - theta1 - theta2 -> 1e-4 or smaller
    assert np.all(triple_density(s, np.full(5, math.pi), check=False) <= 1e-3)
    assert triple_density(math.pi, math.pi, check=False) == 0


def test_near_maximal_value():
    eps = 1e-3
    near = triple_density(math.pi - eps, math.pi / 2, math.pi / 2 + eps)
    g = np.linspace(0.01, math.pi - 0.01, 150)
    t1, t2 = np.meshgrid(g, g, indexing="ij")
    inside = t1 + t2 > math.pi
    assert near >= triple_density(t1[inside], t2[inside]).max() - 1e-3


def test_grid_argmax_is_z3_image_of_peak():
    n = 400
    g = np.linspace(0, math.pi, n + 1)
    t1, t2 = np.meshgrid(g, g, indexing="ij")
    inside = t1 + t2 >= math.pi - 1e-12
    v = triple_density(t1[inside], t2[inside], check=False)
    best = np.array([t1[inside][np.argmax(v)], t2[inside][np.argmax(v)]])
    images = np.array([(math.pi, math.pi / 2), (math.pi / 2, math.pi), (math.pi / 2, math.pi / 2)])
    assert np.min(np.max(np.abs(images - best), axis=1)) <= math.pi / n + 1e-12


def test_density_rejects_bad_triples():
    with pytest.raises(ValueError):
        triple_density(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        triple_density(3.5, 2.0)


def test_triangle_mass_is_three():
    assert abs(triangle_mass() - 3) <= 1e-3


# ---------------------------------------------------------------------------
# walk survival


def test_hoop_survival_endpoints():
    for mu in (0.5, 0.6, 0.8, 1.0):
        assert hoop_survival(mu) == 0
    assert abs(hoop_survival(0) - 1) <= 1e-4


def test_hoop_survival_decreases():
    vals = [hoop_survival(m) for m in np.linspace(0, 0.5, 21)]
    assert np.all(np.diff(vals) <= 1e-12)


def test_hoop_survival_crossing_near_one_sixth():
    assert hoop_survival(1 / 6 - 0.02) > 0.5 > hoop_survival(1 / 6 + 0.02)


# ---------------------------------------------------------------------------
# planes


def test_plane_coefficient_examples():
    phi = (0.3, 1.9, 4.0)
    p = plane_coefficients(phi, (0, 0, 0))
    assert (p.offset, p.slope_x, p.slope_y) == pytest.approx((0, 0, 0), abs=1e-15)
    p = plane_coefficients(phi, (1, 1, 1))
    assert (p.offset, p.slope_x, p.slope_y) == pytest.approx((1, 0, 0), abs=1e-14)


@given(gap_triples(0.05), st.floats(0, TWO_PI), st.tuples(*[st.floats(0, 5)] * 3))
def test_offset_sine_identity(theta, start, depths):
    t = theta.theta
    # contacts consistent with the gap convention: theta3 = phi2 - phi1, theta1 = phi3 - phi2
    phi = (start, start + t[2], start + t[2] + t[0])
    p = plane_coefficients(phi, depths)
    rhs = sum(a * math.sin(g) for a, g in zip(depths, t))
    assert abs(p.offset * p.sine_sum - rhs) <= 1e-12 * max(1.0, abs(rhs))
    for ang, a in zip(p.phi, depths):
        assert p.depth(ang) == pytest.approx(a, abs=1e-12)


def test_overlap_factor_boundary_and_growth():
    edge = PlanePlacement(1.0, 0.6, 0.8, 1.0, (0, 0, 0), (0, 0, 0))
    assert abs(ceiling_overlap_factor(edge) - 1) <= 1e-12
    offsets = np.linspace(1.0, 0.01, 50)
    vals = [ceiling_overlap_factor(PlanePlacement(s, 1.0, 0.0, 1.0, (0, 0, 0), (0, 0, 0))) for s in offsets]
    assert np.all(np.diff(vals) > 0)
    with pytest.raises(ValueError):
        ceiling_overlap_factor(PlanePlacement(2.0, 1.0, 0.0, 1.0, (0, 0, 0), (0, 0, 0)))


@given(st.floats(0.02, 3), st.floats(1.0 + 1e-9, 20), st.floats(0, TWO_PI))
def test_overlap_factor_matches_defining_integral(offset, ratio, direction):
    tilt = offset * ratio
    p = PlanePlacement(offset, tilt * math.cos(direction), tilt * math.sin(direction), 1.0, (0, 0, 0), (0, 0, 0))
    assert abs(ceiling_overlap_factor(p) - ceiling_overlap_quadrature(p)) <= 1e-8


def test_comb_below_plane_examples():
    phi = (0.3, 1.9, 4.0)
    assert prob_comb_below_plane(plane_coefficients(phi, (0, 0, 0))) == 1
    c = 0.8
    assert prob_comb_below_plane(plane_coefficients(phi, (c, c, c))) == pytest.approx(math.exp(-c), rel=1e-12)


@given(gap_triples(0.05), st.tuples(*[st.floats(0, 4)] * 3))
def test_comb_below_plane_matches_poisson_integral(theta, depths):
    t = theta.theta
    p = plane_coefficients((0.0, t[2], t[2] + t[0]), depths)
    if p.offset <= 1e-3:
        return
    area = TWO_PI * p.offset * ceiling_overlap_quadrature(p)
    assert prob_comb_below_plane(p) == pytest.approx(math.exp(-area / TWO_PI), rel=1e-8)


# ---------------------------------------------------------------------------
# identities


def test_cot_identities_random():
    rng = np.random.default_rng(3)
    n = 0
    while n < 10**4:
        t1, t2 = rng.uniform(0, math.pi, 2)
        if not 0 < TWO_PI - t1 - t2 < math.pi:
            continue
        n += 1
        assert max(map(abs, cot_identity_residuals(GapAngles((t1, t2, TWO_PI - t1 - t2))))) <= 1e-10


def test_cot_identities_near_degenerate():
    t1 = 1e-6
    t2 = math.pi - 1e-7
    assert max(map(abs, cot_identity_residuals(GapAngles((t1, t2, TWO_PI - t1 - t2))))) <= 1e-6
