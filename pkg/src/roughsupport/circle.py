"""Closed-form support laws for a rigid hoop on a fine circular random comb.

A hoop resting on three teeth at polar angles ``phi = (phi1, phi2, phi3)``
(counter-clockwise) is described up to rotation by the gap triple
``theta``: ``theta_i`` is the arc between the two contacts other than
``i``, so ``theta_1 = phi3 - phi2``, ``theta_2 = phi1 - phi3 + 2 pi`` and
``theta_3 = phi2 - phi1``.  The hoop is in equilibrium iff every gap is
below ``pi``.  Densities on gap triples are taken with respect to
``d theta_1 d theta_2`` on the full triangle, where they integrate to 3
(each unlabelled configuration appears under three cyclic labellings).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .quadrature import TIGHT, QuadratureSpec, integrate_1d, integrate_2d

TWO_PI = 2.0 * math.pi
_EPS = 1e-12


class NotAnEquilibriumError(ValueError):
    """Contact angles whose triangle does not contain the hoop centre."""


def _gaps(phi):
    phi = np.asarray(phi, dtype=float)
    p1, p2, p3 = phi[..., 0], phi[..., 1], phi[..., 2]
    return np.stack([np.mod(p3 - p2, TWO_PI), np.mod(p1 - p3, TWO_PI), np.mod(p2 - p1, TWO_PI)], axis=-1)


def gaps_from_angles(phi) -> tuple:
    """Gap triple of three contact angles given in counter-clockwise order."""
    g = _gaps(phi)
    if abs(g.sum() - TWO_PI) > 1e-9:
        raise NotAnEquilibriumError(f"contact angles {tuple(phi)} are not in counter-clockwise order")
    if np.any(g <= 0) or np.any(g >= math.pi):
        raise NotAnEquilibriumError(f"gaps {tuple(g)} must all lie strictly between 0 and pi")
    return tuple(float(v) for v in g)


def gaps_array(phi: np.ndarray) -> np.ndarray:
    """Unchecked vectorised :func:`gaps_from_angles` over rows of ``phi``."""
    return _gaps(phi)


@dataclass(frozen=True)
class GapAngles:
    """Equilibrium gap triple: each gap in ``(0, pi)``, summing to ``2 pi``."""

    theta: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.theta)
        if len(t) != 3:
            raise ValueError("a gap triple has three entries")
        if any(not 0 < v < math.pi for v in t):
            raise NotAnEquilibriumError(f"gaps {t} must all lie strictly between 0 and pi")
        if abs(sum(t) - TWO_PI) > _EPS * 10:
            raise ValueError(f"gaps {t} do not sum to 2 pi")
        object.__setattr__(self, "theta", t)

    @property
    def half_angle_cotangents(self) -> tuple:
        return tuple(1.0 / math.tan(v / 2) for v in self.theta)

    def rotations(self):
        t = self.theta
        return [GapAngles(t[k:] + t[:k]) for k in range(3)]


@dataclass(frozen=True)
class ContactAngles:
    """Three contact angles in counter-clockwise order forming an equilibrium."""

    phi: tuple

    def __post_init__(self):
        p = tuple(float(v) % TWO_PI for v in self.phi)
        gaps_from_angles(p)
        object.__setattr__(self, "phi", p)

    def gaps(self) -> GapAngles:
        return GapAngles(gaps_from_angles(self.phi))


def canonicalize(theta: GapAngles) -> GapAngles:
    """Representative of the cyclic-relabelling class: the smallest rotation."""
    return min(theta.rotations(), key=lambda g: g.theta)


# ---------------------------------------------------------------------------
# density of the gap triple


def _kernel_integrand(phi, xi):
    return (xi - 2.0 * phi) * math.sin(phi) / ((math.pi - phi) * math.cos(phi) + math.sin(phi)) ** 3


def gap_kernel(xi: float, spec: QuadratureSpec = QuadratureSpec(1e-12, 1e-12)) -> float:
    """Per-gap term of the triple density, by adaptive quadrature.

    The integrand is non-negative and its denominator stays at least 1 on
    ``[0, pi/2]``, so the result is increasing in ``xi``.
    """
    xi = float(xi)
    if not -_EPS <= xi <= math.pi + _EPS:
        raise ValueError(f"xi must lie in [0, pi], got {xi}")
    xi = min(max(xi, 0.0), math.pi)
    return integrate_1d(lambda p: _kernel_integrand(p, xi), 0.0, xi / 2.0, spec)


class GapKernelTable:
    """Cubic-spline memo of :func:`gap_kernel` on a uniform grid over ``[0, pi]``."""

    def __init__(self, n_nodes: int = 2049):
        self.nodes = np.linspace(0.0, math.pi, n_nodes)
        self.values = np.array([gap_kernel(x) for x in self.nodes])
        self._spline = CubicSpline(self.nodes, self.values)

    def __call__(self, xi):
        xi = np.clip(np.asarray(xi, dtype=float), 0.0, math.pi)
        out = self._spline(xi)
        return float(out) if out.ndim == 0 else out


@functools.lru_cache(maxsize=None)
def kernel_table() -> GapKernelTable:
    """Shared read-only table, built on first use."""
    return GapKernelTable()


def _exact_kernel(xi):
    xi = np.asarray(xi, dtype=float)
    out = np.vectorize(gap_kernel, otypes=[float])(xi)
    return float(out) if out.ndim == 0 else out


def triple_density(theta1, theta2, theta3=None, *, kernel=None, check: bool = True):
    """Limit density of the gap triple (vectorised).

    With ``theta3`` omitted it is ``2 pi - theta1 - theta2``.  Points on the
    closed triangle are accepted; ``kernel="exact"`` evaluates every kernel
    term by quadrature instead of through the spline table.
    """
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    t3 = TWO_PI - t1 - t2 if theta3 is None else np.asarray(theta3, dtype=float)
    if check:
        for t in (t1, t2, t3):
            if np.any(t < -1e-9) or np.any(t > math.pi + 1e-9):
                raise ValueError("gaps must lie in [0, pi]")
        if theta3 is not None and np.any(np.abs(t1 + t2 + t3 - TWO_PI) > 1e-9):
            raise ValueError("gaps must sum to 2 pi")
    t1, t2, t3 = (np.clip(t, 0.0, math.pi) for t in (t1, t2, t3))
    if kernel is None:
        kernel = kernel_table()
    elif kernel == "exact":
        kernel = _exact_kernel
    sines = np.sin(t1 / 2) * np.sin(t2 / 2) * np.sin(t3 / 2)
    out = TWO_PI * sines * (1.0 / math.pi**2 + kernel(t1) + kernel(t2) + kernel(t3))
    return float(out) if np.ndim(out) == 0 else out


def triangle_mass(spec: QuadratureSpec = QuadratureSpec(1e-9, 1e-9)) -> float:
    """Integral of :func:`triple_density` over the full gap triangle."""
    return integrate_2d(lambda a, b: triple_density(a, b, check=False), 0.0, math.pi,
                        lambda a: math.pi - a, math.pi, spec)


def hoop_survival(mass_fraction: float, spec: QuadratureSpec = QuadratureSpec(1e-9, 1e-9)) -> float:
    """Probability that a hoop stays put while a walker goes all the way round.

    With ``cos(alpha) = m / (m + M)`` the hoop survives iff every gap is
    below ``2 alpha``; that region is empty once the fraction reaches 1/2.
    """
    mu = float(mass_fraction)
    if not 0 <= mu <= 1:
        raise ValueError("mass fraction must lie in [0, 1]")
    if mu >= 0.5:
        return 0.0
    alpha = math.acos(mu)
    f = kernel_table()

    def integrand(t1, t2):
        t3 = TWO_PI - t1 - t2
        return (math.sin(t1 / 2) * math.sin(t2 / 2) * math.sin((t1 + t2) / 2)
                * (1.0 / math.pi**2 + f(t1) + f(t2) + f(t3)))

    lo = max(TWO_PI - 4 * alpha, 0.0)
    return TWO_PI / 3.0 * integrate_2d(integrand, lo, 2 * alpha, lambda t1: TWO_PI - 2 * alpha - t1,
                                       2 * alpha, spec)


# ---------------------------------------------------------------------------
# plane through three sunken tips


@dataclass(frozen=True)
class PlanePlacement:
    """Plane through three tips sunk ``depths[i]/N`` below the comb ceiling.

    Over the base point ``(x, y)`` the plane lies
    ``(offset + slope_x x + slope_y y) / N`` below the ceiling.
    """

    offset: float
    slope_x: float
    slope_y: float
    sine_sum: float
    depths: tuple
    phi: tuple

    @property
    def tilt(self) -> float:
        return math.hypot(self.slope_x, self.slope_y)

    @property
    def tilt_ratio(self) -> float:
        """Tilt over offset; exceeds 1 when the plane crosses the ceiling."""
        return self.tilt / self.offset

    @property
    def crosses_ceiling(self) -> bool:
        return self.tilt**2 >= self.offset**2

    def depth(self, angle):
        return self.offset + self.slope_x * np.cos(angle) + self.slope_y * np.sin(angle)


def _det3(m):
    return float(np.linalg.det(np.asarray(m, dtype=float)))


def plane_coefficients(phi, depths, tol: float = 1e-12) -> PlanePlacement:
    """Offset and slopes of the plane through three sunken tips (Cramer's rule)."""
    p = ContactAngles(tuple(phi.phi if isinstance(phi, ContactAngles) else phi)).phi
    A = tuple(float(v) for v in depths)
    if len(A) != 3 or any(v < 0 for v in A):
        raise ValueError("need three non-negative depths")
    c = [math.cos(v) for v in p]
    s = [math.sin(v) for v in p]
    sine_sum = _det3([[c[i], s[i], 1.0] for i in range(3)])
    if sine_sum <= tol:
        raise ValueError("degenerate contact triangle")
    offset = _det3([[c[i], s[i], A[i]] for i in range(3)]) / sine_sum
    slope_x = _det3([[A[i], s[i], 1.0] for i in range(3)]) / sine_sum
    slope_y = _det3([[c[i], A[i], 1.0] for i in range(3)]) / sine_sum
    return PlanePlacement(offset, slope_x, slope_y, sine_sum, A, p)


def ceiling_overlap_factor(placement: PlanePlacement) -> float:
    """Mean plane depth over the arc where it is below the ceiling, per unit offset.

    Only defined when the plane crosses the ceiling (tilt >= offset > 0).
    """
    s0, tilt = placement.offset, placement.tilt
    if not s0 > 0:
        raise ValueError("offset must be positive")
    if tilt < s0:
        raise ValueError("the plane stays below the ceiling; the factor is 1 by definition")
    phi_s = math.acos(max(-1.0, -s0 / tilt))
    return (phi_s - math.tan(phi_s)) / math.pi


def ceiling_overlap_quadrature(placement: PlanePlacement, spec: QuadratureSpec = TIGHT,
                               scan: int = 4096) -> float:
    """Same factor from its defining integral over the circle.

    The integrand ``max(depth, 0)`` has kinks where the plane meets the
    ceiling; they are located by a sign scan plus root refinement and the
    integral is split there, since a shallow dip can hide from the adaptive
    error estimate.
    """
    s0 = placement.offset
    grid = np.linspace(0.0, TWO_PI, scan + 1)
    d = placement.depth(grid)
    cuts = [0.0]
    for k in np.flatnonzero(np.sign(d[:-1]) * np.sign(d[1:]) < 0):
        cuts.append(brentq(placement.depth, grid[k], grid[k + 1], xtol=1e-15))
    cuts.append(TWO_PI)
    integral = sum(integrate_1d(lambda a: max(placement.depth(a), 0.0), lo, hi, spec)
                   for lo, hi in zip(cuts[:-1], cuts[1:]))
    return integral / (TWO_PI * s0)


def prob_comb_below_plane(placement: PlanePlacement) -> float:
    """Limit probability that no tooth of a uniform circular comb pokes above the plane."""
    if placement.offset <= 0:
        if placement.tilt == 0:
            return 1.0
        raise ValueError("offset must be positive")
    if not placement.crosses_ceiling:
        return math.exp(-placement.offset)
    return math.exp(-placement.offset * ceiling_overlap_factor(placement))


def cot_identity_residuals(theta: GapAngles) -> tuple:
    """Residuals of three trigonometric identities satisfied by every gap triple."""
    t = theta.theta
    c1, c2, c3 = theta.half_angle_cotangents
    half_sines = math.sin(t[0] / 2) * math.sin(t[1] / 2) * math.sin(t[2] / 2)
    r1 = c1 * c2 + c2 * c3 + c3 * c1 - 1.0
    r2 = (math.sin(t[0]) + math.sin(t[1]) + math.sin(t[2])) / half_sines - 4.0
    r3 = 1.0 / half_sines - (c1 + c2 + c3 - c1 * c2 * c3)
    return r1, r2, r3
