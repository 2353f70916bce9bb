"""Closed-form support laws for a rigid interval on a fine random comb.

Coordinates: the interval spans ``[-1, 1]`` and rests on a left support at
``a1`` in ``[-1, 0]`` and a right support at ``a2`` in ``[0, 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .quadrature import TIGHT, QuadratureSpec, integrate_1d, integrate_2d

_EPS = 1e-12


def _check_pair(a1, a2):
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    if np.any(a1 < -1 - _EPS) or np.any(a1 > _EPS) or np.any(a2 < -_EPS) or np.any(a2 > 1 + _EPS):
        raise ValueError("support points must satisfy -1 <= a1 <= 0 <= a2 <= 1")
    return a1, a2


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class SupportPoints:
    a1: float
    a2: float

    def __post_init__(self):
        _check_pair(self.a1, self.a2)
        if self.a2 - self.a1 <= 0 and not (self.a1 == 0 and self.a2 == 0):
            raise ValueError("supports must be separated")


def _bracket(a1, a2):
    return 4.0 / (3.0 * (1.0 + a2) ** 3) + 4.0 / (3.0 * (1.0 - a1) ** 3) + 1.0 / 6.0


def pair_density(a1, a2):
    """Limit density of the support pair ``(a1, a2)`` on ``[-1,0] x [0,1]``."""
    a1, a2 = _check_pair(a1, a2)
    return _scalar((a2 - a1) * _bracket(a1, a2))


def right_marginal(a2):
    """Density of the right support point alone."""
    _, a2 = _check_pair(0.0, a2)
    u = 1.0 + a2
    return _scalar(4.0 / (3.0 * u**2) - 2.0 / (3.0 * u**3) + 2.0 * a2 / 3.0 + 0.25)


def right_marginal_quadrature(a2: float, spec: QuadratureSpec = TIGHT) -> float:
    return integrate_1d(lambda a1: pair_density(a1, a2), -1.0, 0.0, spec)


def load_fractions(a1: float, a2: float) -> tuple:
    """Share of the weight carried by the left and right support (lever rule)."""
    _check_pair(a1, a2)
    span = a2 - a1
    if span <= 0:
        raise ValueError("coincident support points carry an undetermined load")
    return a2 / span, -a1 / span


def scratch_rate_left(a1: float, spec: QuadratureSpec = TIGHT) -> float:
    """Load-weighted frequency with which the point ``a1`` carries the left support.

    The load share ``a2 / (a2 - a1)`` cancels the span factor of the density,
    leaving a smooth integrand.
    """
    _check_pair(a1, 0.0)
    return integrate_1d(lambda a2: a2 * _bracket(a1, a2), 0.0, 1.0, spec)


def scratch_rate_right(a2: float, spec: QuadratureSpec = TIGHT) -> float:
    """Mirror image of :func:`scratch_rate_left` for the right support."""
    _check_pair(0.0, a2)
    return integrate_1d(lambda a1: -a1 * _bracket(a1, a2), -1.0, 0.0, spec)


def scratch_rate_left_closed_form(a1):
    """Quoted closed form ``2/(3(1-a1)^3) + 1/2``.

    Direct integration gives the same shape with additive constant 1/4, not
    1/2; the two are kept apart on purpose and compared in reports.
    """
    a1, _ = _check_pair(a1, 0.0)
    return _scalar(2.0 / (3.0 * (1.0 - a1) ** 3) + 0.5)


def scratch_rate_right_closed_form(a2):
    _, a2 = _check_pair(0.0, a2)
    return _scalar(2.0 / (3.0 * (1.0 + a2) ** 3) + 0.5)


def beam_survival(mass_fraction):
    """Probability that a beam does not tip while a walker crosses it.

    ``mass_fraction`` is ``m / (m + M)`` for a walker of mass ``m`` on a beam
    of mass ``M``; the beam stays put iff ``-a1 > mu`` and ``a2 > mu``.
    """
    mu = np.asarray(mass_fraction, dtype=float)
    if np.any(mu < 0) or np.any(mu > 1):
        raise ValueError("mass fraction must lie in [0, 1]")
    return _scalar((1.0 - mu) ** 2 / 6.0 * (6.0 + mu - (2.0 * mu / (1.0 + mu)) ** 2))


def beam_survival_quadrature(mass_fraction: float, spec: QuadratureSpec = TIGHT) -> float:
    mu = float(mass_fraction)
    if not 0 <= mu <= 1:
        raise ValueError("mass fraction must lie in [0, 1]")
    return integrate_2d(lambda a1, a2: pair_density(a1, a2), -1.0, -mu, mu, 1.0, spec)


def density_decomposition(a1: float, a2: float) -> tuple:
    """Split the pair density by the shape of the supporting line.

    Returns ``(level, rises_right, rises_left)``: the contribution where the
    line stays below the ceiling of the comb over the whole base, and the two
    contributions where it crosses the ceiling on the right or left.
    """
    _check_pair(a1, a2)
    span = a2 - a1
    level = span / 2.0
    rises_right = 4.0 * span / 3.0 * (1.0 / (1.0 + a2) ** 3 - 0.125)
    rises_left = 4.0 * span / 3.0 * (1.0 / (1.0 - a1) ** 3 - 0.125)
    return level, rises_right, rises_left


@dataclass(frozen=True)
class LinePlacement:
    """Line through two tips sunk ``A1/N`` and ``A2/N`` below the comb ceiling.

    At ``x`` the line lies ``g(x)/N`` below the ceiling, where ``g`` is linear
    with ``g(a1) = A1`` and ``g(a2) = A2``.
    """

    A1: float
    A2: float
    a1: float
    a2: float

    def __post_init__(self):
        if self.A1 < 0 or self.A2 < 0:
            raise ValueError("tip depths must be non-negative")
        _check_pair(self.a1, self.a2)
        if self.a2 - self.a1 <= 0:
            raise ValueError("supports must be separated")

    @property
    def centre_depth(self) -> float:
        return (self.A1 * self.a2 - self.A2 * self.a1) / (self.a2 - self.a1)

    def depth(self, x):
        """``g(x)``: depth below the ceiling in units of ``1/N``."""
        return (self.A1 * self.a2 - self.A2 * self.a1 + (self.A2 - self.A1) * np.asarray(x)) / (self.a2 - self.a1)

    @property
    def crosses_ceiling(self) -> bool:
        return abs(self.A1 - self.A2) >= self.A1 * self.a2 - self.A2 * self.a1 and self.A1 != self.A2

    @property
    def x_star(self) -> Optional[float]:
        """Abscissa where the line meets the ceiling, if it does."""
        if not self.crosses_ceiling:
            return None
        return (self.A1 * self.a2 - self.A2 * self.a1) / (self.A1 - self.A2)


def prob_comb_below_line(placement: LinePlacement) -> float:
    """Limit probability that no tooth of a uniform comb pokes above the line."""
    A1, A2, a1, a2 = placement.A1, placement.A2, placement.a1, placement.a2
    span = a2 - a1
    if not placement.crosses_ceiling:
        return math.exp(-(A1 * a2 - A2 * a1) / span)
    if A1 > A2:
        return math.exp(-((A1 * (a2 + 1) - A2 * (a1 + 1)) ** 2) / (4 * span * (A1 - A2)))
    return math.exp(-((A2 * (1 - a1) - A1 * (1 - a2)) ** 2) / (4 * span * (A2 - A1)))
