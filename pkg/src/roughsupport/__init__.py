"""Support laws of rigid bodies resting on random combs.

A rigid interval (or hoop) is lowered onto a comb of i.i.d. random teeth
until it rests on two (or three) tips.  The package provides the limit
densities of those supports, quadrature cross-checks, brute-force settling
oracles and a deterministic Monte-Carlo engine.
"""

__version__ = "0.1.0"

from .circle import (ContactAngles, GapAngles, PlanePlacement, ceiling_overlap_factor, gap_kernel,
                     gaps_from_angles, hoop_survival, plane_coefficients, prob_comb_below_plane,
                     triangle_mass, triple_density)
from .comb import (Beta, CircularComb, DegenerateConfigurationError, LineComb, Placement, Triangular,
                   Uniform01, parse_distribution, sample_circular_comb, sample_line_comb, support_pair,
                   support_triple)
from .interval import (LinePlacement, beam_survival, density_decomposition, pair_density,
                       prob_comb_below_line, right_marginal)
from .quadrature import QuadratureSpec, integrate_1d, integrate_2d

__all__ = [
    "Beta", "CircularComb", "ContactAngles", "DegenerateConfigurationError", "GapAngles", "LineComb",
    "LinePlacement", "Placement", "PlanePlacement", "QuadratureSpec", "Triangular", "Uniform01",
    "beam_survival", "ceiling_overlap_factor", "density_decomposition", "gap_kernel", "gaps_from_angles",
    "hoop_survival", "integrate_1d", "integrate_2d", "pair_density", "parse_distribution",
    "plane_coefficients", "prob_comb_below_line", "prob_comb_below_plane", "right_marginal",
    "sample_circular_comb", "sample_line_comb", "support_pair", "support_triple", "triangle_mass",
    "triple_density",
]
