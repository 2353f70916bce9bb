"""Adaptive quadrature and binned goodness-of-fit statistics."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate


class QuadratureError(RuntimeError):
    """Adaptive subdivision ran out of budget before meeting the tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be at least 10")

    def inner(self) -> "QuadratureSpec":
        return QuadratureSpec(self.abs_tol / 10, self.rel_tol / 10, self.max_depth)


#: analytic cross-checks
TIGHT = QuadratureSpec(1e-10, 1e-10)
#: expected bin masses inside Monte-Carlo comparisons
LOOSE = QuadratureSpec(1e-6, 1e-6)


def integrate_1d(f, lo: float, hi: float, spec: QuadratureSpec = TIGHT) -> float:
    """Integrate ``f`` over ``[lo, hi]`` with adaptive Gauss-Kronrod (QUADPACK).

    Raises :class:`QuadratureError` when the subdivision budget
    ``spec.max_depth`` is exhausted.
    """
    if hi < lo:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    if hi == lo:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, _ = integrate.quad(f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                                      limit=spec.max_depth)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc).splitlines()[0]) from None
    return float(value)


def _bound(b):
    return b if callable(b) else (lambda _x, v=float(b): v)


def integrate_2d(f, x_lo: float, x_hi: float, y_lo, y_hi, spec: QuadratureSpec = TIGHT) -> float:
    """Iterated integral of ``f(x, y)`` for ``x`` in ``[x_lo, x_hi]``.

    ``y_lo`` and ``y_hi`` are numbers or functions of ``x``, which covers
    rectangles and triangles with linear sides.  The inner integrals run at
    a tenth of the outer tolerance.  Where ``y_hi(x) <= y_lo(x)`` the inner
    integral is zero.
    """
    ylo, yhi = _bound(y_lo), _bound(y_hi)
    inner_spec = spec.inner()

    def inner(x):
        a, b = ylo(x), yhi(x)
        if b <= a:
            return 0.0
        return integrate_1d(lambda y: f(x, y), a, b, inner_spec)

    return integrate_1d(inner, x_lo, x_hi, spec)


# ---------------------------------------------------------------------------
# histograms


class Domain(str, enum.Enum):
    INTERVAL_RECT = "interval_rect"    # [-1, 0] x [0, 1]
    THETA_TRIANGLE = "theta_triangle"  # 0 < x, y < pi, x + y > pi


@dataclass(frozen=True, eq=False)
class Histogram2D:
    """Integer counts over a rectangular grid of bins.

    ``deposit_weight`` is the probability mass of one count; it is 1/3 for
    histograms that deposit every cyclic relabelling of a gap triple.
    """

    x_edges: np.ndarray
    y_edges: np.ndarray
    counts: np.ndarray
    domain: Domain = Domain.INTERVAL_RECT
    deposit_weight: float = 1.0
    total: int = field(init=False)

    def __post_init__(self):
        xe = np.asarray(self.x_edges, dtype=float)
        ye = np.asarray(self.y_edges, dtype=float)
        c = np.asarray(self.counts)
        if np.any(np.diff(xe) <= 0) or np.any(np.diff(ye) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if c.shape != (xe.size - 1, ye.size - 1):
            raise ValueError(f"counts shape {c.shape} does not match edges")
        if not np.issubdtype(c.dtype, np.integer) or np.any(c < 0):
            raise ValueError("counts must be non-negative integers")
        object.__setattr__(self, "x_edges", xe)
        object.__setattr__(self, "y_edges", ye)
        object.__setattr__(self, "counts", c.astype(np.int64))
        object.__setattr__(self, "domain", Domain(self.domain))
        object.__setattr__(self, "total", int(c.sum()))

    @classmethod
    def from_samples(cls, x, y, x_edges, y_edges, **kw) -> "Histogram2D":
        counts, _, _ = np.histogram2d(x, y, bins=[x_edges, y_edges])
        return cls(x_edges, y_edges, counts.astype(np.int64), **kw)

    def fractions(self) -> np.ndarray:
        return self.counts / self.total

    def bin_areas(self) -> np.ndarray:
        return np.outer(np.diff(self.x_edges), np.diff(self.y_edges))

    def merge(self, other: "Histogram2D") -> "Histogram2D":
        if not (np.array_equal(self.x_edges, other.x_edges) and np.array_equal(self.y_edges, other.y_edges)):
            raise ValueError("cannot merge histograms with different bins")
        return Histogram2D(self.x_edges, self.y_edges, self.counts + other.counts,
                           self.domain, self.deposit_weight)


@dataclass(frozen=True)
class FitReport:
    tv_distance: float
    chi_square: float
    dof: int
    n_effective_bins: int

    @property
    def reduced_chi_square(self) -> float:
        return self.chi_square / self.dof if self.dof > 0 else math.nan


def _clip_to_domain(domain, x0, x1, y0, y1):
    """Inner bounds of a bin intersected with the histogram domain."""
    if domain is Domain.THETA_TRIANGLE:
        return (lambda x: max(y0, math.pi - x)), y1
    return y0, y1


def expected_fractions(hist: Histogram2D, density, density_norm: float = 1.0,
                       spec: QuadratureSpec = QuadratureSpec(1e-6, 1e-6)) -> np.ndarray:
    """Probability mass of each bin under ``density / density_norm``."""
    xe, ye = hist.x_edges, hist.y_edges
    out = np.zeros(hist.counts.shape)
    for i in range(xe.size - 1):
        for j in range(ye.size - 1):
            if hist.domain is Domain.THETA_TRIANGLE and xe[i + 1] + ye[j + 1] <= math.pi:
                continue
            lo, hi = _clip_to_domain(hist.domain, xe[i], xe[i + 1], ye[j], ye[j + 1])
            out[i, j] = integrate_2d(density, xe[i], xe[i + 1], lo, hi, spec)
    return out / density_norm


def fit_report(observed_fractions: np.ndarray, expected: np.ndarray, total: int,
               min_expected: float = 5.0) -> FitReport:
    """TV distance and pooled chi-square of binned fractions.

    Bins expecting fewer than ``min_expected`` counts are pooled into a
    single extra bin; when no bin reaches the threshold everything is
    pooled and ``dof`` is 0.
    """
    obs = np.asarray(observed_fractions, dtype=float).ravel()
    exp = np.asarray(expected, dtype=float).ravel()
    tv = 0.5 * float(np.abs(obs - exp).sum())
    e_count = exp * total
    o_count = obs * total
    keep = e_count >= min_expected
    chi = float(((o_count[keep] - e_count[keep]) ** 2 / e_count[keep]).sum())
    n_eff = int(keep.sum())
    pooled_e = e_count[~keep].sum()
    if pooled_e > 0:
        chi += float((o_count[~keep].sum() - pooled_e) ** 2 / pooled_e)
        n_eff += 1
    return FitReport(min(tv, 1.0), chi, n_eff - 1, n_eff)


def compare_histogram(hist: Histogram2D, density, density_norm: float = 1.0,
                      spec: QuadratureSpec = QuadratureSpec(1e-6, 1e-6), expected=None) -> FitReport:
    """Compare a histogram with a density known up to ``density_norm``.

    ``expected`` may carry precomputed bin fractions from
    :func:`expected_fractions` to skip the quadrature.
    """
    if hist.total <= 0:
        raise ValueError("empty histogram")
    if expected is None:
        expected = expected_fractions(hist, density, density_norm, spec)
    return fit_report(hist.fractions(), expected, hist.total)


def tv_distance(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return 0.5 * float(np.abs(p / p.sum() - q / q.sum()).sum())
