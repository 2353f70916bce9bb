"""Random combs and the support configurations of bodies resting on them.

A line comb is a row of vertical teeth over ``[-1, 1]``; a rigid interval
lowered onto it rests on two tooth tips, one on each side of its centre.  A
circular comb stands on the unit circle; a hoop rests on three tips whose
triangle contains the centre.  Both are found here by a settling algorithm
and, independently, by exhaustive search.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _rng, _settle
from .circle import gaps_from_angles

#: absolute tolerance of the dominance and containment predicates
DEGENERACY_TOL = 1e-12


class DegenerateConfigurationError(RuntimeError):
    """The support is not unique: tied tips or the centre on a support edge."""


class Placement(str, enum.Enum):
    """Where the teeth stand on the base."""

    PAPER = "paper"        # x_j = -1 + 2j/N,  alpha_j = 2 pi j / N
    MIDPOINT = "midpoint"  # x_j = -1 + (2j-1)/N,  alpha_j = 2 pi (j - 1/2) / N
    RANDOM = "random"      # i.i.d. uniform on the base, sorted


# ---------------------------------------------------------------------------
# height distributions


class HeightDistribution:
    """Law of a single tooth height on ``[0, 1]``, sampled by inversion."""

    def ppf(self, u):
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.label()


@dataclass(frozen=True)
class Uniform01(HeightDistribution):
    def ppf(self, u):
        return u

    def label(self):
        return "uniform"


@dataclass(frozen=True)
class Beta(HeightDistribution):
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"beta parameters must be positive, got {self.alpha}, {self.beta}")

    def ppf(self, u):
        a, b = self.alpha, self.beta
        if a == 1 and b == 1:
            return u
        if b == 1:
            return u ** (1.0 / a)
        if a == 1:
            return -np.expm1(np.log1p(-u) / b)
        if a == 2 and b == 2:
            # inverse of 3x^2 - 2x^3
            return 0.5 + np.sin(np.arcsin(2.0 * u - 1.0) / 3.0)
        return special.betaincinv(a, b, u)

    def label(self):
        return f"beta:{self.alpha!r},{self.beta!r}"


@dataclass(frozen=True)
class Triangular(HeightDistribution):
    mode: float

    def __post_init__(self):
        if not 0.0 <= self.mode <= 1.0:
            raise ValueError(f"triangular mode must lie in [0, 1], got {self.mode}")

    def ppf(self, u):
        c = self.mode
        u = np.asarray(u, dtype=float)
        return np.where(u < c, np.sqrt(u * c), 1.0 - np.sqrt((1.0 - u) * (1.0 - c)))

    def label(self):
        return f"triangular:{self.mode!r}"


def parse_distribution(text: str) -> HeightDistribution:
    """Parse ``uniform``, ``beta:a,b`` or ``triangular:m``."""
    name, _, args = text.strip().partition(":")
    name = name.lower()
    try:
        if name == "uniform" and not args:
            return Uniform01()
        if name == "beta":
            a, b = (float(v) for v in args.split(","))
            return Beta(a, b)
        if name == "triangular":
            return Triangular(float(args))
    except ValueError as exc:
        raise ValueError(f"bad distribution {text!r}: {exc}") from None
    raise ValueError(f"unknown distribution {text!r}")


# ---------------------------------------------------------------------------
# combs


def _frozen(values, dtype=float):
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class LineComb:
    """Teeth at ``positions`` in ``[-1, 1]`` with tip heights ``heights``."""

    positions: np.ndarray
    heights: np.ndarray

    def __post_init__(self):
        x = _frozen(self.positions)
        h = _frozen(self.heights)
        object.__setattr__(self, "positions", x)
        object.__setattr__(self, "heights", h)
        if x.ndim != 1 or x.shape != h.shape:
            raise ValueError("positions and heights must be 1-D of equal length")
        if x.size < 2:
            raise ValueError("a line comb needs at least two teeth")
        if np.any(np.diff(x) <= 0):
            raise ValueError("positions must be strictly increasing")
        if x[0] < -1 or x[-1] > 1:
            raise ValueError("positions must lie in [-1, 1]")
        if np.any(x == 0.0):
            raise ValueError("no tooth may stand exactly at the centre x = 0")
        if not (x[0] < 0 < x[-1]):
            raise ValueError("need at least one tooth on each side of the centre")
        if not np.all(np.isfinite(h)) or np.any(h < 0):
            raise ValueError("heights must be finite and non-negative")

    @property
    def n(self) -> int:
        return self.positions.size

    def to_csv(self) -> str:
        return _dump_csv(self.positions, self.heights)


@dataclass(frozen=True, eq=False)
class CircularComb:
    """Teeth at polar ``angles`` in ``[0, 2 pi)`` on the unit circle."""

    angles: np.ndarray
    heights: np.ndarray

    def __post_init__(self):
        a = _frozen(self.angles)
        h = _frozen(self.heights)
        object.__setattr__(self, "angles", a)
        object.__setattr__(self, "heights", h)
        if a.ndim != 1 or a.shape != h.shape:
            raise ValueError("angles and heights must be 1-D of equal length")
        if a.size < 3:
            raise ValueError("a circular comb needs at least three teeth")
        if np.any(np.diff(a) <= 0):
            raise ValueError("angles must be strictly increasing")
        if a[0] < 0 or a[-1] >= 2 * math.pi:
            raise ValueError("angles must lie in [0, 2 pi)")
        if not np.all(np.isfinite(h)) or np.any(h < 0):
            raise ValueError("heights must be finite and non-negative")

    @property
    def n(self) -> int:
        return self.angles.size

    def to_csv(self) -> str:
        return _dump_csv(self.angles, self.heights)


def _dump_csv(coords, heights):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "position_or_angle", "height"])
    for i, (c, h) in enumerate(zip(coords.tolist(), heights.tolist())):
        w.writerow([i, repr(c), repr(h)])
    return buf.getvalue()


def comb_from_csv(text: str, circular: bool = False):
    """Rebuild a comb from its debug dump."""
    rows = list(csv.DictReader(io.StringIO(text)))
    coords = [float(r["position_or_angle"]) for r in rows]
    heights = [float(r["height"]) for r in rows]
    return CircularComb(coords, heights) if circular else LineComb(coords, heights)


# ---------------------------------------------------------------------------
# sampling


def line_grid(n_teeth: int, placement: Placement) -> np.ndarray:
    placement = Placement(placement)
    if n_teeth < 2:
        raise ValueError(f"n_teeth must be >= 2, got {n_teeth}")
    j = np.arange(1, n_teeth + 1)
    if placement is Placement.MIDPOINT:
        if n_teeth % 2:
            raise ValueError("the midpoint grid puts a tooth at x = 0 for odd n_teeth")
        return -1.0 + (2 * j - 1) / n_teeth
    if placement is Placement.PAPER:
        if n_teeth % 2 == 0:
            raise ValueError("the -1 + 2j/N grid puts a tooth at x = 0 for even n_teeth")
        return -1.0 + 2 * j / n_teeth
    raise ValueError("random placement has no fixed grid")


def circle_grid(n_teeth: int, placement: Placement) -> np.ndarray:
    placement = Placement(placement)
    if n_teeth < 3:
        raise ValueError(f"n_teeth must be >= 3, got {n_teeth}")
    k = np.arange(n_teeth)
    if placement is Placement.PAPER:
        # 2 pi j / N for j = 1..N, reduced mod 2 pi and sorted
        return 2 * math.pi * k / n_teeth
    if placement is Placement.MIDPOINT:
        return 2 * math.pi * (k + 0.5) / n_teeth
    raise ValueError("random placement has no fixed grid")


def line_comb_block(n_teeth, dist, placement, seed, trials, attempts):
    """Positions and heights for a block of trials, one comb per row."""
    placement = Placement(placement)
    h = dist.ppf(_rng.uniforms(seed, trials, attempts, _rng.HEIGHTS, n_teeth))
    if placement is Placement.RANDOM:
        x = np.sort(2.0 * _rng.uniforms(seed, trials, attempts, _rng.POSITIONS, n_teeth) - 1.0, axis=1)
    else:
        x = np.broadcast_to(line_grid(n_teeth, placement), h.shape)
    return x, np.ascontiguousarray(h, dtype=float)


def circular_comb_block(n_teeth, dist, placement, seed, trials, attempts):
    """Angles and heights for a block of trials, one comb per row."""
    placement = Placement(placement)
    h = dist.ppf(_rng.uniforms(seed, trials, attempts, _rng.HEIGHTS, n_teeth))
    if placement is Placement.RANDOM:
        a = np.sort(2 * math.pi * _rng.uniforms(seed, trials, attempts, _rng.POSITIONS, n_teeth), axis=1)
    else:
        if n_teeth < 3:
            raise ValueError(f"n_teeth must be >= 3, got {n_teeth}")
        a = np.broadcast_to(circle_grid(n_teeth, placement), h.shape)
    return a, np.ascontiguousarray(h, dtype=float)


def sample_line_comb(n_teeth: int, dist: HeightDistribution = Uniform01(), rng_seed: int = 0, *,
                     placement: Placement = Placement.MIDPOINT, trial: int = 0,
                     attempt: int = 0) -> LineComb:
    """Draw one line comb.

    ``(rng_seed, trial, attempt)`` addresses the same stream the Monte-Carlo
    engine uses, so any trial of an experiment can be rebuilt on its own.
    """
    if n_teeth < 2:
        raise ValueError(f"n_teeth must be >= 2, got {n_teeth}")
    x, h = line_comb_block(n_teeth, dist, placement, rng_seed, [trial], [attempt])
    return LineComb(x[0], h[0])


def sample_circular_comb(n_teeth: int, dist: HeightDistribution = Uniform01(), rng_seed: int = 0, *,
                         placement: Placement = Placement.PAPER, trial: int = 0,
                         attempt: int = 0) -> CircularComb:
    """Draw one circular comb; see :func:`sample_line_comb`."""
    if n_teeth < 3:
        raise ValueError(f"n_teeth must be >= 3, got {n_teeth}")
    a, h = circular_comb_block(n_teeth, dist, placement, rng_seed, [trial], [attempt])
    return CircularComb(a[0], h[0])


# ---------------------------------------------------------------------------
# support configurations


@dataclass(frozen=True)
class SupportPair:
    left_index: int
    right_index: int
    a1: float
    a2: float


@dataclass(frozen=True)
class SupportTriple:
    indices: tuple
    phi: tuple

    @property
    def gaps(self) -> tuple:
        """Arc opposite each contact, in contact order."""
        return gaps_from_angles(self.phi)


def _pair(comb, left, right):
    return SupportPair(int(left), int(right), float(comb.positions[left]), float(comb.positions[right]))


def _triple(comb, idx):
    idx = tuple(int(i) for i in sorted(idx))
    return SupportTriple(idx, tuple(float(comb.angles[i]) for i in idx))


def _raise_status(status, what):
    if status == _settle.DEGENERATE:
        raise DegenerateConfigurationError(f"{what}: tied support (measure-zero tie)")
    if status == _settle.PIVOT_CAP:
        raise DegenerateConfigurationError(f"{what}: pivot cap reached")
    if status == _settle.UNSUPPORTED:
        raise ValueError(f"{what}: the centre is not above the convex hull of the base points")


def support_pair(comb: LineComb, tol: float = DEGENERACY_TOL) -> SupportPair:
    """Teeth carrying a rigid interval centred at ``x = 0``.

    The support chord is the edge of the upper convex hull of the tips whose
    x-span contains the centre.
    """
    left, right, status = _settle.settle_line(comb.positions[None, :], comb.heights[None, :], tol)
    _raise_status(status[0], "support_pair")
    return _pair(comb, left[0], right[0])


def support_triple(comb: CircularComb, tol: float = DEGENERACY_TOL) -> SupportTriple:
    """Teeth carrying a rigid hoop lowered onto a circular comb.

    Starts from the highest tip and pivots the supporting plane about its
    contact points, always lowering it over the centre, until the contact
    triangle contains the centre.
    """
    a = comb.angles[None, :]
    idx, status = _settle.settle_circle(np.cos(a), np.sin(a), comb.heights[None, :], tol)
    _raise_status(status[0], "support_triple")
    return _triple(comb, idx[0])


def brute_force_support_pair(comb: LineComb, cap: int = 200, tol: float = DEGENERACY_TOL) -> SupportPair:
    """Exhaustive O(N^3) search over all left/right pairs."""
    if comb.n > cap:
        raise ValueError(f"brute force capped at {cap} teeth, comb has {comb.n}")
    x, h = comb.positions, comb.heights
    i, j = np.meshgrid(np.flatnonzero(x < 0), np.flatnonzero(x > 0), indexing="ij")
    i, j = i.ravel(), j.ravel()
    slope = (h[j] - h[i]) / (x[j] - x[i])
    excess = h[None, :] - (h[i, None] + slope[:, None] * (x[None, :] - x[i, None]))
    rows = np.arange(i.size)
    excess[rows, i] = -np.inf
    excess[rows, j] = -np.inf
    worst = excess.max(axis=1)
    weak = np.flatnonzero(worst <= tol)
    if weak.size != 1 or worst[weak[0]] >= -tol:
        raise DegenerateConfigurationError(f"{weak.size} admissible pairs (ties within {tol})")
    return _pair(comb, i[weak[0]], j[weak[0]])


def brute_force_support_triple(comb: CircularComb, cap: int = 60, tol: float = DEGENERACY_TOL) -> SupportTriple:
    """Exhaustive search over all triples: plane dominance and centre containment."""
    if comb.n > cap:
        raise ValueError(f"brute force capped at {cap} teeth, comb has {comb.n}")
    x, y, h = np.cos(comb.angles), np.sin(comb.angles), comb.heights
    tri = np.array(list(itertools.combinations(range(comb.n), 3)))
    X, Y = x[tri], y[tri]
    lhs = np.stack([np.ones_like(X), X, Y], axis=-1)
    c0, ax, ay = np.linalg.solve(lhs, h[tri][..., None])[..., 0].T

    area = (X[:, 1] - X[:, 0]) * (Y[:, 2] - Y[:, 0]) - (X[:, 2] - X[:, 0]) * (Y[:, 1] - Y[:, 0])
    bary = np.stack([
        X[:, 1] * Y[:, 2] - X[:, 2] * Y[:, 1],
        X[:, 2] * Y[:, 0] - X[:, 0] * Y[:, 2],
        X[:, 0] * Y[:, 1] - X[:, 1] * Y[:, 0],
    ]) / area
    inside = bary.min(axis=0)

    excess = h[None, :] - (c0[:, None] + ax[:, None] * x[None, :] + ay[:, None] * y[None, :])
    rows = np.arange(tri.shape[0])[:, None]
    excess[rows, tri] = -np.inf
    worst = excess.max(axis=1)

    weak = np.flatnonzero((worst <= tol) & (inside >= -tol))
    if weak.size != 1 or worst[weak[0]] >= -tol or inside[weak[0]] <= tol:
        raise DegenerateConfigurationError(f"{weak.size} admissible triples (ties within {tol})")
    return _triple(comb, tri[weak[0]])
