"""Monte-Carlo experiments on random combs.

Trial ``t`` of an experiment draws its comb from the counter-based stream
``(master_seed, t, attempt)``.  A settle that hits a measure-zero tie is
redrawn with ``attempt + 1``, so the sampled law is the comb law
conditioned on non-degeneracy, and every result is a pure function of the
configuration regardless of block size or evaluation order.
"""

from __future__ import annotations

import functools
import itertools
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import __version__, _rng, _settle
from .circle import PlanePlacement, gaps_array, triple_density
from .comb import (DEGENERACY_TOL, HeightDistribution, Placement, Uniform01, circle_grid,
                   circular_comb_block, line_comb_block, line_grid, parse_distribution)
from .interval import LinePlacement, pair_density
from .quadrature import (LOOSE, Domain, FitReport, Histogram2D, expected_fractions, fit_report,
                         tv_distance)

log = logging.getLogger(__name__)

#: comb entries generated per block
BLOCK_ELEMENTS = 1 << 21
MAX_ATTEMPTS = 64
DEGENERACY_ALERT = 1e-3


class Kind(str, Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"


@dataclass(frozen=True)
class ExperimentConfig:
    kind: Kind
    n_teeth: int
    trials: int
    dist: HeightDistribution = Uniform01()
    bins_x: int = 20
    bins_y: int = 20
    master_seed: int = 42
    placement_mode: Optional[Placement] = None

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.placement_mode is None:
            default = Placement.MIDPOINT if kind is Kind.INTERVAL else Placement.PAPER
            object.__setattr__(self, "placement_mode", default)
        object.__setattr__(self, "placement_mode", Placement(self.placement_mode))
        if isinstance(self.dist, str):
            object.__setattr__(self, "dist", parse_distribution(self.dist))
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.bins_x < 2 or self.bins_y < 2:
            raise ValueError("need at least 2 bins per axis")
        if self.placement_mode is not Placement.RANDOM:
            grid = line_grid if kind is Kind.INTERVAL else circle_grid
            grid(self.n_teeth, self.placement_mode)
        elif self.n_teeth < (2 if kind is Kind.INTERVAL else 3):
            raise ValueError(f"too few teeth: {self.n_teeth}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "n_teeth": self.n_teeth,
            "trials": self.trials,
            "dist": self.dist.label(),
            "bins_x": self.bins_x,
            "bins_y": self.bins_y,
            "master_seed": self.master_seed,
            "placement_mode": self.placement_mode.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(Kind(d["kind"]), int(d["n_teeth"]), int(d["trials"]), parse_distribution(d["dist"]),
                   int(d["bins_x"]), int(d["bins_y"]), int(d["master_seed"]), Placement(d["placement_mode"]))


@dataclass(frozen=True)
class RunManifest:
    config: ExperimentConfig
    tolerances: dict
    tool_version: str = __version__
    fit: Optional[FitReport] = None
    degenerate_count: Optional[int] = None

    @property
    def master_seed(self) -> int:
        return self.config.master_seed

    def to_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "master_seed": self.master_seed,
            "config": self.config.to_dict(),
            "tolerances": dict(self.tolerances),
            "fit": None if self.fit is None else asdict(self.fit),
            "degenerate_count": self.degenerate_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        d = json.loads(text)
        fit = None if d["fit"] is None else FitReport(**d["fit"])
        return cls(ExperimentConfig.from_dict(d["config"]), d["tolerances"], d["tool_version"], fit,
                   d["degenerate_count"])


def _tolerances() -> dict:
    return {"degeneracy": DEGENERACY_TOL, "bin_mass_abs": LOOSE.abs_tol, "bin_mass_rel": LOOSE.rel_tol}


# ---------------------------------------------------------------------------
# sampling supports


@dataclass(frozen=True, eq=False)
class SupportSamples:
    """Settled supports of every trial.

    ``values`` holds ``(a1, a2)`` rows for the interval and gap triples
    ``(theta1, theta2, theta3)`` for the hoop.
    """

    config: ExperimentConfig
    values: np.ndarray
    degenerate_count: int
    elapsed_seconds: float


def _trig(a):
    if a.strides[0] == 0:
        return np.broadcast_to(np.cos(a[0]), a.shape), np.broadcast_to(np.sin(a[0]), a.shape)
    return np.cos(a), np.sin(a)


def _settle_block(cfg: ExperimentConfig, trials, attempts):
    rows = np.arange(trials.size)
    if cfg.kind is Kind.INTERVAL:
        x, h = line_comb_block(cfg.n_teeth, cfg.dist, cfg.placement_mode, cfg.master_seed, trials, attempts)
        left, right, status = _settle.settle_line(x, h, DEGENERACY_TOL)
        return np.stack([x[rows, left], x[rows, right]], axis=1), status
    a, h = circular_comb_block(cfg.n_teeth, cfg.dist, cfg.placement_mode, cfg.master_seed, trials, attempts)
    cx, sy = _trig(a)
    idx, status = _settle.settle_circle(cx, sy, h, DEGENERACY_TOL)
    phi = np.take_along_axis(a, np.maximum(idx, 0), axis=1)
    return gaps_array(phi), status


def sample_supports(cfg: ExperimentConfig) -> SupportSamples:
    """Settle ``cfg.trials`` combs, redrawing degenerate ones."""
    start_time = time.perf_counter()
    width = 2 if cfg.kind is Kind.INTERVAL else 3
    out = np.empty((cfg.trials, width))
    degenerate = 0
    block = max(1, BLOCK_ELEMENTS // cfg.n_teeth)
    for start in range(0, cfg.trials, block):
        trials = np.arange(start, min(start + block, cfg.trials), dtype=np.int64)
        attempts = np.zeros_like(trials)
        pending = np.arange(trials.size)
        while pending.size:
            values, status = _settle_block(cfg, trials[pending], attempts[pending])
            ok = status == _settle.OK
            out[start + pending[ok]] = values[ok]
            pending = pending[~ok]
            degenerate += pending.size
            attempts[pending] += 1
            if pending.size and attempts[pending].max() >= MAX_ATTEMPTS:
                raise RuntimeError(f"trial {trials[pending[0]]} stayed degenerate after {MAX_ATTEMPTS} draws")
    rate = degenerate / cfg.trials
    if rate > DEGENERACY_ALERT:
        log.warning("degenerate settles: %d of %d trials (%.2g); even-N hoop grids tie on antipodal teeth",
                    degenerate, cfg.trials, rate)
    return SupportSamples(cfg, out, degenerate, time.perf_counter() - start_time)


# ---------------------------------------------------------------------------
# histograms and fits


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    histogram: Histogram2D
    degenerate_count: int
    fit: FitReport
    elapsed_seconds: float
    manifest: RunManifest
    samples: SupportSamples = field(repr=False)
    expected: np.ndarray = field(repr=False)


def _edges(cfg):
    if cfg.kind is Kind.INTERVAL:
        return np.linspace(-1.0, 0.0, cfg.bins_x + 1), np.linspace(0.0, 1.0, cfg.bins_y + 1)
    return np.linspace(0.0, math.pi, cfg.bins_x + 1), np.linspace(0.0, math.pi, cfg.bins_y + 1)


@functools.lru_cache(maxsize=32)
def analytic_bin_fractions(kind: Kind, bins_x: int, bins_y: int) -> np.ndarray:
    """Limit-law probability of every histogram bin (read-only, cached)."""
    cfg = ExperimentConfig(kind, 2 if kind is Kind.INTERVAL else 3, 1, bins_x=bins_x, bins_y=bins_y,
                           placement_mode=Placement.RANDOM)
    xe, ye = _edges(cfg)
    if kind is Kind.INTERVAL:
        empty = Histogram2D(xe, ye, np.zeros((bins_x, bins_y), np.int64), Domain.INTERVAL_RECT)
        out = expected_fractions(empty, pair_density, 1.0, LOOSE)
    else:
        empty = Histogram2D(xe, ye, np.zeros((bins_x, bins_y), np.int64), Domain.THETA_TRIANGLE)
        out = expected_fractions(empty, lambda a, b: triple_density(a, b, check=False), 3.0, LOOSE)
    out.flags.writeable = False
    return out


def histogram_of(samples: SupportSamples) -> Histogram2D:
    cfg = samples.config
    xe, ye = _edges(cfg)
    v = samples.values
    if cfg.kind is Kind.INTERVAL:
        return Histogram2D.from_samples(v[:, 0], v[:, 1], xe, ye, domain=Domain.INTERVAL_RECT)
    # every cyclic relabelling of the gap triple, each carrying a third of the mass
    x = np.concatenate([v[:, 0], v[:, 1], v[:, 2]])
    y = np.concatenate([v[:, 1], v[:, 2], v[:, 0]])
    return Histogram2D.from_samples(x, y, xe, ye, domain=Domain.THETA_TRIANGLE, deposit_weight=1 / 3)


def _run(cfg: ExperimentConfig) -> ExperimentResult:
    samples = sample_supports(cfg)
    hist = histogram_of(samples)
    expected = analytic_bin_fractions(cfg.kind, cfg.bins_x, cfg.bins_y)
    fit = fit_report(hist.fractions(), expected, hist.total)
    manifest = RunManifest(cfg, _tolerances(), fit=fit, degenerate_count=samples.degenerate_count)
    return ExperimentResult(hist, samples.degenerate_count, fit, samples.elapsed_seconds, manifest,
                            samples, expected)


def run_interval_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Empirical law of the support pair, compared with the limit density."""
    if Kind(cfg.kind) is not Kind.INTERVAL:
        raise ValueError("run_interval_experiment needs an interval configuration")
    return _run(cfg)


def run_circle_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Empirical law of the hoop's gap triple on the full triangle.

    The histogram holds three counts per trial (one per cyclic
    relabelling), so ``histogram.total == 3 * cfg.trials``.
    """
    if Kind(cfg.kind) is not Kind.CIRCLE:
        raise ValueError("run_circle_experiment needs a circle configuration")
    return _run(cfg)


# ---------------------------------------------------------------------------
# event probabilities


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n: int

    def z_score(self, reference: float) -> float:
        if self.stderr == 0:
            return 0.0 if self.value == reference else math.copysign(math.inf, self.value - reference)
        return (self.value - reference) / self.stderr


def _fraction(hits: np.ndarray) -> Estimate:
    n = hits.size
    p = float(hits.mean())
    return Estimate(p, math.sqrt(p * (1 - p) / n), n)


def survives_walk(samples: SupportSamples, mass_fraction: float) -> np.ndarray:
    """Per-trial indicator that the body does not tip under the walker."""
    mu = float(mass_fraction)
    if not 0 <= mu <= 1:
        raise ValueError("mass fraction must lie in [0, 1]")
    v = samples.values
    if samples.config.kind is Kind.INTERVAL:
        return (-v[:, 0] > mu) & (v[:, 1] > mu)
    return v.max(axis=1) < 2.0 * math.acos(mu)


def estimate_p_star(cfg: ExperimentConfig, mass_fraction: float,
                    samples: Optional[SupportSamples] = None) -> Estimate:
    """Fraction of trials that survive the walk, with its Wald standard error."""
    if samples is None:
        samples = sample_supports(cfg)
    return _fraction(survives_walk(samples, mass_fraction))


def _below_thresholds(cfg: ExperimentConfig, placement) -> np.ndarray:
    if cfg.placement_mode is Placement.RANDOM:
        raise ValueError("fixed-placement estimates need a tooth grid")
    n = cfg.n_teeth
    if isinstance(placement, LinePlacement):
        if cfg.kind is not Kind.INTERVAL:
            raise ValueError("a line placement needs an interval configuration")
        return 1.0 - placement.depth(line_grid(n, cfg.placement_mode)) / n
    if isinstance(placement, PlanePlacement):
        if cfg.kind is not Kind.CIRCLE:
            raise ValueError("a plane placement needs a circle configuration")
        return 1.0 - placement.depth(circle_grid(n, cfg.placement_mode)) / n
    raise TypeError(f"unsupported placement {placement!r}")


def estimate_comb_below(cfg: ExperimentConfig, placement) -> Estimate:
    """Fraction of uniform combs lying entirely below a fixed line or plane."""
    if not isinstance(cfg.dist, Uniform01):
        raise ValueError("the comb-below estimate assumes uniform tooth heights")
    z = np.ascontiguousarray(_below_thresholds(cfg, placement), dtype=float)
    hits = _settle.count_below(_rng.as_seed(cfg.master_seed), 0, cfg.trials, z)
    p = hits / cfg.trials
    return Estimate(p, math.sqrt(p * (1 - p) / cfg.trials), cfg.trials)


def load_weighted_marginal(samples: SupportSamples, side: str = "right", bins: int = 20):
    """Load-weighted density of one support point, with per-bin standard errors.

    Returns ``(edges, density, stderr)``; each trial contributes its support
    location weighted by the share of the load that support carries.
    """
    if samples.config.kind is not Kind.INTERVAL:
        raise ValueError("load shares are defined for the interval")
    a1, a2 = samples.values[:, 0], samples.values[:, 1]
    span = a2 - a1
    if side == "right":
        loc, w, edges = a2, -a1 / span, np.linspace(0.0, 1.0, bins + 1)
    elif side == "left":
        loc, w, edges = a1, a2 / span, np.linspace(-1.0, 0.0, bins + 1)
    else:
        raise ValueError("side must be 'left' or 'right'")
    n = loc.size
    width = np.diff(edges)
    b = np.clip(np.searchsorted(edges, loc, side="right") - 1, 0, bins - 1)
    s1 = np.bincount(b, weights=w, minlength=bins)
    s2 = np.bincount(b, weights=w * w, minlength=bins)
    mean = s1 / n
    var = np.maximum(s2 / n - mean**2, 0.0)
    return edges, mean / width, np.sqrt(var / n) / width


# ---------------------------------------------------------------------------
# robustness


@dataclass(frozen=True, eq=False)
class RobustnessReport:
    configs: list
    tv_vs_analytic: list
    pairwise_tv: np.ndarray
    results: list = field(repr=False)

    def table(self) -> str:
        lines = ["variant                                     TV vs limit law"]
        for cfg, tv in zip(self.configs, self.tv_vs_analytic):
            lines.append(f"{cfg.dist.label():>20} / {cfg.placement_mode.value:<10}  {tv:18.4f}")
        lines.append("pairwise TV between empirical histograms:")
        for i, j in itertools.combinations(range(len(self.configs)), 2):
            lines.append(f"  {i} vs {j}: {self.pairwise_tv[i, j]:.4f}")
        return "\n".join(lines)


def robustness_experiment(variants) -> RobustnessReport:
    """Run variants that differ only in height law or tooth placement."""
    variants = list(variants)
    if not variants:
        raise ValueError("no variants")
    base = variants[0]
    for v in variants[1:]:
        if (v.kind, v.n_teeth, v.trials, v.bins_x, v.bins_y) != (base.kind, base.n_teeth, base.trials,
                                                                 base.bins_x, base.bins_y):
            raise ValueError("variants may differ only in dist, placement and seed")
    results = [_run(v) for v in variants]
    k = len(results)
    pairwise = np.zeros((k, k))
    for i, j in itertools.combinations(range(k), 2):
        pairwise[i, j] = pairwise[j, i] = tv_distance(results[i].histogram.counts, results[j].histogram.counts)
    return RobustnessReport(variants, [r.fit.tv_distance for r in results], pairwise, results)
