"""Command-line front end.

Writes the support densities, walk-survival curves and Monte-Carlo
histograms as CSV, and runs the acceptance checks.  Exit status is 0 on
success, 1 on a failed check or an I/O error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, circle, interval, montecarlo, verification
from .comb import Placement, parse_distribution
from .montecarlo import ExperimentConfig, Kind

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    """Shortest round-trip decimal."""
    return repr(float(x))


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(v if isinstance(v, str) else fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="\n")


# ---------------------------------------------------------------------------
# table builders


def density_interval_rows(grid: int):
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    a1 = np.linspace(-1.0, 0.0, grid)
    a2 = np.linspace(0.0, 1.0, grid)
    return [(x, y, interval.pair_density(x, y)) for x in a1 for y in a2]


def density_circle_rows(grid: int):
    """Grid points of the closed gap triangle, selected by index so corners are exact."""
    if grid < 2:
        raise UsageError("--grid must be at least 2")
    t = np.linspace(0.0, math.pi, grid)
    rows = []
    for i in range(grid):
        for j in range(grid - 1 - i, grid):
            rows.append((t[i], t[j], circle.triple_density(t[i], t[j], check=False)))
    return rows


def pstar_rows(kind: str, mus):
    f = interval.beam_survival if kind == "interval" else circle.hoop_survival
    return [(m, f(m)) for m in mus]


def mc_rows(result: montecarlo.ExperimentResult):
    """Per-bin counts with empirical and limit densities on a common scale.

    Both densities are bin averages over the full rectangular bin, scaled so
    that they are comparable with the limit density itself.
    """
    h = result.histogram
    norm = 1.0 if h.domain.value == "interval_rect" else 3.0
    area = h.bin_areas()
    emp = h.fractions() * norm / area
    ana = result.expected * norm / area
    rows = []
    for i in range(h.counts.shape[0]):
        for j in range(h.counts.shape[1]):
            rows.append((h.x_edges[i], h.x_edges[i + 1], h.y_edges[j], h.y_edges[j + 1],
                         str(int(h.counts[i, j])), emp[i, j], ana[i, j]))
    return rows


MC_HEADER = ("bin_lo_1", "bin_hi_1", "bin_lo_2", "bin_hi_2", "count", "empirical_density", "analytic_density")


# ---------------------------------------------------------------------------
# commands


def _config(args, kind: Kind) -> ExperimentConfig:
    teeth = args.teeth
    if teeth is None:
        # the interval's midpoint grid needs an even count
        teeth = args.default_teeth + (kind is Kind.CIRCLE)
    try:
        return ExperimentConfig(kind, teeth, args.trials, parse_distribution(args.dist), args.bins,
                                args.bins, args.seed, None if args.placement is None else Placement(args.placement))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_density_interval(args):
    _emit(csv_text(("a1", "a2", "p"), density_interval_rows(args.grid)), args.out)
    return EXIT_OK


def cmd_density_circle(args):
    _emit(csv_text(("theta1", "theta2", "p_T"), density_circle_rows(args.grid)), args.out)
    return EXIT_OK


def cmd_pstar(args):
    if args.mu:
        mus = args.mu
        if any(not 0 <= m <= 1 for m in mus):
            raise UsageError("--mu values must lie in [0, 1]")
    else:
        if args.steps < 1:
            raise UsageError("--steps must be at least 1")
        mus = np.linspace(0.0, 1.0, args.steps + 1)
    _emit(csv_text(("mu", "p_star"), pstar_rows(args.kind, mus)), args.out)
    return EXIT_OK


def cmd_mc(args):
    cfg = _config(args, Kind(args.kind))
    result = montecarlo._run(cfg)
    _emit(csv_text(MC_HEADER, mc_rows(result)), args.out)
    if args.out is not None:
        Path(args.out).with_suffix(".json").write_text(result.manifest.to_json(), encoding="utf-8", newline="\n")
    fit = result.fit
    print(f"TV {fit.tv_distance:.4f}  chi2/dof {fit.reduced_chi_square:.3f}  redrawn {result.degenerate_count}"
          f"  ({result.elapsed_seconds:.1f} s)", file=sys.stderr)
    return EXIT_OK


def cmd_comb_below(args):
    kind = Kind(args.kind)
    need = 2 if kind is Kind.INTERVAL else 3
    if len(args.depths) != need or len(args.at) != need:
        raise UsageError(f"--depths and --at need {need} values each")
    try:
        if kind is Kind.INTERVAL:
            placement = interval.LinePlacement(*args.depths, *args.at)
            limit = interval.prob_comb_below_line(placement)
        else:
            placement = circle.plane_coefficients(args.at, args.depths)
            limit = circle.prob_comb_below_plane(placement)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    est = montecarlo.estimate_comb_below(_config(args, kind), placement)
    rows = [(limit, est.value, est.stderr, est.z_score(limit))]
    _emit(csv_text(("limit", "estimate", "stderr", "z"), rows), args.out)
    return EXIT_OK


def cmd_robustness(args):
    variants = []
    for spec in args.variant:
        dist, _, placement = spec.partition("/")
        args.dist, args.placement = dist, placement or None
        variants.append(_config(args, Kind.INTERVAL))
    report = montecarlo.robustness_experiment(variants)
    _emit(report.table() + "\n", args.out)
    return EXIT_OK


def cmd_verify(args):
    results = verification.run_criteria(args.profile, progress=lambda r: print(verification.format_row(r),
                                                                              flush=True))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)} of {len(results)} criteria passed")
    return EXIT_OK if not failed else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="roughsupport", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", default=None, help="output path (default: stdout)")

    def mc_flags(sp, teeth, trials):
        sp.add_argument("--teeth", type=int, default=None)
        sp.set_defaults(default_teeth=teeth)
        sp.add_argument("--trials", type=int, default=trials)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--bins", type=int, default=20)
        sp.add_argument("--dist", default="uniform", help="uniform | beta:a,b | triangular:m")
        sp.add_argument("--placement", choices=[m.value for m in Placement], default=None)

    sp = sub.add_parser("density-interval", help="pair density on a grid")
    sp.add_argument("--grid", type=int, default=101)
    out(sp)
    sp.set_defaults(func=cmd_density_interval)

    sp = sub.add_parser("density-circle", help="gap-triple density on the triangle")
    sp.add_argument("--grid", type=int, default=101)
    out(sp)
    sp.set_defaults(func=cmd_density_circle)

    sp = sub.add_parser("pstar", help="walk-survival probability against mass fraction")
    sp.add_argument("--kind", choices=["interval", "circle"], default="interval")
    sp.add_argument("--steps", type=int, default=100)
    sp.add_argument("--mu", type=float, nargs="+", default=None)
    out(sp)
    sp.set_defaults(func=cmd_pstar)

    sp = sub.add_parser("mc", help="Monte-Carlo histogram with manifest")
    sp.add_argument("--kind", choices=["interval", "circle"], default="interval")
    mc_flags(sp, 1000, 10**5)
    out(sp)
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("comb-below", help="probability a comb lies below a fixed line or plane")
    sp.add_argument("--kind", choices=["interval", "circle"], default="interval")
    sp.add_argument("--depths", type=float, nargs="+", required=True, help="tip depths in units of 1/N")
    sp.add_argument("--at", type=float, nargs="+", required=True, help="tip positions or angles")
    mc_flags(sp, 2000, 10**5)
    out(sp)
    sp.set_defaults(func=cmd_comb_below)

    sp = sub.add_parser("robustness", help="compare height laws and placements")
    sp.add_argument("--variant", nargs="+", default=["uniform/midpoint", "beta:2,2/midpoint", "uniform/random"],
                    help="dist/placement pairs")
    mc_flags(sp, 1000, 10**5)
    out(sp)
    sp.set_defaults(func=cmd_robustness)

    sp = sub.add_parser("verify", help="run the acceptance checks")
    sp.add_argument("--profile", choices=sorted(verification.PROFILES), default="fast")
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_FAIL
