# src/cli.py
"""Command-line entry point.

Subcommands: ingest, density, dm, compare, landau, cf, scan, detect.
Settings resolve as built-in defaults < config/config.yaml < --config FILE < flags.
"""
import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from mpmath import mp

from src.data_pipeline.input_loader import (load_alpha, load_relation_system, load_test_function,
                                            parse_inline_alpha, save_relation_system)
from src.data_pipeline.zero_cache import write_cache
from src.data_pipeline.zero_store import ZeroSet, load_zeros
from src.insights.empirical import dm_grid, grid_correlation, resolution_from_delta, theorem_check
from src.insights.report_generator import ReportGenerator
from src.number_theory.density import (g_eval_series, g_grid, g_sup_bound, midpoint_points,
                                       quadrature_h_g, series_tail_bound)
from src.number_theory.diophantine import (DiophantineConfig, check_linear_form_bound, classify_EF,
                                           continued_fraction, convergent_inequality_check,
                                           u_alpha_intervals, u_alpha_membership)
from src.number_theory.landau import landau_report
from src.number_theory.relations import AlphaVector, DetectionBounds, detect_relations, solve_alpha
from src.utils.config_loader import load_config
from src.utils.errors import UsageError, ZetaFractionalError
from src.utils.logger import setup_logger

logger = logging.getLogger(__name__)

COMMANDS = ("ingest", "density", "dm", "compare", "landau", "cf", "scan", "detect")
IO_EXIT_CODE = 5
ALPHA_COMMANDS = ("dm", "compare", "cf", "scan", "detect")
ZERO_COMMANDS = ("dm", "compare", "landau")


@dataclass
class RunConfig:
    """Resolved settings for a single command"""

    command: str
    config: Dict[str, Any]
    zeros_path: Optional[str] = None
    alpha_file: Optional[str] = None
    alpha_inline: Optional[str] = None
    alpha_relations: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @property
    def workers(self) -> int:
        return self.config['runtime']['workers']

    @property
    def precision(self) -> int:
        return self.config['precision']['bits']

    @property
    def chunk_size(self) -> int:
        return self.config['landau']['chunk_size']

    @property
    def alpha_sources(self) -> List[str]:
        return [s for s in (self.alpha_file, self.alpha_inline, self.alpha_relations) if s is not None]

    def validate(self) -> "RunConfig":
        if self.workers < 1:
            raise UsageError(f"--workers must be >= 1, got {self.workers}")
        if self.command in ALPHA_COMMANDS and len(self.alpha_sources) != 1:
            raise UsageError(f"'{self.command}' needs exactly one of --alpha, --alpha-values, --alpha-relations; "
                             f"got {len(self.alpha_sources)}")
        if self.command in ZERO_COMMANDS and not self.zeros_path:
            raise UsageError(f"'{self.command}' needs --zeros (or data.zeros_path in the config)")
        for path in (self.zeros_path, self.alpha_file, self.alpha_relations,
                     self.params.get('relations'), self.params.get('h_spec'), self.params.get('input')):
            if path is not None and not os.path.exists(path):
                raise UsageError(f"file not found: {path}")
        return self

    def load_alpha(self) -> AlphaVector:
        if self.alpha_file is not None:
            return load_alpha(self.alpha_file, self.precision)
        if self.alpha_inline is not None:
            return parse_inline_alpha(self.alpha_inline, self.precision)
        return solve_alpha(load_relation_system(self.alpha_relations), self.precision)

    def load_zeros(self) -> ZeroSet:
        return load_zeros(self.zeros_path)


def _add_alpha_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("alpha source (exactly one)")
    group.add_argument("--alpha", dest="alpha_file", help="JSON file with decimal or exact alpha")
    group.add_argument("--alpha-values", dest="alpha_inline", help="comma-separated decimals, e.g. 0.5,0.75")
    group.add_argument("--alpha-relations", dest="alpha_relations",
                       help="relation-system JSON with r = n; alpha is solved exactly")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zfp", description="Fractional parts of zeta zeros: limiting density versus empirical statistics")
    parser.add_argument("--config", help="YAML or JSON config file")
    parser.add_argument("--workers", type=int, help="worker threads for summation and binning")
    parser.add_argument("--precision-bits", type=int, help="working precision for alpha and relations")
    parser.add_argument("--out-dir", help="directory for output files")
    parser.add_argument("--format", action="append", choices=["csv", "json", "pgm"],
                        help="output format, repeatable (default from config)")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse a text table of zeros into a binary cache")
    ingest.add_argument("input")
    ingest.add_argument("output", nargs="?", help="cache path (default: input + cache suffix)")

    density = sub.add_parser("density", help="sample g_alpha on an R x R grid")
    density.add_argument("--relations", required=True)
    density.add_argument("--resolution", type=int)
    density.add_argument("--series-terms", type=int, help="compare against the series cut at K terms (0 skips)")
    density.add_argument("--diverging", action="store_true")

    dm = sub.add_parser("dm", help="empirical DM grid")
    dm.add_argument("--zeros")
    _add_alpha_arguments(dm)
    dm.add_argument("--T", type=float, help="height cut (default: largest zero)")
    size = dm.add_mutually_exclusive_group()
    size.add_argument("--delta", type=float, help="cell side 1/R")
    size.add_argument("--resolution", type=int)
    dm.add_argument("--use-asymptotic", action="store_true", help="N(T) from the smooth formula")
    dm.add_argument("--relations", help="also correlate DM with g for this relation system")
    dm.add_argument("--diverging", action="store_true")

    compare = sub.add_parser("compare", help="h-sums along T against the integral of h g")
    compare.add_argument("--zeros")
    compare.add_argument("--relations", required=True)
    compare.add_argument("--h-spec", dest="h_spec", required=True)
    compare.add_argument("--T", dest="T_list", type=float, nargs="+", required=True)
    compare.add_argument("--tol", type=float, help="largest accepted row residual |b.alpha - P| for the given alpha")
    _add_alpha_arguments(compare)

    landau = sub.add_parser("landau", help="sum of x^(i gamma) against its main term")
    landau.add_argument("--zeros")
    landau.add_argument("--x", type=float, required=True)
    landau.add_argument("--T", type=float)
    landau.add_argument("--extended-phase", action="store_true")

    cf = sub.add_parser("cf", help="continued fraction of alpha_1/alpha_2")
    _add_alpha_arguments(cf)
    cf.add_argument("--terms", type=int)
    cf.add_argument("--T", type=float, help="report membership of T in U_alpha")
    cf.add_argument("--epsilon", type=float)
    cf.add_argument("--B", type=float)

    scan = sub.add_parser("scan", help="scan |m.alpha| e^||m|| over ||m|| <= J")
    _add_alpha_arguments(scan)
    scan.add_argument("--J", type=int)
    scan.add_argument("--C", type=float)
    scan.add_argument("--mu", type=float)

    detect = sub.add_parser("detect", help="search for relations m.alpha = (a/q) log p/(2 pi)")
    _add_alpha_arguments(detect)
    detect.add_argument("--max-norm", type=int)
    detect.add_argument("--max-prime", type=int)
    detect.add_argument("--max-q", type=int)
    detect.add_argument("--max-a", type=int)
    detect.add_argument("--tol", type=float)
    detect.add_argument("--output", help="relation-system JSON (default: out-dir/relations.json)")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        'runtime': {'workers': args.workers},
        'precision': {'bits': args.precision_bits},
        'data': {'output_dir': args.out_dir, 'zeros_path': getattr(args, 'zeros', None)},
        'output': {'format': args.format},
        'logging': {'level': args.log_level},
    }


def resolve_run(args: argparse.Namespace) -> RunConfig:
    config = load_config(args.config, _overrides(args))
    ignored = {'command', 'config', 'workers', 'precision_bits', 'out_dir', 'format', 'log_level',
               'zeros', 'alpha_file', 'alpha_inline', 'alpha_relations'}
    params = {k: v for k, v in vars(args).items() if k not in ignored}
    alpha_relations = getattr(args, "alpha_relations", None)
    if args.command == "compare" and not any((args.alpha_file, args.alpha_inline, alpha_relations)):
        alpha_relations = args.relations
    return RunConfig(
        command=args.command,
        config=config,
        zeros_path=config['data']['zeros_path'] if args.command in ZERO_COMMANDS else None,
        alpha_file=getattr(args, 'alpha_file', None),
        alpha_inline=getattr(args, 'alpha_inline', None),
        alpha_relations=alpha_relations,
        params=params,
    )


def _pick(value, default):
    return default if value is None else value


def cmd_ingest(run: RunConfig, reports: ReportGenerator) -> Dict:
    source = run.params['input']
    target = run.params.get('output') or source + run.config['data']['cache_suffix']
    zeros = load_zeros(source)
    with open(target, "wb") as sink:
        byte_count = write_cache(zeros, sink)
    summary = {"input": source, "output": target, "count": zeros.count, "t_max": zeros.t_max, "bytes": byte_count}
    print(f"ingested {zeros.count} zeros into {target}")
    return summary


def cmd_density(run: RunConfig, reports: ReportGenerator) -> Dict:
    system = load_relation_system(run.params['relations'])
    resolution = _pick(run.params.get('resolution'), run.config['density']['resolution'])
    grid = g_grid(system, resolution)
    summary = {
        "system": system.to_dict(), "resolution": resolution, "mean": grid.mean(),
        "min": float(grid.values.min()), "max": float(grid.values.max()),
        "argmin": list(grid.argmin_cell()), "sup_bound": g_sup_bound(system),
    }
    K = _pick(run.params.get('series_terms'), run.config['density']['series_terms'])
    if K and system.r:
        series = g_eval_series(system, midpoint_points(2, resolution), K)
        summary["series_terms"] = K
        summary["series_max_difference"] = float(np.max(np.abs(series - grid.values)))
        summary["series_tail_bound"] = series_tail_bound(system, K)
    reports.write_grid(grid, "g_alpha", run.params.get('diverging') or None)
    reports.write_report(summary, "density")
    print(f"g grid {resolution}x{resolution}: mean {grid.mean():.3e}, min {summary['min']:.6f}")
    return summary


def cmd_dm(run: RunConfig, reports: ReportGenerator) -> Dict:
    zeros = run.load_zeros()
    alpha = run.load_alpha()
    T = run.params.get('T')
    T = zeros.default_height() if T is None else T
    if run.params.get('delta') is not None:
        resolution = resolution_from_delta(run.params['delta'])
    else:
        resolution = _pick(run.params.get('resolution'), run.config['empirical']['resolution'])
    use_asymptotic = run.params.get('use_asymptotic') or run.config['empirical']['use_asymptotic_count']

    result = dm_grid(zeros, alpha, T, resolution, use_asymptotic, run.workers, run.chunk_size)
    summary = {**result.metadata(), "mass_balance": result.mass_balance(),
               "mean": result.grid.mean(), "argmin": list(result.grid.argmin_cell())}
    if run.params.get('relations'):
        system = load_relation_system(run.params['relations'])
        summary["correlation_with_g"] = grid_correlation(result.grid, g_grid(system, resolution))
    reports.write_grid(result.grid, "dm_grid", run.params.get('diverging') or None)
    reports.write_report(summary, "dm")
    print(f"DM grid {resolution}x{resolution}: {result.n_obs} zeros up to T={T}")
    return summary


def cmd_compare(run: RunConfig, reports: ReportGenerator) -> Dict:
    zeros = run.load_zeros()
    system = load_relation_system(run.params['relations'])
    h = load_test_function(run.params['h_spec'])
    alpha = run.load_alpha()
    settings = run.config['empirical']
    report = theorem_check(zeros, h, system, alpha, run.params['T_list'], run.workers,
                           tolerance=_pick(run.params.get('tol'), settings['consistency_tolerance']),
                           noise_allowance=settings['tail_noise_allowance'],
                           chunk_size=run.chunk_size,
                           truncation_threshold=2.0 ** run.config['density']['truncation_threshold_log2'])
    summary = report.to_dict()
    if system.n == 2:
        summary["quadrature_integral_h_g"] = quadrature_h_g(system, h, run.config['density']['quadrature_resolution'])
    table = report.to_frame()
    reports.write_table(table, "compare")
    reports.write_report(summary, "compare")
    reports.print_table(table, f"integral of h g = {report.limit:.10g}")
    return summary


def cmd_landau(run: RunConfig, reports: ReportGenerator) -> Dict:
    zeros = run.load_zeros()
    settings = run.config['landau']
    extended = run.params.get('extended_phase') or settings['extended_phase']
    report = landau_report(zeros, run.params['x'], run.params.get('T'), run.workers, run.chunk_size, extended,
                           extended_bits=settings['extended_phase_bits'],
                           degenerate=2.0 ** settings['degenerate_log_ratio_log2'])
    reports.write_report(report.to_dict(), "landau")
    reports.print_table(reports.landau_table(report))
    return report.to_dict()


def cmd_cf(run: RunConfig, reports: ReportGenerator) -> Dict:
    alpha = run.load_alpha()
    if alpha.n != 2:
        raise UsageError(f"'cf' needs a 2-dimensional alpha, got n = {alpha.n}")
    settings = run.config['diophantine']
    with mp.workprec(alpha.precision):
        xi = alpha.values[0] / alpha.values[1]
    cf = continued_fraction(xi, _pick(run.params.get('terms'), settings['max_terms']), alpha.precision,
                            settings['min_remaining_bits'])
    checks = convergent_inequality_check(alpha.values[0], alpha.values[1], cf, alpha.precision)
    summary = {"alpha": alpha.decimal_strings(30), **cf.to_dict(),
               "identities_hold": cf.verify_identities(),
               "convergent_checks": [check.to_dict() for check in checks]}

    epsilon = _pick(run.params.get('epsilon'), settings['epsilon'])
    B = _pick(run.params.get('B'), settings['B'])
    DiophantineConfig(C=settings['C'], epsilon=epsilon, B=B, J=settings['J'], mu=settings['mu'])
    summary["u_alpha"] = {"epsilon": epsilon, "B": B,
                          "intervals": [[n, lo, hi] for n, lo, hi in
                                        u_alpha_intervals(cf, epsilon, B, settings['exp_cutoff'])]}
    if run.params.get('T') is not None:
        membership = u_alpha_membership(cf, run.params['T'], epsilon, B, settings['exp_cutoff'])
        summary["u_alpha"]["T"] = run.params['T']
        summary["u_alpha"]["membership"] = membership.to_dict()

    reports.write_report(summary, "cf")
    reports.print_table(reports.continued_fraction_table(cf, checks))
    return summary


def cmd_scan(run: RunConfig, reports: ReportGenerator) -> Dict:
    alpha = run.load_alpha()
    settings = run.config['diophantine']
    J = _pick(run.params.get('J'), settings['J'])
    C = _pick(run.params.get('C'), settings['C'])
    mu = _pick(run.params.get('mu'), settings['mu'])
    report = check_linear_form_bound(alpha, C, J, mu)
    summary = {"alpha": alpha.decimal_strings(30), **report.to_dict()}
    if alpha.n == 2:
        summary["partition"] = classify_EF(alpha, J, C).to_dict()
    reports.write_report(summary, "scan")
    state = "holds" if report.holds else "fails"
    print(f"|m.alpha| e^||m|| > {C} {state} for ||m|| <= {J}; minimum at {list(report.argmin)}")
    return summary


def cmd_detect(run: RunConfig, reports: ReportGenerator) -> Dict:
    alpha = run.load_alpha()
    settings = run.config['relations']
    bounds = DetectionBounds(
        max_norm=_pick(run.params.get('max_norm'), settings['max_norm']),
        max_prime=_pick(run.params.get('max_prime'), settings['max_prime']),
        max_q=_pick(run.params.get('max_q'), settings['max_q']),
        max_a=_pick(run.params.get('max_a'), settings['max_a']),
    )
    system = detect_relations(alpha, bounds, _pick(run.params.get('tol'), settings['tolerance']))
    output = run.params.get('output') or os.path.join(reports.out_dir, "relations.json")
    directory = os.path.dirname(output)
    if directory:
        os.makedirs(directory, exist_ok=True)
    save_relation_system(system, output)
    reports.print_table(reports.relation_table(system), f"r = {system.r} relation(s), written to {output}")
    return {"system": system.to_dict(), "output": output}


HANDLERS = {
    "ingest": cmd_ingest, "density": cmd_density, "dm": cmd_dm, "compare": cmd_compare,
    "landau": cmd_landau, "cf": cmd_cf, "scan": cmd_scan, "detect": cmd_detect,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        run = resolve_run(args).validate()
        setup_logger(run.config)
        reports = ReportGenerator(run.config)
        logger.info(f"Running '{run.command}' with {run.workers} worker(s)")
        HANDLERS[run.command](run, reports)
    except ZetaFractionalError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        logger.error(f"io: {e}")
        print(f"error: io: {e}", file=sys.stderr)
        return IO_EXIT_CODE
    return 0


if __name__ == "__main__":
    sys.exit(main())
