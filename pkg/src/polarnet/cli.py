"""Command-line interface: ``metrics``, ``generate``, ``simulate``, ``compare``.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for data
or validation errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, parse_config
from .errors import ConfigError, PolarnetError
from .experiment import SUBPOPS, compare_scenarios, run_ensemble
from .generators import GENERATOR_KINDS, GeneratorSpec
from .graph import Opinion, load_edge_list, save_edge_list, subgraph_by_opinion
from .metrics import metrics_report
from .output import CurveGroup, emit_svg_plot, write_curves_csv, write_metrics_csv, write_summary_csv

_POLARIZED_COLOR = "#c62828"
_HOMOGENEOUS_COLOR = "#757575"


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key=value config file")
    sub.add_argument("--edges", help="edge CSV (overrides config)")
    sub.add_argument("--attrs", help="attribute CSV (overrides config)")
    sub.add_argument("--seed", type=int, help="master seed (overrides config)")
    sub.add_argument("--out", help="output directory (overrides config)")
    sub.add_argument("--threads", type=int, help="worker threads, 0 = auto")


def _load_run_config(args) -> RunConfig:
    cfg = parse_config(args.config) if args.config else RunConfig()
    overrides = {}
    if args.edges is not None:
        overrides["edges"] = args.edges
    if args.attrs is not None:
        overrides["attrs"] = args.attrs
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.threads is not None:
        if args.threads < 0:
            raise ConfigError("--threads must be >= 0 (0 = auto)")
        overrides["threads"] = args.threads
    return cfg.with_overrides(**overrides) if overrides else cfg


def cmd_metrics(args) -> int:
    if args.kmin < 1:
        raise ConfigError("--kmin must be >= 1")
    g = load_edge_list(args.edges, args.attrs)
    if args.subgraph:
        g = subgraph_by_opinion(g, Opinion.parse(args.subgraph))
    report = metrics_report(g, k_min=args.kmin)
    write_metrics_csv(report, args.out)
    print(f"wrote {args.out}")
    return 0


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        seed=args.seed,
        n=args.n,
        p=args.p,
        k_ring=args.k_ring,
        p_rewire=args.p_rewire,
        m=args.m,
        n_pro=args.n_pro,
        n_anti=args.n_anti,
        p_in=args.p_in,
        p_out=args.p_out,
    )
    g = spec.build()
    save_edge_list(g, args.out_edges, args.out_attrs)
    print(f"wrote {args.out_edges} ({g.n} nodes, {g.edge_count} edges) and {args.out_attrs}")
    return 0


def cmd_simulate(args) -> int:
    cfg = _load_run_config(args)
    g = cfg.resolve_graph()
    summary = run_ensemble(
        g,
        cfg.params,
        cfg.strategy_enum(),
        cfg.n_runs,
        cfg.master_seed,
        seeding=cfg.seeding(),
        threads=cfg.threads,
        homogeneous_redraw=cfg.homogeneous_redraw,
    )
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = out_dir / "curves.csv"
    write_curves_csv(summary, curves)
    print(f"wrote {curves}")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_run_config(args)
    g = cfg.resolve_graph()
    comparison = compare_scenarios(
        g,
        cfg.params,
        cfg.n_runs,
        cfg.master_seed,
        seeding=cfg.seeding(),
        threads=cfg.threads,
        homogeneous_redraw=cfg.homogeneous_redraw,
    )
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_curves_csv(comparison.polarized, out_dir / "curves_polarized.csv")
    write_curves_csv(comparison.homogeneous, out_dir / "curves_homogeneous.csv")
    write_summary_csv(comparison, out_dir / "summary.csv")
    series_of = {
        "unvaccinated": lambda r: r.daily_frac_unvacc,
        "vaccinated": lambda r: r.daily_frac_vacc,
        "all": lambda r: r.daily_frac_all,
    }
    for subpop in SUBPOPS:
        pick = series_of[subpop]
        groups = [
            CurveGroup(
                "polarized", _POLARIZED_COLOR, [pick(r) for r in comparison.polarized.runs]
            ),
            CurveGroup(
                "homogeneous",
                _HOMOGENEOUS_COLOR,
                [pick(r) for r in comparison.homogeneous.runs],
            ),
        ]
        emit_svg_plot(
            groups,
            f"Daily new infections among {subpop}",
            out_dir / f"curves_{subpop}.svg",
        )
    ratio = comparison.ar_ratio["unvaccinated"]
    print(f"wrote {out_dir}/summary.csv (unvaccinated AR ratio {ratio:.3f})")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="polarnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_metrics = sub.add_parser("metrics", help="structural metrics of an annotated graph")
    p_metrics.add_argument("--edges", required=True)
    p_metrics.add_argument("--attrs", required=True)
    p_metrics.add_argument("--subgraph", choices=["pro", "anti"], help="restrict to one opinion community")
    p_metrics.add_argument("--kmin", type=int, default=1, help="smallest degree in the power-law fit")
    p_metrics.add_argument("--out", required=True, help="report CSV path")
    p_metrics.set_defaults(func=cmd_metrics)

    p_gen = sub.add_parser("generate", help="write a synthetic graph in the load format")
    p_gen.add_argument("--kind", required=True, choices=list(GENERATOR_KINDS))
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--p", type=float)
    p_gen.add_argument("--k-ring", type=int)
    p_gen.add_argument("--p-rewire", type=float)
    p_gen.add_argument("--m", type=int)
    p_gen.add_argument("--n-pro", type=int)
    p_gen.add_argument("--n-anti", type=int)
    p_gen.add_argument("--p-in", type=float)
    p_gen.add_argument("--p-out", type=float)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out-edges", required=True)
    p_gen.add_argument("--out-attrs", required=True)
    p_gen.set_defaults(func=cmd_generate)

    p_sim = sub.add_parser("simulate", help="Monte Carlo ensemble for one allocation strategy")
    _add_run_flags(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_cmp = sub.add_parser("compare", help="polarized vs homogeneous allocation on one graph")
    _add_run_flags(p_cmp)
    p_cmp.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors exit 1 via _Parser, --help exits 0
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except PolarnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
