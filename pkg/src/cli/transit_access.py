import logging
import os
import sys
from argparse import ArgumentParser
from typing import Optional, Sequence

from transit_access.analysis.metrics import Measure, top_k_overlap
from transit_access.analysis.socio import (
    accessible_share,
    borough_summaries,
    correlate,
    region_summary,
)
from transit_access.common import constants
from transit_access.common.config import (
    CLOSENESS_CHOICES,
    NETWORK_CHOICES,
    POWER_LAW_CHOICES,
    Config,
    load_config,
)
from transit_access.common.constants import (
    CORRELATION_PAIRS,
    EXIT_INPUT_ERROR,
    EXIT_INVARIANT,
    EXIT_OK,
)
from transit_access.common.errors import (
    AnalysisError,
    InputError,
    InvariantViolation,
    TransitAccessError,
)
from transit_access.common.logger import attach_file_handler, detach_file_handler, logger
from transit_access.common.utils import json_float, write_json
from transit_access.ingest.parsers import load_dataset
from transit_access.network.construct import (
    NetworkKind,
    line_accessibility_share,
    mixed_access_stations,
)
from transit_access.report import figures, tables
from transit_access.report.manifest import build_manifest, write_manifest
from transit_access.report.pipeline import REPORTED_MEASURES, AnalysisRun

COMMANDS = ("build", "centrality", "figures", "socio", "all")


def analysis_command_parser():
    parser = ArgumentParser(
        prog="transit-access",
        usage="transit-access {build, centrality, figures, socio, all} --stations S "
        "--branches B --access A [--boroughs T] [options]",
        description="Build full and accessible transit networks and report their centrality.",
        allow_abbrev=False,
    )

    parser.add_argument("command", choices=COMMANDS, help="The analysis step to run.")

    parser.add_argument("--stations", required=True, help="stations.csv")
    parser.add_argument("--branches", required=True, help="line_branches.csv")
    parser.add_argument("--access", required=True, help="accessibility.csv")
    parser.add_argument(
        "--boroughs",
        default=None,
        help="Borough socioeconomic table. Required by `socio`; optional otherwise.",
    )

    # Flags below default to None so the config file (and environment) values survive
    # unless they are set explicitly.
    parser.add_argument("--network", choices=NETWORK_CHOICES, default=None)
    parser.add_argument("--closeness-convention", choices=CLOSENESS_CHOICES, default=None)
    parser.add_argument("--out", default=None, help="Output directory.")
    parser.add_argument(
        "--config-file",
        default=None,
        help="YAML config with default values; command-line flags take precedence.",
    )
    parser.add_argument("--top-k", type=int, default=None, help="Rows in ranked tables.")
    parser.add_argument(
        "--exclude-lines",
        default=None,
        help="Comma-separated line ids to drop before building the networks.",
    )
    parser.add_argument("--power-law-method", choices=POWER_LAW_CHOICES, default=None)
    parser.add_argument(
        "--dataset-notes",
        default=None,
        help="Known differences between the inputs and published counts, kept in the manifest.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    return parser


def resolve_config(args) -> Config:
    exclude = None
    if args.exclude_lines is not None:
        exclude = sorted({line.strip() for line in args.exclude_lines.split(",") if line.strip()})
    return load_config(args.config_file).with_overrides(
        network=args.network,
        closeness_convention=args.closeness_convention,
        out_dir=args.out,
        top_k=args.top_k,
        exclude_lines=exclude,
        power_law_method=args.power_law_method,
        dataset_notes=args.dataset_notes,
    )


# ==============================================================================
# Commands
# ==============================================================================
def cmd_build(run: AnalysisRun) -> None:
    out_dir = run.config.out_dir
    for kind in run.kinds:
        graph = run.graph(kind)
        stats = tables.write_network(out_dir, graph, run.diameter(kind))
        logger.info(
            f"{kind}: {stats['nodes']} nodes, {stats['edges']} edges, "
            f"diameter {stats['diameter']}, connected={stats['connected']}"
        )
    dataset = run.dataset
    shares = line_accessibility_share(dataset.branches, dataset.access_records, run.exclude_lines)
    tables.write_line_shares(os.path.join(out_dir, "access", "line_shares.csv"), shares)
    kept_lines = {b.line_id for b in dataset.branches} - set(run.exclude_lines)
    mixed = mixed_access_stations(dataset.stations, dataset.access_records, kept_lines)
    tables.write_mixed_access(os.path.join(out_dir, "access", "mixed_access.csv"), mixed)


def cmd_centrality(run: AnalysisRun) -> None:
    out_dir = run.config.out_dir
    for kind in run.kinds:
        graph = run.graph(kind)
        base = os.path.join(out_dir, str(kind))
        for measure in REPORTED_MEASURES:
            table = run.table(kind, measure)
            tables.write_scores(os.path.join(base, f"scores_{measure}.csv"), table, graph)
            tables.write_top_table(
                os.path.join(base, f"top_{measure}.csv"),
                table,
                run.config.top_k,
                graph,
                run.accessible_ids,
            )
            leader = table.ranked()[0] if len(table) else None
            if leader is not None:
                logger.info(f"{kind} {measure}: highest {leader[0]} ({leader[1]:.3f})")


def _summaries(run: AnalysisRun):
    """Borough summaries flagged with the top stations of the accessible network when built."""
    kind = NetworkKind.ACCESSIBLE if NetworkKind.ACCESSIBLE in run.kinds else run.kinds[0]
    flagged = [run.table(kind, m) for m in REPORTED_MEASURES]
    return borough_summaries(
        run.dataset.stations,
        run.accessible_ids,
        run.dataset.boroughs,
        flagged,
        k=run.config.top_k,
    )


def cmd_figures(run: AnalysisRun) -> None:
    out_dir = run.config.out_dir
    graphs = [run.graph(kind) for kind in run.kinds]
    accessible = (
        run.graph(NetworkKind.ACCESSIBLE) if NetworkKind.ACCESSIBLE in run.kinds else None
    )

    trends: dict[str, dict] = {}
    for measure in REPORTED_MEASURES:
        measure_tables = [run.table(g.kind, measure) for g in graphs]
        figures.write_sorted_curve(out_dir, str(measure), measure_tables)
        figures.write_degree_scatter(out_dir, str(measure), list(zip(graphs, measure_tables)))
        for g, table in zip(graphs, measure_tables):
            degrees = run.table(g.kind, Measure.DEGREE)
            trends.setdefault(str(g.kind), {})[str(measure)] = figures.degree_trend(
                g, table, degrees
            )
            figures.write_top_subgraph(out_dir, g, table, run.config.top_k, accessible)
    figures.write_trendlines(out_dir, trends)
    figures.write_degree_distributions(
        out_dir, graphs, method=run.config.power_law_method, kmin=run.config.power_law_kmin
    )

    if run.dataset.boroughs:
        figures.write_borough_bars(out_dir, _summaries(run))
    else:
        logger.info("No borough table given; skipping borough bar data")


def cmd_socio(run: AnalysisRun) -> None:
    if not run.dataset.boroughs:
        raise InputError("the socio command needs --boroughs")
    out_dir = os.path.join(run.config.out_dir, "socio")
    stations = run.dataset.stations
    summaries = _summaries(run)
    tables.write_borough_summary(os.path.join(out_dir, "borough_summary.csv"), summaries)
    tables.write_region_summary(
        os.path.join(out_dir, "region_summary.csv"), region_summary(stations, run.accessible_ids)
    )

    correlations = []
    for x, y in CORRELATION_PAIRS:
        try:
            report = correlate(summaries, x, y)
            correlations.append(tables.correlation_payload(report))
            logger.info(
                f"{x} vs {y}: pearson {report.pearson_r:.3f}, spearman {report.spearman_rho:.3f}"
            )
        except AnalysisError as e:
            logger.warning(f"No correlation for {x} vs {y}: {e}")
            payload = tables.correlation_payload(None, str(e))
            payload.update({"x": x, "y": y})
            correlations.append(payload)
    tables.write_correlations(os.path.join(out_dir, "correlations.json"), correlations)

    overview = {
        "stations": len(stations),
        "accessible_stations": len(run.accessible_ids),
        "accessible_share": json_float(accessible_share(stations, run.accessible_ids)),
    }
    if set(run.kinds) == {NetworkKind.ACCESSIBLE, NetworkKind.FULL}:
        overview["top_k_overlap"] = {
            str(m): top_k_overlap(
                run.table(NetworkKind.FULL, m),
                run.table(NetworkKind.ACCESSIBLE, m),
                run.config.top_k,
            )
            for m in REPORTED_MEASURES
        }
    write_json(os.path.join(out_dir, "overview.json"), overview)


def execute_analysis_command(args, config: Config) -> None:
    dataset = load_dataset(args.stations, args.branches, args.access, args.boroughs)
    run = AnalysisRun(dataset, config)

    if args.command == "build":
        cmd_build(run)

    elif args.command == "centrality":
        cmd_centrality(run)

    elif args.command == "figures":
        cmd_figures(run)

    elif args.command == "socio":
        cmd_socio(run)

    elif args.command == "all":
        cmd_build(run)
        cmd_centrality(run)
        cmd_figures(run)
        if dataset.boroughs:
            cmd_socio(run)
        else:
            logger.info("No borough table given; skipping socio")

    inputs = {
        "stations": args.stations,
        "branches": args.branches,
        "access": args.access,
        "boroughs": args.boroughs,
    }
    write_manifest(config.out_dir, build_manifest(config, inputs, args.command))


def _open_run_log() -> Optional[logging.Handler]:
    log_dir = constants.TRANSIT_ACCESS_LOG_DIR
    try:
        os.makedirs(log_dir, exist_ok=True)
        return attach_file_handler(os.path.join(log_dir, os.path.basename(constants.RUN_LOG)))
    except OSError as e:
        logger.warning(f"Run log disabled, cannot write to {log_dir}: {e}")
        return None


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run the command and return the process exit status."""
    parser = analysis_command_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logger.setLevel(logging.DEBUG)

    handler = _open_run_log()
    try:
        config = resolve_config(args)
        logger.debug(f"Effective config: {config.to_dict()}")
        execute_analysis_command(args, config)
        return EXIT_OK
    except InvariantViolation as e:
        logger.error(f"Internal invariant violated: {e}")
        return EXIT_INVARIANT
    except (TransitAccessError, ValueError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR
    finally:
        if handler is not None:
            detach_file_handler(handler)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
