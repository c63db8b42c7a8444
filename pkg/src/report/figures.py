"""Plot-ready CSV/JSON data: curves, scatters, degree distributions, subgraphs."""

import os
from typing import Iterable, Sequence

from transit_access.analysis.metrics import CentralityTable, centrality_correlation, top_k
from transit_access.analysis.power_law import degree_distribution, fit_power_law
from transit_access.analysis.socio import BoroughSummary
from transit_access.analysis.stats import trendline
from transit_access.common.errors import AnalysisError
from transit_access.common.logger import logger
from transit_access.common.utils import format_full, json_float, write_csv, write_json
from transit_access.ingest.records import StationId
from transit_access.network.graph_core import TransitGraph, induced_subgraph
from transit_access.report.tables import LINE_SEPARATOR, correlation_payload

FIGURES_DIR = "figures"


def _path(out_dir: str, name: str) -> str:
    return os.path.join(out_dir, FIGURES_DIR, name)


def write_sorted_curve(out_dir: str, measure: str, tables: Sequence[CentralityTable]) -> int:
    """``(network, rank, value)`` with values descending, one block per network."""
    rows = []
    for table in tables:
        for rank, (_, score) in enumerate(table.ranked(), start=1):
            rows.append((str(table.graph_kind), rank, format_full(score)))
    return write_csv(_path(out_dir, f"sorted_{measure}.csv"), ("network", "rank", "value"), rows)


def write_degree_scatter(
    out_dir: str, measure: str, pairs: Sequence[tuple[TransitGraph, CentralityTable]]
) -> int:
    rows = []
    for g, table in pairs:
        for station in g.nodes:
            rows.append(
                (str(g.kind), station, g.degree(station), format_full(table.scores[station]))
            )
    return write_csv(
        _path(out_dir, f"degree_vs_{measure}.csv"),
        ("network", "station_id", "degree", "value"),
        rows,
    )


def degree_trend(g: TransitGraph, table: CentralityTable, degrees: CentralityTable) -> dict:
    """Least-squares line of score against degree, plus rank/linear correlation."""
    xs = [g.degree(s) for s in g.nodes]
    ys = [table.scores[s] for s in g.nodes]
    line = trendline(xs, ys)
    try:
        correlation = correlation_payload(centrality_correlation(degrees, table))
    except AnalysisError as e:
        correlation = correlation_payload(None, str(e))
    return {
        "slope": json_float(line[0]) if line else None,
        "intercept": json_float(line[1]) if line else None,
        "correlation": correlation,
    }


def write_trendlines(out_dir: str, trends: dict) -> None:
    write_json(_path(out_dir, "trendlines.json"), trends)


def write_degree_distributions(
    out_dir: str, graphs: Sequence[TransitGraph], method: str = "pdf", kmin: int = 1
) -> dict:
    """
    ``degree_distribution.csv`` (every degree with a nonzero count) and
    ``power_law.json`` with one fit per network.

    A network with too few distinct degrees gets ``null`` fit parameters and
    the reason, so the file keeps its shape.
    """
    rows = []
    fits: dict[str, dict] = {}
    for g in graphs:
        dist = degree_distribution(g)
        probs = dist.probabilities()
        ccdf = dist.ccdf()
        for k in probs:
            rows.append(
                (str(g.kind), k, dist.counts[k], format_full(probs[k]), format_full(ccdf[k]))
            )
        try:
            fit = fit_power_law(dist, method=method, kmin=kmin)
        except AnalysisError as e:
            logger.warning(f"No power-law fit for the {g.kind} network: {e}")
            fits[str(g.kind)] = {
                "gamma": None,
                "intercept": None,
                "r_squared": None,
                "k_support": sorted(k for k in probs if k >= kmin),
                "method": method,
                "error": str(e),
            }
            continue
        payload = fit.to_dict()
        for key in ("gamma", "intercept", "r_squared"):
            payload[key] = json_float(payload[key])
        fits[str(g.kind)] = payload
        logger.info(f"Power-law fit ({method}) for the {g.kind} network: gamma={fit.gamma:.4f}")

    write_csv(
        _path(out_dir, "degree_distribution.csv"),
        ("network", "degree", "count", "probability", "ccdf"),
        rows,
    )
    write_json(_path(out_dir, "power_law.json"), fits)
    return fits


def write_borough_bars(out_dir: str, summaries: Sequence[BoroughSummary]) -> int:
    """
    Per borough, accessible station count with the number of top-ranked
    stations by each measure. Both flags are emitted; overlap handling is left
    to the plot.
    """
    rows = (
        (
            s.borough,
            s.accessible_count,
            s.total_count,
            len(s.flagged_stations("betweenness")),
            len(s.flagged_stations("closeness")),
        )
        for s in summaries
    )
    return write_csv(
        _path(out_dir, "borough_bars.csv"),
        ("borough", "accessible_count", "total_count", "top_betweenness", "top_closeness"),
        rows,
    )


def write_top_subgraph(
    out_dir: str,
    g: TransitGraph,
    table: CentralityTable,
    k: int,
    accessible: TransitGraph | None,
) -> tuple[int, int]:
    """
    Subgraph induced by the top-``k`` stations of ``table``.

    Nodes carry their degree in the accessible network (blank when absent
    from it) and the lines of their edges in ``g``, so excluded lines never
    show up; edges carry their line labels.
    """
    selected: Iterable[StationId] = [s for s, _ in top_k(table, k)]
    sub = induced_subgraph(g, selected)
    stem = f"subgraph_{g.kind}_{table.measure}"
    node_rows = []
    for n in sub.nodes:
        station = g.node_attrs(n)
        access_degree = accessible.degree(n) if accessible is not None and n in accessible else ""
        node_rows.append(
            (
                n,
                station.name if station is not None else "",
                access_degree,
                LINE_SEPARATOR.join(sorted(g.node_lines(n))),
            )
        )
    nodes = write_csv(
        _path(out_dir, f"{stem}_nodes.csv"),
        ("station_id", "name", "accessible_degree", "lines"),
        node_rows,
    )
    edges = write_csv(
        _path(out_dir, f"{stem}_edges.csv"),
        ("u", "v", "lines"),
        ((u, v, LINE_SEPARATOR.join(sorted(sub.edge_lines(u, v)))) for u, v in sub.edges),
    )
    return nodes, edges
