"""
Writers for network, centrality and borough tables.

Full-precision columns use ``format_full``; ranked tables round to three
decimals half-even. Rows are always sorted, so output bytes depend only on the
inputs.
"""

import os
from typing import Iterable, Optional, Sequence

from transit_access.analysis.metrics import CentralityTable, top_k
from transit_access.analysis.socio import BoroughSummary, RegionSummary
from transit_access.analysis.stats import CorrelationReport
from transit_access.common.utils import (
    format_full,
    json_float,
    round_half_even,
    write_csv,
    write_json,
)
from transit_access.ingest.parsers import LINE_SEPARATOR
from transit_access.ingest.records import StationId
from transit_access.network.construct import LineShare, MixedAccess, NetworkKind
from transit_access.network.graph_core import DiameterReport, TransitGraph, average_clustering

EDGE_HEADER = ("u", "v", "lines")
NODE_HEADER = ("station_id", "name", "borough", "region", "degree", "lines")
SCORE_HEADER = ("station_id", "name", "score")
TOP_HEADER = ("rank", "station_id", "name", "score")
BOROUGH_HEADER = (
    "borough",
    "accessible_count",
    "total_count",
    "median_income_k",
    "daytime_total",
    "daytime_workers",
    "weekday_ridership",
    "weekend_ridership",
    "top_betweenness",
    "top_closeness",
)
REGION_HEADER = ("region", "accessible_count", "total_count", "share")
LINE_SHARE_HEADER = ("line_id", "accessible", "total", "share")
MIXED_HEADER = ("station_id", "full_lines", "one_way_lines", "inaccessible_lines")


def _name(g: TransitGraph, station_id: StationId) -> str:
    station = g.node_attrs(station_id)
    return station.name if station is not None else ""


def _blank(value) -> str:
    return "" if value is None else str(value)


# ==============================================================================
# Networks
# ==============================================================================
def network_stats(g: TransitGraph, report: DiameterReport) -> dict:
    n, m = g.number_of_nodes(), g.number_of_edges()
    return {
        "network": str(g.kind),
        "nodes": n,
        "edges": m,
        "diameter": report.value,
        "connected": report.connected,
        "component_count": report.component_count,
        "largest_component_size": report.largest_component_size,
        "stranded": [list(c) for c in report.stranded],
        "average_degree": json_float(2 * m / n),
        "average_clustering": json_float(average_clustering(g)),
    }


def write_network(out_dir: str, g: TransitGraph, report: DiameterReport) -> dict:
    """``edges.csv``, ``nodes.csv`` and ``stats.json`` under ``<out_dir>/<kind>/``."""
    base = os.path.join(out_dir, str(g.kind))
    write_csv(
        os.path.join(base, "edges.csv"),
        EDGE_HEADER,
        ((u, v, LINE_SEPARATOR.join(sorted(g.edge_lines(u, v)))) for u, v in g.edges),
    )
    rows = []
    for n in g.nodes:
        station = g.node_attrs(n)
        rows.append(
            (
                n,
                _name(g, n),
                station.borough if station is not None else "",
                _blank(station.region if station is not None else None),
                g.degree(n),
                LINE_SEPARATOR.join(sorted(g.node_lines(n))),
            )
        )
    write_csv(os.path.join(base, "nodes.csv"), NODE_HEADER, rows)
    stats = network_stats(g, report)
    write_json(os.path.join(base, "stats.json"), stats)
    return stats


# ==============================================================================
# Centrality
# ==============================================================================
def write_scores(path: str, table: CentralityTable, g: TransitGraph) -> int:
    """Every node's score at full precision, by station id."""
    return write_csv(
        path,
        SCORE_HEADER,
        ((s, _name(g, s), format_full(table.scores[s])) for s in sorted(table.scores)),
    )


def top_rows(
    table: CentralityTable,
    k: int,
    g: TransitGraph,
    accessible_ids: Optional[Iterable[StationId]] = None,
) -> list[tuple]:
    accessible = set(accessible_ids) if accessible_ids is not None else None
    rows = []
    for rank, (station, score) in enumerate(top_k(table, k), start=1):
        row = (rank, station, _name(g, station), round_half_even(score))
        if accessible is not None:
            row += ("Y" if station in accessible else "N",)
        rows.append(row)
    return rows


def write_top_table(
    path: str,
    table: CentralityTable,
    k: int,
    g: TransitGraph,
    accessible_ids: Optional[Iterable[StationId]] = None,
) -> int:
    """
    Ranked top-``k`` table with scores rounded to three decimals.

    Full-network tables carry an ``accessible`` column (Y/N) saying whether
    the station is a node of the accessible network.
    """
    header = TOP_HEADER
    if g.kind is NetworkKind.FULL:
        header = TOP_HEADER + ("accessible",)
    else:
        accessible_ids = None
    return write_csv(path, header, top_rows(table, k, g, accessible_ids))


# ==============================================================================
# Boroughs, regions and lines
# ==============================================================================
def write_borough_summary(path: str, summaries: Sequence[BoroughSummary]) -> int:
    rows = (
        (
            s.borough,
            s.accessible_count,
            s.total_count,
            format_full(s.median_income_k),
            s.daytime_total,
            s.daytime_workers,
            _blank(s.weekday_ridership),
            _blank(s.weekend_ridership),
            LINE_SEPARATOR.join(s.flagged_stations("betweenness")),
            LINE_SEPARATOR.join(s.flagged_stations("closeness")),
        )
        for s in summaries
    )
    return write_csv(path, BOROUGH_HEADER, rows)


def write_region_summary(path: str, regions: Sequence[RegionSummary]) -> int:
    rows = (
        (
            _blank(r.region),
            r.accessible_count,
            r.total_count,
            round_half_even(r.accessible_count / r.total_count if r.total_count else 0.0),
        )
        for r in regions
    )
    return write_csv(path, REGION_HEADER, rows)


def write_line_shares(path: str, shares: dict[str, LineShare]) -> int:
    rows = (
        (line, share.accessible, share.total, round_half_even(share.fraction))
        for line, share in sorted(shares.items())
    )
    return write_csv(path, LINE_SHARE_HEADER, rows)


def write_mixed_access(path: str, mixed: Sequence[MixedAccess]) -> int:
    rows = (
        (
            m.station,
            LINE_SEPARATOR.join(m.full_lines),
            LINE_SEPARATOR.join(m.one_way_lines),
            LINE_SEPARATOR.join(m.inaccessible_lines),
        )
        for m in mixed
    )
    return write_csv(path, MIXED_HEADER, rows)


def correlation_payload(report: Optional[CorrelationReport], reason: str = "") -> dict:
    if report is None:
        return {"error": reason}
    payload = report.to_dict()
    for key in ("pearson_r", "spearman_rho", "pearson_p", "spearman_p"):
        payload[key] = json_float(payload[key])
    return payload


def write_correlations(path: str, payload: dict) -> None:
    write_json(path, payload)
