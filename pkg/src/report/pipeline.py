"""
One analysis run over a parsed dataset.

Graphs, centrality tables and diameter reports are computed lazily and
cached, so ``all`` builds each network once even though several commands
read it.
"""

from typing import Optional

from transit_access.analysis.metrics import (
    CentralityTable,
    ClosenessConvention,
    Measure,
    compute_measure,
)
from transit_access.common.config import Config
from transit_access.common.errors import InvariantViolation, TooSmall
from transit_access.common.logger import logger
from transit_access.ingest.records import Dataset, LineId, StationId
from transit_access.network.construct import (
    NetworkKind,
    accessible_station_ids,
    build_network,
)
from transit_access.network.graph_core import DiameterReport, TransitGraph, diameter

# Measures reported by the centrality and figures commands.
REPORTED_MEASURES = (Measure.BETWEENNESS, Measure.CLOSENESS)


class AnalysisRun:
    def __init__(self, dataset: Dataset, config: Config):
        self.dataset = dataset
        self.config = config
        self._graphs: dict[NetworkKind, TransitGraph] = {}
        self._tables: dict[tuple[NetworkKind, Measure], CentralityTable] = {}
        self._diameters: dict[NetworkKind, DiameterReport] = {}
        self._accessible_ids: Optional[frozenset[StationId]] = None

    @property
    def kinds(self) -> tuple[NetworkKind, ...]:
        return tuple(NetworkKind(k) for k in self.config.networks)

    @property
    def exclude_lines(self) -> tuple[LineId, ...]:
        return tuple(sorted(self.config.exclude_lines))

    @property
    def convention(self) -> ClosenessConvention:
        return ClosenessConvention(self.config.closeness_convention)

    @property
    def accessible_ids(self) -> frozenset[StationId]:
        if self._accessible_ids is None:
            self._accessible_ids = accessible_station_ids(
                self.dataset.branches, self.dataset.access_records, self.exclude_lines
            )
        return self._accessible_ids

    def graph(self, kind: NetworkKind | str) -> TransitGraph:
        kind = NetworkKind(kind)
        if kind not in self._graphs:
            graph = build_network(
                kind,
                self.dataset.stations,
                self.dataset.branches,
                self.dataset.access_records,
                self.exclude_lines,
            )
            check_graph(graph)
            self._graphs[kind] = graph
        return self._graphs[kind]

    def diameter(self, kind: NetworkKind | str) -> DiameterReport:
        kind = NetworkKind(kind)
        if kind not in self._diameters:
            self._diameters[kind] = diameter(self.graph(kind))
        return self._diameters[kind]

    def table(self, kind: NetworkKind | str, measure: Measure | str) -> CentralityTable:
        kind, measure = NetworkKind(kind), Measure(measure)
        key = (kind, measure)
        if key not in self._tables:
            graph = self.graph(kind)
            try:
                table = compute_measure(
                    graph, measure, self.convention, threads=self.config.threads
                )
            except TooSmall:
                # No pair of other nodes exists, so nothing can lie between them.
                logger.warning(
                    f"{kind} network has {graph.number_of_nodes()} node(s); "
                    "reporting betweenness 0 for every node"
                )
                table = CentralityTable(measure, dict.fromkeys(graph.nodes, 0.0), graph_kind=kind)
            self._tables[key] = table
        return self._tables[key]


def check_graph(g: TransitGraph) -> None:
    """Self-checks run on every graph the CLI builds."""
    degree_sum = sum(g.degrees().values())
    if degree_sum != 2 * g.number_of_edges():
        raise InvariantViolation(
            f"{g.kind} network: degree sum {degree_sum} != 2M = {2 * g.number_of_edges()}"
        )
    for u, v in g.edges:
        if u == v:
            raise InvariantViolation(f"{g.kind} network contains self-loop at {u!r}")
        if not g.edge_lines(u, v):
            raise InvariantViolation(f"{g.kind} network edge {u}-{v} carries no line label")
