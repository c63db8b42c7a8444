"""
Undirected simple graph over stations with per-edge line labels.

A TransitGraph is filled during construction and then frozen; after
``freeze()`` it is read-only and is pickled as-is to metric worker processes.
Neighbour lists are kept sorted so every traversal, and therefore every
metric, is independent of the order in which nodes and edges were added.
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Optional

import networkx as nx

from transit_access.common.errors import EmptyGraph, FrozenGraph, SelfLoop, UnknownNode
from transit_access.common.logger import logger
from transit_access.ingest.records import LineId, Station, StationId

Edge = tuple[StationId, StationId]


class Reachability(Enum):
    UNREACHABLE = "unreachable"


UNREACHABLE = Reachability.UNREACHABLE


def edge_key(u: StationId, v: StationId) -> Edge:
    """Canonical orientation of an undirected edge."""
    return (u, v) if u < v else (v, u)


class TransitGraph:
    def __init__(self, kind: Any = None):
        self.kind = kind
        self._adj: dict[StationId, set[StationId]] = {}
        self._edge_lines: dict[Edge, set[LineId]] = {}
        self._attrs: dict[StationId, Optional[Station]] = {}
        self._frozen = False
        self._sorted_adj: dict[StationId, tuple[StationId, ...]] = {}
        self._sorted_nodes: tuple[StationId, ...] = ()

    # ------------------------------------------------------------------ building
    def _check_mutable(self) -> None:
        if self._frozen:
            raise FrozenGraph("TransitGraph is read-only after freeze()")

    def add_node(self, station_id: StationId, attrs: Optional[Station] = None) -> "TransitGraph":
        self._check_mutable()
        if not station_id:
            raise ValueError("station id must be non-empty")
        self._adj.setdefault(station_id, set())
        if attrs is not None or station_id not in self._attrs:
            self._attrs[station_id] = attrs
        return self

    def add_edge(self, u: StationId, v: StationId, line: LineId) -> "TransitGraph":
        self._check_mutable()
        if u == v:
            raise SelfLoop(f"self-loop on {u!r} (line {line!r})")
        for endpoint in (u, v):
            if endpoint not in self._adj:
                raise UnknownNode(f"edge endpoint {endpoint!r} is not a registered node")
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._edge_lines.setdefault(edge_key(u, v), set()).add(line)
        return self

    def freeze(self) -> "TransitGraph":
        if not self._frozen:
            self._sorted_nodes = tuple(sorted(self._adj))
            self._sorted_adj = {n: tuple(sorted(nbrs)) for n, nbrs in self._adj.items()}
            self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # ------------------------------------------------------------------ queries
    @property
    def nodes(self) -> tuple[StationId, ...]:
        """Node ids in ascending order."""
        if self._frozen:
            return self._sorted_nodes
        return tuple(sorted(self._adj))

    @property
    def edges(self) -> tuple[Edge, ...]:
        """Canonically oriented edges in ascending order."""
        return tuple(sorted(self._edge_lines))

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return len(self._edge_lines)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, station_id: object) -> bool:
        return station_id in self._adj

    def _require(self, station_id: StationId) -> None:
        if station_id not in self._adj:
            raise UnknownNode(f"{station_id!r} is not a node of this graph")

    def neighbors(self, station_id: StationId) -> tuple[StationId, ...]:
        self._require(station_id)
        if self._frozen:
            return self._sorted_adj[station_id]
        return tuple(sorted(self._adj[station_id]))

    def degree(self, station_id: StationId) -> int:
        self._require(station_id)
        return len(self._adj[station_id])

    def degrees(self) -> dict[StationId, int]:
        return {n: len(self._adj[n]) for n in self.nodes}

    def has_edge(self, u: StationId, v: StationId) -> bool:
        return edge_key(u, v) in self._edge_lines

    def edge_lines(self, u: StationId, v: StationId) -> frozenset[LineId]:
        try:
            return frozenset(self._edge_lines[edge_key(u, v)])
        except KeyError:
            raise UnknownNode(f"no edge between {u!r} and {v!r}")

    def node_attrs(self, station_id: StationId) -> Optional[Station]:
        self._require(station_id)
        return self._attrs[station_id]

    def node_lines(self, station_id: StationId) -> frozenset[LineId]:
        """Lines whose edges touch this station in this graph."""
        lines: set[LineId] = set()
        for nbr in self.neighbors(station_id):
            lines |= self._edge_lines[edge_key(station_id, nbr)]
        return frozenset(lines)

    def __repr__(self) -> str:
        return (
            f"TransitGraph(kind={self.kind!r}, nodes={self.number_of_nodes()}, "
            f"edges={self.number_of_edges()})"
        )


def add_edge(g: TransitGraph, u: StationId, v: StationId, line: LineId) -> TransitGraph:
    return g.add_edge(u, v, line)


# ==============================================================================
# Traversal
# ==============================================================================
def bfs_distances(g: TransitGraph, source: StationId) -> dict[StationId, int | Reachability]:
    """
    Hop counts from ``source`` to every node.

    Nodes that cannot be reached map to ``UNREACHABLE``, never to a large number.
    """
    if source not in g:
        raise UnknownNode(f"{source!r} is not a node of this graph")
    dist: dict[StationId, int | Reachability] = {n: UNREACHABLE for n in g.nodes}
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        next_hop = dist[v] + 1
        for w in g.neighbors(v):
            if dist[w] is UNREACHABLE:
                dist[w] = next_hop
                queue.append(w)
    return dist


def finite_distances(dist: dict[StationId, int | Reachability]) -> dict[StationId, int]:
    return {n: d for n, d in dist.items() if d is not UNREACHABLE}


def to_networkx(g: TransitGraph) -> nx.Graph:
    G = nx.Graph()
    for n in g.nodes:
        station = g.node_attrs(n)
        if station is None:
            G.add_node(n)
        else:
            G.add_node(n, name=station.name, borough=station.borough, region=station.region)
    for u, v in g.edges:
        G.add_edge(u, v, lines=tuple(sorted(g.edge_lines(u, v))))
    return G


def connected_components(g: TransitGraph) -> list[list[StationId]]:
    """Components as sorted id lists, largest first, ties by smallest member."""
    components = [sorted(c) for c in nx.connected_components(to_networkx(g))]
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


@dataclass(frozen=True)
class DiameterReport:
    value: int
    connected: bool
    component_count: int
    largest_component_size: int
    stranded: tuple[tuple[StationId, ...], ...]


def diameter(g: TransitGraph) -> DiameterReport:
    """
    Longest shortest path inside the largest connected component.

    Disconnected graphs still get a value; the other components are listed in
    ``stranded`` and logged as a warning.
    """
    if g.number_of_nodes() == 0:
        raise EmptyGraph("diameter is undefined for an empty graph")
    components = connected_components(g)
    largest = components[0]
    value = 0
    for source in largest:
        dist = finite_distances(bfs_distances(g, source))
        value = max(value, max(dist.values()))

    stranded = tuple(tuple(c) for c in components[1:])
    if stranded:
        listing = "; ".join("{" + ", ".join(c) + "}" for c in stranded)
        logger.warning(
            f"Graph {g.kind!s} is not connected: {len(components)} components, diameter "
            f"computed on the largest ({len(largest)} nodes). Stranded: {listing}"
        )
    return DiameterReport(
        value=value,
        connected=not stranded,
        component_count=len(components),
        largest_component_size=len(largest),
        stranded=stranded,
    )


def induced_subgraph(g: TransitGraph, nodes: Iterable[StationId]) -> TransitGraph:
    """Frozen subgraph on ``nodes`` keeping the line labels of surviving edges."""
    keep = set(nodes)
    for n in keep:
        if n not in g:
            raise UnknownNode(f"{n!r} is not a node of this graph")
    sub = TransitGraph(kind=g.kind)
    for n in sorted(keep):
        sub.add_node(n, g.node_attrs(n))
    for u, v in g.edges:
        if u in keep and v in keep:
            for line in sorted(g.edge_lines(u, v)):
                sub.add_edge(u, v, line)
    return sub.freeze()


def average_clustering(g: TransitGraph) -> float:
    if g.number_of_nodes() == 0:
        raise EmptyGraph("clustering is undefined for an empty graph")
    return float(nx.average_clustering(to_networkx(g)))
