"""
Full and accessible L-space networks.

The full network links every pair of consecutive stations on a branch. The
accessible network first filters each branch down to the stations that are
fully step-free on that branch's line, then links consecutive survivors, so
``A(full) - B - C - D(full)`` contributes the single edge ``{A, D}``. A
station whose access on a line is ``one_way`` is skipped on that line exactly
like an inaccessible one; it can still be a node through another line.
"""

from dataclasses import dataclass
from enum import Enum
from collections.abc import Mapping
from typing import Callable, Iterable, Optional, Sequence

from transit_access.common.errors import EmptyAccessibleSet, UnknownStationRef
from transit_access.common.logger import logger
from transit_access.ingest.records import (
    AccessibilityRecord,
    AccessMode,
    LineBranch,
    LineId,
    Station,
    StationId,
    access_lookup,
)
from transit_access.network.graph_core import TransitGraph


class NetworkKind(str, Enum):
    FULL = "full"
    ACCESSIBLE = "accessible"

    def __str__(self) -> str:
        return self.value


AccessIndex = Mapping[tuple[StationId, LineId], AccessMode]


def _active_branches(
    branches: Iterable[LineBranch], exclude_lines: Iterable[LineId] = ()
) -> list[LineBranch]:
    excluded = set(exclude_lines)
    # Sorted so the build never depends on input row order.
    return sorted((b for b in branches if b.line_id not in excluded), key=lambda b: b.key)


def _index(access_records: Iterable[AccessibilityRecord] | AccessIndex) -> AccessIndex:
    if isinstance(access_records, Mapping):
        return access_records
    return access_lookup(access_records)


def is_full_on_line(access: AccessIndex, station: StationId, line: LineId) -> bool:
    return access.get((station, line), AccessMode.NONE) is AccessMode.FULL


def collapse_branch(
    stations: Sequence[StationId], keep: Callable[[StationId], bool]
) -> tuple[StationId, ...]:
    """Stations of one branch that satisfy ``keep``, in branch order."""
    return tuple(s for s in stations if keep(s))


def collapse_branches(
    branches: Iterable[LineBranch], access_records, exclude_lines: Iterable[LineId] = ()
) -> list[tuple[LineId, tuple[StationId, ...]]]:
    """
    Per-branch accessible sequences, ``(line_id, survivors)``, in branch key order.

    Survivor sequences shorter than two stations are kept; they contribute
    nodes but no edges.
    """
    access = _index(access_records)
    collapsed = []
    for branch in _active_branches(branches, exclude_lines):
        line = branch.line_id
        survivors = collapse_branch(
            branch.stations, lambda s, line=line: is_full_on_line(access, s, line)
        )
        collapsed.append((line, survivors))
    return collapsed


def accessible_station_ids(
    branches: Iterable[LineBranch], access_records, exclude_lines: Iterable[LineId] = ()
) -> frozenset[StationId]:
    """Stations that are fully accessible on the line of some branch they lie on."""
    ids: set[StationId] = set()
    for _, survivors in collapse_branches(branches, access_records, exclude_lines):
        ids.update(survivors)
    return frozenset(ids)


def _register_nodes(
    graph: TransitGraph, ids: Iterable[StationId], index: Mapping[StationId, Station]
) -> None:
    for station_id in sorted(ids):
        station = index.get(station_id)
        if station is None:
            raise UnknownStationRef(f"branch references unknown station id {station_id!r}")
        graph.add_node(station_id, station)


def build_full_network(
    stations: Sequence[Station],
    branches: Iterable[LineBranch],
    exclude_lines: Iterable[LineId] = (),
) -> TransitGraph:
    index = {s.id: s for s in stations}
    active = _active_branches(branches, exclude_lines)

    graph = TransitGraph(kind=NetworkKind.FULL)
    _register_nodes(graph, {s for b in active for s in b.stations}, index)
    for branch in active:
        for u, v in zip(branch.stations, branch.stations[1:]):
            graph.add_edge(u, v, branch.line_id)
    graph.freeze()
    logger.info(
        f"Built full network: {graph.number_of_nodes()} nodes, {graph.number_of_edges()} edges "
        f"from {len(active)} branches"
    )
    return graph


def build_accessible_network(
    stations: Sequence[Station],
    branches: Iterable[LineBranch],
    access_records,
    exclude_lines: Iterable[LineId] = (),
) -> TransitGraph:
    index = {s.id: s for s in stations}
    collapsed = collapse_branches(branches, access_records, exclude_lines)
    node_ids = {s for _, survivors in collapsed for s in survivors}
    if not node_ids:
        raise EmptyAccessibleSet("no station is fully accessible on any of its lines")

    graph = TransitGraph(kind=NetworkKind.ACCESSIBLE)
    _register_nodes(graph, node_ids, index)
    for line, survivors in collapsed:
        for u, v in zip(survivors, survivors[1:]):
            graph.add_edge(u, v, line)
    graph.freeze()
    logger.info(
        f"Built accessible network: {graph.number_of_nodes()} nodes, "
        f"{graph.number_of_edges()} edges"
    )
    return graph


def build_network(
    kind: NetworkKind,
    stations: Sequence[Station],
    branches: Iterable[LineBranch],
    access_records=None,
    exclude_lines: Iterable[LineId] = (),
) -> TransitGraph:
    kind = NetworkKind(kind)
    if kind is NetworkKind.FULL:
        return build_full_network(stations, branches, exclude_lines)
    return build_accessible_network(stations, branches, access_records or (), exclude_lines)


# ==============================================================================
# Per-line and per-station accessibility summaries
# ==============================================================================
@dataclass(frozen=True)
class LineShare:
    line_id: LineId
    accessible: int
    total: int

    @property
    def fraction(self) -> float:
        return self.accessible / self.total if self.total else 0.0


def line_accessibility_share(
    branches: Iterable[LineBranch], access_records, exclude_lines: Iterable[LineId] = ()
) -> dict[LineId, LineShare]:
    """Distinct stations per line and how many of them are fully accessible on it."""
    access = _index(access_records)
    members: dict[LineId, set[StationId]] = {}
    for branch in _active_branches(branches, exclude_lines):
        members.setdefault(branch.line_id, set()).update(branch.stations)
    return {
        line: LineShare(
            line_id=line,
            accessible=sum(1 for s in ids if is_full_on_line(access, s, line)),
            total=len(ids),
        )
        for line, ids in sorted(members.items())
    }


@dataclass(frozen=True)
class MixedAccess:
    station: StationId
    full_lines: tuple[LineId, ...]
    one_way_lines: tuple[LineId, ...]
    inaccessible_lines: tuple[LineId, ...]


def mixed_access_stations(
    stations: Iterable[Station], access_records, lines: Optional[Iterable[LineId]] = None
) -> list[MixedAccess]:
    """
    Stations that are fully accessible on some serving lines but not all of them.

    These are recorded and reported only; the network topology ignores them.
    ``lines`` restricts the check to the given lines (e.g. after exclusions).
    """
    access = _index(access_records)
    allowed = set(lines) if lines is not None else None
    mixed = []
    for station in sorted(stations, key=lambda s: s.id):
        serving = sorted(l for l in station.lines if allowed is None or l in allowed)
        modes = {line: access.get((station.id, line), AccessMode.NONE) for line in serving}
        full = tuple(l for l in serving if modes[l] is AccessMode.FULL)
        if full and len(full) < len(serving):
            mixed.append(
                MixedAccess(
                    station=station.id,
                    full_lines=full,
                    one_way_lines=tuple(l for l in serving if modes[l] is AccessMode.ONE_WAY),
                    inaccessible_lines=tuple(l for l in serving if modes[l] is AccessMode.NONE),
                )
            )
    if mixed:
        logger.warning(
            f"{len(mixed)} station(s) are accessible on only some of their lines; "
            "recorded, topology unchanged"
        )
    return mixed
