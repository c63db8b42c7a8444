"""
Exact centrality measures over a TransitGraph.

Betweenness uses Brandes' single-source dependency accumulation over every
source; closeness runs one BFS per source. Per-source passes can run on a
pool of worker processes (``TRANSIT_ACCESS_THREADS``, 0 = one per CPU). Partial scores are merged
with ``math.fsum``, which is correctly rounded and therefore independent of
the order in which workers finish; outputs are bit-identical for any thread
count.
"""

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Callable, Mapping, Optional, Sequence, TypeVar

from transit_access.analysis.stats import CorrelationReport, correlation_report
from transit_access.common.constants import resolve_threads, threads_from_env
from transit_access.common.errors import EmptyGraph, InvariantViolation, TooSmall
from transit_access.common.logger import logger
from transit_access.ingest.records import StationId
from transit_access.network.construct import NetworkKind
from transit_access.network.graph_core import TransitGraph, bfs_distances, finite_distances

T = TypeVar("T")

# Slack allowed above 1.0 before a normalised score counts as a bug.
SCORE_TOLERANCE = 1e-12

# Graphs with fewer nodes than this run their per-source passes serially.
MIN_PARALLEL_SOURCES = 48


class Measure(str, Enum):
    BETWEENNESS = "betweenness"
    CLOSENESS = "closeness"
    DEGREE = "degree"

    def __str__(self) -> str:
        return self.value


class ClosenessConvention(str, Enum):
    N_MINUS_ONE = "n-1"
    N = "n"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CentralityTable:
    measure: Measure
    scores: Mapping[StationId, float]
    graph_kind: Optional[NetworkKind] = None
    convention: Optional[ClosenessConvention] = field(default=None)

    def __post_init__(self):
        # The literal N/sum(d) closeness formula can exceed 1 (e.g. a star hub).
        bounded = not (
            self.measure is Measure.CLOSENESS and self.convention is ClosenessConvention.N
        )
        for station, score in self.scores.items():
            if not math.isfinite(score) or score < 0.0:
                raise InvariantViolation(f"{self.measure} score {score} for {station!r}")
            if bounded and score > 1.0 + SCORE_TOLERANCE:
                raise InvariantViolation(
                    f"{self.measure} score {score} for {station!r} exceeds 1"
                )

    def __len__(self) -> int:
        return len(self.scores)

    def ranked(self) -> list[tuple[StationId, float]]:
        """All stations, descending by score, ties by ascending station id."""
        return sorted(self.scores.items(), key=lambda item: (-item[1], item[0]))

    def top_k(self, k: int) -> list[tuple[StationId, float]]:
        return top_k(self, k)


def top_k(t: CentralityTable, k: int) -> list[tuple[StationId, float]]:
    """
    The ``k`` highest scores, descending, ties broken by ascending station id.

    ``k`` larger than the table returns every station; ``k == 0`` returns an
    empty list.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return t.ranked()[:k]


def top_k_overlap(a: CentralityTable, b: CentralityTable, k: int) -> list[StationId]:
    """Stations present in both top-k lists, ascending."""
    return sorted({s for s, _ in top_k(a, k)} & {s for s, _ in top_k(b, k)})


# ==============================================================================
# Per-source fan-out
# ==============================================================================
def _worker_count(threads: Optional[int]) -> int:
    if threads is None:
        threads = threads_from_env() or 0
    return resolve_threads(threads)


def _map_sources(
    g: TransitGraph, fn: Callable[[StationId], T], threads: Optional[int]
) -> list[tuple[StationId, T]]:
    """
    ``fn`` applied to every node, returned in ascending source order.

    ``fn`` must be picklable (a module-level function or a ``partial`` of one).
    Sources go out in one contiguous chunk per worker, so the graph is pickled
    once per worker rather than once per source.
    """
    sources = g.nodes
    workers = min(_worker_count(threads), max(1, len(sources)))
    if workers == 1 or len(sources) < MIN_PARALLEL_SOURCES:
        return [(s, fn(s)) for s in sources]
    logger.debug(f"Running {len(sources)} single-source passes on {workers} processes")
    chunksize = -(-len(sources) // workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(zip(sources, executor.map(fn, sources, chunksize=chunksize)))


# ==============================================================================
# Betweenness
# ==============================================================================
def _single_source_dependencies(g: TransitGraph, s: StationId) -> dict[StationId, float]:
    """Brandes dependency of ``s`` on every other node reachable from it."""
    stack: list[StationId] = []
    preds: dict[StationId, list[StationId]] = {s: []}
    sigma: dict[StationId, int] = {s: 1}
    dist: dict[StationId, int] = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        stack.append(v)
        next_hop = dist[v] + 1
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = next_hop
                sigma[w] = 0
                preds[w] = []
                queue.append(w)
            if dist[w] == next_hop:
                sigma[w] += sigma[v]
                preds[w].append(v)

    delta = dict.fromkeys(stack, 0.0)
    while stack:
        w = stack.pop()
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
    del delta[s]
    return delta


def betweenness_all(g: TransitGraph, threads: Optional[int] = None) -> CentralityTable:
    """
    Normalised betweenness of every node.

    Counts every shortest path (fractional credit), excludes endpoints and
    normalises unordered pairs by 2 / ((N-1)(N-2)).
    """
    n = g.number_of_nodes()
    if n == 0:
        raise EmptyGraph("betweenness of an empty graph")
    if n < 3:
        raise TooSmall(f"betweenness normalisation needs N >= 3, got {n}")

    partials: dict[StationId, list[float]] = {v: [] for v in g.nodes}
    for _, dependencies in _map_sources(g, partial(_single_source_dependencies, g), threads):
        for v, value in dependencies.items():
            if value:
                partials[v].append(value)

    # Every unordered pair was visited from both ends.
    scale = 1.0 / ((n - 1) * (n - 2))
    scores = {v: min(1.0, math.fsum(values) * scale) for v, values in partials.items()}
    return CentralityTable(Measure.BETWEENNESS, scores, graph_kind=g.kind)


# ==============================================================================
# Closeness
# ==============================================================================
def _closeness_of(
    g: TransitGraph, s: StationId, n: int, convention: ClosenessConvention
) -> float:
    dist = finite_distances(bfs_distances(g, s))
    total = sum(dist.values())
    if total == 0:
        return 0.0  # isolated
    if convention is ClosenessConvention.N:
        return n / total
    reach = len(dist) - 1
    # Component-size correction (Wasserman-Faust) keeps disconnected graphs comparable.
    return (reach / total) * (reach / (n - 1))


def closeness_all(
    g: TransitGraph,
    convention: ClosenessConvention | str = ClosenessConvention.N_MINUS_ONE,
    threads: Optional[int] = None,
) -> CentralityTable:
    n = g.number_of_nodes()
    if n == 0:
        raise EmptyGraph("closeness of an empty graph")
    convention = ClosenessConvention(convention)
    closeness_of = partial(_closeness_of, g, n=n, convention=convention)
    scores = dict(_map_sources(g, closeness_of, threads))
    if convention is ClosenessConvention.N_MINUS_ONE:
        scores = {v: min(1.0, c) for v, c in scores.items()}
    return CentralityTable(Measure.CLOSENESS, scores, graph_kind=g.kind, convention=convention)


# ==============================================================================
# Degree
# ==============================================================================
def degree_centrality_all(g: TransitGraph) -> CentralityTable:
    """Degree divided by N-1; a lone node scores 0."""
    n = g.number_of_nodes()
    if n == 0:
        raise EmptyGraph("degree centrality of an empty graph")
    if n == 1:
        return CentralityTable(Measure.DEGREE, {v: 0.0 for v in g.nodes}, graph_kind=g.kind)
    scores = {v: d / (n - 1) for v, d in g.degrees().items()}
    return CentralityTable(Measure.DEGREE, scores, graph_kind=g.kind)


def compute_measure(
    g: TransitGraph,
    measure: Measure | str,
    convention: ClosenessConvention | str = ClosenessConvention.N_MINUS_ONE,
    threads: Optional[int] = None,
) -> CentralityTable:
    measure = Measure(measure)
    if measure is Measure.BETWEENNESS:
        return betweenness_all(g, threads=threads)
    if measure is Measure.CLOSENESS:
        return closeness_all(g, convention, threads=threads)
    return degree_centrality_all(g)


def centrality_correlation(a: CentralityTable, b: CentralityTable) -> CorrelationReport:
    """Pearson and Spearman between two tables over the stations they share."""
    common: Sequence[StationId] = sorted(set(a.scores) & set(b.scores))
    return correlation_report(
        [a.scores[s] for s in common],
        [b.scores[s] for s in common],
        (str(a.measure), str(b.measure)),
    )
