import itertools
import os
import random
from typing import Optional

import networkx as nx

from transit_access.ingest.records import (
    AccessibilityRecord,
    AccessMode,
    LineBranch,
    Station,
)
from transit_access.network.graph_core import TransitGraph

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")
MINI_CITY = os.path.join(FIXTURES_DIR, "mini_city")
STRATFORD = os.path.join(FIXTURES_DIR, "stratford")


def _fixture_paths(base: str, boroughs: bool) -> dict[str, Optional[str]]:
    return {
        "stations": os.path.join(base, "stations.csv"),
        "branches": os.path.join(base, "branches.csv"),
        "access": os.path.join(base, "accessibility.csv"),
        "boroughs": os.path.join(base, "boroughs.csv") if boroughs else None,
    }


def mini_city_paths(boroughs: bool = True) -> dict[str, Optional[str]]:
    """Input paths of the synthetic mini city, keyed like the CLI flags."""
    return _fixture_paths(MINI_CITY, boroughs)


def stratford_paths(boroughs: bool = True) -> dict[str, Optional[str]]:
    """Input paths of the partial London slice around Stratford."""
    return _fixture_paths(STRATFORD, boroughs)


def cli_args(command: str, out_dir: str, boroughs: bool = True, *extra: str) -> list[str]:
    args = [command]
    for flag, path in mini_city_paths(boroughs).items():
        if path is not None:
            args += [f"--{flag}", path]
    return args + ["--out", out_dir, *extra]


# ==============================================================================
# Graph builders
# ==============================================================================
def graph_from_edges(edges, nodes=(), line: str = "L") -> TransitGraph:
    g = TransitGraph()
    for n in nodes:
        g.add_node(n)
    for u, v in edges:
        g.add_node(u)
        g.add_node(v)
        g.add_edge(u, v, line)
    return g.freeze()


def path_graph(n: int) -> TransitGraph:
    ids = [f"n{i:02d}" for i in range(n)]
    return graph_from_edges(zip(ids, ids[1:]), nodes=ids)


def star_graph(leaves: int) -> TransitGraph:
    return graph_from_edges((("hub", f"leaf{i}") for i in range(leaves)))


def cycle_graph(n: int) -> TransitGraph:
    ids = [f"c{i:02d}" for i in range(n)]
    return graph_from_edges(zip(ids, ids[1:] + ids[:1]))


def random_graph(n: int, p: float, seed: int) -> TransitGraph:
    """Erdős–Rényi G(n, p) as a TransitGraph; may be disconnected."""
    G = nx.gnp_random_graph(n, p, seed=seed)
    ids = [f"v{i:02d}" for i in range(n)]
    return graph_from_edges(((ids[u], ids[v]) for u, v in G.edges()), nodes=ids)


ORACLE_FAMILIES = ("tree", "cycle", "star", "components", "erdos_renyi")


def oracle_graph(seed: int) -> TransitGraph:
    """
    A small random graph (N <= 25) for oracle comparisons.

    The family cycles with ``seed`` through spanning trees, cycles, stars,
    disconnected unions with an isolated node, and G(n, p) samples. Node ids
    are shuffled so id order says nothing about the structure.
    """
    rng = random.Random(seed)
    n = rng.randint(4, 24)
    family = ORACLE_FAMILIES[seed % len(ORACLE_FAMILIES)]
    if family == "tree":
        G = nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])
    elif family == "cycle":
        G = nx.cycle_graph(n)
    elif family == "star":
        G = nx.star_graph(n - 1)
    elif family == "components":
        split = rng.randint(1, n - 2)
        G = nx.disjoint_union(
            nx.gnp_random_graph(split, 0.5, seed=rng.randrange(2**31)),
            nx.path_graph(n - split),
        )
        G.add_node(G.number_of_nodes())
    else:
        G = nx.gnp_random_graph(n, rng.uniform(0.05, 0.5), seed=rng.randrange(2**31))
    ids = [f"v{i:02d}" for i in range(G.number_of_nodes())]
    rng.shuffle(ids)
    return graph_from_edges(((ids[u], ids[v]) for u, v in G.edges()), nodes=ids)


# ==============================================================================
# Oracles
# ==============================================================================
def floyd_warshall(g: TransitGraph) -> dict[str, dict[str, float]]:
    """Cubic all-pairs hop counts; unreachable pairs are ``inf``."""
    nodes = list(g.nodes)
    dist = {u: {v: (0 if u == v else float("inf")) for v in nodes} for u in nodes}
    for u, v in g.edges:
        dist[u][v] = dist[v][u] = 1
    for k in nodes:
        for i in nodes:
            dik = dist[i][k]
            if dik == float("inf"):
                continue
            for j in nodes:
                if dik + dist[k][j] < dist[i][j]:
                    dist[i][j] = dik + dist[k][j]
    return dist


def enumerated_betweenness(g: TransitGraph) -> dict[str, float]:
    """Normalised betweenness by listing every shortest path of every pair."""
    G = nx.Graph()
    G.add_nodes_from(g.nodes)
    G.add_edges_from(g.edges)
    n = len(g.nodes)
    raw = dict.fromkeys(g.nodes, 0.0)
    for s, t in itertools.combinations(g.nodes, 2):
        if not nx.has_path(G, s, t):
            continue
        paths = list(nx.all_shortest_paths(G, s, t))
        for path in paths:
            for v in path[1:-1]:
                raw[v] += 1.0 / len(paths)
    scale = 2.0 / ((n - 1) * (n - 2))
    return {v: value * scale for v, value in raw.items()}


def oracle_closeness(g: TransitGraph) -> dict[str, float]:
    """Closeness with the component-size correction, from Floyd–Warshall rows."""
    dist = floyd_warshall(g)
    n = len(g.nodes)
    scores = {}
    for u, row in dist.items():
        finite = [d for d in row.values() if d != float("inf")]
        total = sum(finite)
        reach = len(finite) - 1
        scores[u] = 0.0 if total == 0 else (reach / total) * (reach / (n - 1))
    return scores


# ==============================================================================
# Random transit systems
# ==============================================================================
def random_transit_system(seed: int, n_stations: int = 18, n_lines: int = 4):
    """
    Stations, branches and accessibility records for a random city.

    Every line gets one or two branches; a second branch forks off the first
    one partway along. Access modes are drawn uniformly from the three modes.
    """
    rng = random.Random(seed)
    ids = [f"s{i:02d}" for i in range(n_stations)]
    branches: list[LineBranch] = []
    serving: dict[str, set[str]] = {s: set() for s in ids}
    for line_number in range(n_lines):
        line = f"L{line_number}"
        main = rng.sample(ids, rng.randint(3, min(8, n_stations)))
        branches.append(LineBranch(line, "main", tuple(main)))
        if rng.random() < 0.5 and len(main) > 2:
            fork = rng.randint(1, len(main) - 1)
            rest = [s for s in ids if s not in main[:fork]]
            tail = rng.sample(rest, rng.randint(1, min(3, len(rest))))
            branches.append(LineBranch(line, "fork", tuple(main[:fork] + tail)))
        for b in branches:
            if b.line_id == line:
                for s in b.stations:
                    serving[s].add(line)

    stations = [
        Station(s, s.upper(), f"B{i % 3}", rng.randint(1, 9), frozenset(serving[s]))
        for i, s in enumerate(ids)
        if serving[s]
    ]
    modes = list(AccessMode)
    access = [
        AccessibilityRecord(s.id, line, rng.choice(modes))
        for s in stations
        for line in sorted(s.lines)
    ]
    return stations, branches, access
