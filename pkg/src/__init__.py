__version__ = "0.1.0"

from transit_access.ingest.parsers import load_dataset
from transit_access.network.construct import (
    NetworkKind,
    build_accessible_network,
    build_full_network,
)
from transit_access.analysis.metrics import betweenness_all, closeness_all, top_k

__all__ = [
    "__version__",
    "load_dataset",
    "NetworkKind",
    "build_full_network",
    "build_accessible_network",
    "betweenness_all",
    "closeness_all",
    "top_k",
]
