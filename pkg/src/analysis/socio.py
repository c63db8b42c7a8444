"""
Borough-level join of station counts, central stations and socioeconomic data.

Stations are assigned wholly to the borough named in stations.csv. Boroughs
that appear in the station table but not in the borough table are reported
(warning level) and left out of the summaries.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from transit_access.analysis.metrics import CentralityTable, top_k
from transit_access.analysis.stats import CorrelationReport, correlation_report
from transit_access.common.constants import SUMMARY_FIELDS
from transit_access.common.errors import UnknownField
from transit_access.common.logger import logger
from transit_access.ingest.records import BoroughRecord, Station, StationId


@dataclass(frozen=True)
class BoroughSummary:
    borough: str
    accessible_count: int
    total_count: int
    median_income_k: float
    daytime_total: int
    daytime_workers: int
    weekday_ridership: Optional[int] = None
    weekend_ridership: Optional[int] = None
    # (measure, station) pairs for top-ranked stations located in this borough
    top10_flags: frozenset[tuple[str, StationId]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not 0 <= self.accessible_count <= self.total_count:
            raise ValueError(
                f"{self.borough}: accessible_count {self.accessible_count} outside "
                f"0..{self.total_count}"
            )

    def value(self, name: str):
        if name not in SUMMARY_FIELDS:
            raise UnknownField(f"unknown summary field {name!r}; choose from {SUMMARY_FIELDS}")
        return getattr(self, name)

    def flagged_stations(self, measure: str) -> list[StationId]:
        return sorted(s for m, s in self.top10_flags if m == measure)


def unmatched_boroughs(
    stations: Iterable[Station], borough_table: Iterable[BoroughRecord]
) -> list[str]:
    known = {r.borough for r in borough_table}
    return sorted({s.borough for s in stations if s.borough and s.borough not in known})


def borough_summaries(
    stations: Sequence[Station],
    accessible_ids: Iterable[StationId],
    borough_table: Sequence[BoroughRecord],
    tables: Sequence[CentralityTable] = (),
    k: int = 10,
) -> list[BoroughSummary]:
    """
    One summary per borough in ``borough_table``, in table order sorted by name.

    ``accessible_ids`` is the accessible network's node set (stations fully
    accessible on at least one serving line). ``top10_flags`` holds the
    ``top_k(k)`` stations of each table that lie in the borough.
    """
    accessible = set(accessible_ids)
    by_borough: dict[str, list[Station]] = {}
    for station in stations:
        by_borough.setdefault(station.borough, []).append(station)

    location = {s.id: s.borough for s in stations}
    flags: dict[str, set[tuple[str, StationId]]] = {}
    for table in tables:
        for station_id, _ in top_k(table, k):
            borough = location.get(station_id)
            if borough is not None:
                flags.setdefault(borough, set()).add((str(table.measure), station_id))

    missing = unmatched_boroughs(stations, borough_table)
    if missing:
        logger.warning(f"Boroughs without socioeconomic data (UnmatchedBorough): {missing}")

    summaries = []
    for record in sorted(borough_table, key=lambda r: r.borough):
        members = by_borough.get(record.borough, [])
        summaries.append(
            BoroughSummary(
                borough=record.borough,
                accessible_count=sum(1 for s in members if s.id in accessible),
                total_count=len(members),
                median_income_k=record.median_income_k,
                daytime_total=record.daytime_population_total,
                daytime_workers=record.daytime_population_workers,
                weekday_ridership=record.weekday_ridership,
                weekend_ridership=record.weekend_ridership,
                top10_flags=frozenset(flags.get(record.borough, ())),
            )
        )
    return summaries


def correlate(summaries: Sequence[BoroughSummary], x: str, y: str) -> CorrelationReport:
    """Correlate two summary fields over boroughs where both are present."""
    pairs = [(s.value(x), s.value(y)) for s in summaries]
    pairs = [(a, b) for a, b in pairs if a is not None and b is not None]
    return correlation_report([a for a, _ in pairs], [b for _, b in pairs], (x, y))


# ==============================================================================
# Spatial distribution
# ==============================================================================
@dataclass(frozen=True)
class RegionSummary:
    region: Optional[int]
    accessible_count: int
    total_count: int


def region_summary(
    stations: Iterable[Station], accessible_ids: Iterable[StationId]
) -> list[RegionSummary]:
    """Accessible and total station counts per fare region; unzoned stations last."""
    accessible = set(accessible_ids)
    counts: dict[Optional[int], list[int]] = {}
    for station in stations:
        bucket = counts.setdefault(station.region, [0, 0])
        bucket[1] += 1
        if station.id in accessible:
            bucket[0] += 1
    order = sorted(counts, key=lambda r: (r is None, r or 0))
    return [RegionSummary(r, counts[r][0], counts[r][1]) for r in order]


def accessible_share(stations: Sequence[Station], accessible_ids: Iterable[StationId]) -> float:
    """Fraction of listed stations that are accessible."""
    if not stations:
        return 0.0
    accessible = set(accessible_ids)
    return sum(1 for s in stations if s.id in accessible) / len(stations)
