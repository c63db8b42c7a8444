"""Canonical writers for the ingest schemas; ``parse_*(write_*(x)) == x``."""

from typing import Iterable

from transit_access.common.utils import format_full, write_csv
from transit_access.ingest.parsers import (
    ACCESS_COLUMNS,
    BOROUGH_COLUMNS,
    BOROUGH_OPTIONAL_COLUMNS,
    BRANCH_COLUMNS,
    LINE_SEPARATOR,
    STATION_COLUMNS,
)
from transit_access.ingest.records import (
    AccessibilityRecord,
    BoroughRecord,
    LineBranch,
    Station,
)


def _blank_if_none(value) -> str:
    return "" if value is None else str(value)


def write_stations(path: str, stations: Iterable[Station]) -> int:
    rows = (
        (
            s.id,
            s.name,
            s.borough,
            _blank_if_none(s.region),
            LINE_SEPARATOR.join(sorted(s.lines)),
        )
        for s in stations
    )
    return write_csv(path, STATION_COLUMNS, rows)


def write_line_branches(path: str, branches: Iterable[LineBranch]) -> int:
    rows = (
        (b.line_id, b.branch_id, seq, station_id)
        for b in branches
        for seq, station_id in enumerate(b.stations, start=1)
    )
    return write_csv(path, BRANCH_COLUMNS, rows)


def write_accessibility(path: str, records: Iterable[AccessibilityRecord]) -> int:
    rows = ((r.station, r.line_id, r.mode.value) for r in records)
    return write_csv(path, ACCESS_COLUMNS, rows)


def write_borough_table(path: str, records: Iterable[BoroughRecord]) -> int:
    rows = (
        (
            r.borough,
            format_full(r.median_income_k),
            r.daytime_population_total,
            r.daytime_population_workers,
            _blank_if_none(r.weekday_ridership),
            _blank_if_none(r.weekend_ridership),
        )
        for r in records
    )
    return write_csv(path, BOROUGH_COLUMNS + BOROUGH_OPTIONAL_COLUMNS, rows)
