"""
Parsers for the four canonical CSV inputs.

    stations.csv       id,name,borough,region,lines        (lines pipe-separated)
    branches.csv       line_id,branch_id,seq,station_id    (seq ascending per branch)
    accessibility.csv  station_id,line_id,mode             (full | one_way | none)
    boroughs.csv       borough,median_income_k,daytime_total,daytime_workers,
                       weekday_ridership,weekend_ridership (last two optional)

All files are UTF-8 (a BOM is tolerated), comma separated, header first, LF or
CRLF line endings. Every failure names the file and the 1-based row.
"""

import codecs
import csv
import io
from typing import Iterator, Optional, Sequence

from transit_access.common.errors import (
    BadMode,
    BadRegion,
    BadValue,
    BranchTooShort,
    DuplicateId,
    DuplicateRecord,
    EmptyLineSet,
    LineNotServed,
    MissingColumn,
    NegativeCount,
    NonMonotoneSequence,
    RepeatedStation,
    UnknownStationRef,
    WorkersExceedTotal,
)
from transit_access.common.logger import logger
from transit_access.ingest.records import (
    AccessibilityRecord,
    AccessMode,
    BoroughRecord,
    Dataset,
    LineBranch,
    Station,
)

STATION_COLUMNS = ("id", "name", "borough", "region", "lines")
BRANCH_COLUMNS = ("line_id", "branch_id", "seq", "station_id")
ACCESS_COLUMNS = ("station_id", "line_id", "mode")
BOROUGH_COLUMNS = ("borough", "median_income_k", "daytime_total", "daytime_workers")
BOROUGH_OPTIONAL_COLUMNS = ("weekday_ridership", "weekend_ridership")

LINE_SEPARATOR = "|"


# ==============================================================================
# Shared table reading
# ==============================================================================
def _decode(path: str) -> str:
    """File contents as text. A UTF-8 BOM is dropped; bad bytes are reported by line."""
    with open(path, "rb") as f:
        raw = f.read()
    if raw.startswith(codecs.BOM_UTF8):
        raw = raw[len(codecs.BOM_UTF8) :]
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        row = raw.count(b"\n", 0, e.start) + 1
        raise BadValue(f"invalid UTF-8 byte 0x{raw[e.start]:02x}", path, row) from None


def _read_rows(path: str, required: Sequence[str]) -> Iterator[tuple[int, dict[str, str]]]:
    """
    Yield ``(row_number, row)`` with stripped keys and values.

    Raises MissingColumn when the header is absent or lacks a required column.
    """
    reader = csv.DictReader(io.StringIO(_decode(path), newline=""))
    if reader.fieldnames is None:
        raise MissingColumn(f"no header row, expected columns {list(required)}", path, 1)
    header = [name.strip() for name in reader.fieldnames]
    missing = [name for name in required if name not in header]
    if missing:
        raise MissingColumn(f"missing required column(s) {missing}", path, 1)
    reader.fieldnames = header
    for row in reader:
        # Skip fully blank lines (e.g. a trailing empty line with separators)
        values = {k: (v or "").strip() for k, v in row.items() if k is not None}
        if not any(values.values()):
            continue
        yield reader.line_num, values


def _require(value: str, column: str, path: str, row: int) -> str:
    if not value:
        raise BadValue(f"column {column!r} must not be empty", path, row)
    return value


def _parse_int(value: str, column: str, path: str, row: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise BadValue(f"column {column!r} must be an integer, got {value!r}", path, row)


def _parse_count(value: str, column: str, path: str, row: int) -> int:
    count = _parse_int(value, column, path, row)
    if count < 0:
        raise NegativeCount(f"column {column!r} must be non-negative, got {count}", path, row)
    return count


def _parse_optional_count(value: Optional[str], column: str, path: str, row: int):
    if value is None or value == "":
        return None
    return _parse_count(value, column, path, row)


# ==============================================================================
# Stations
# ==============================================================================
def parse_stations(path: str) -> list[Station]:
    stations: list[Station] = []
    seen: dict[str, int] = {}
    for row_number, row in _read_rows(path, STATION_COLUMNS):
        station_id = _require(row["id"], "id", path, row_number)
        if station_id in seen:
            raise DuplicateId(
                f"station id {station_id!r} already defined at row {seen[station_id]}",
                path,
                row_number,
            )
        seen[station_id] = row_number

        region = None
        if row["region"]:
            region = _parse_int(row["region"], "region", path, row_number)
            if not 1 <= region <= 9:
                raise BadRegion(f"region must be within 1..9, got {region}", path, row_number)

        lines = frozenset(
            part.strip() for part in row["lines"].split(LINE_SEPARATOR) if part.strip()
        )
        if not lines:
            raise EmptyLineSet(f"station {station_id!r} lists no lines", path, row_number)

        stations.append(
            Station(
                id=station_id,
                name=row["name"] or station_id,
                borough=row["borough"],
                region=region,
                lines=lines,
            )
        )
    logger.info(f"Parsed {len(stations)} stations from {path}")
    return stations


# ==============================================================================
# Line branches
# ==============================================================================
def parse_line_branches(path: str, stations: Sequence[Station]) -> list[LineBranch]:
    """
    Group rows into ordered branches keyed by ``(line_id, branch_id)``.

    Rows of different branches may interleave. Within one branch, ``seq`` must
    strictly increase in file order.
    """
    known = {s.id: s for s in stations}
    sequences: dict[tuple[str, str], list[str]] = {}
    last_seq: dict[tuple[str, str], int] = {}
    first_row: dict[tuple[str, str], int] = {}

    for row_number, row in _read_rows(path, BRANCH_COLUMNS):
        line_id = _require(row["line_id"], "line_id", path, row_number)
        branch_id = _require(row["branch_id"], "branch_id", path, row_number)
        seq = _parse_int(_require(row["seq"], "seq", path, row_number), "seq", path, row_number)
        if seq < 1:
            raise BadValue(f"seq is 1-based, got {seq}", path, row_number)
        station_id = _require(row["station_id"], "station_id", path, row_number)

        station = known.get(station_id)
        if station is None:
            raise UnknownStationRef(f"unknown station id {station_id!r}", path, row_number)
        if line_id not in station.lines:
            raise LineNotServed(
                f"station {station_id!r} does not list line {line_id!r}", path, row_number
            )

        key = (line_id, branch_id)
        if key in last_seq and seq <= last_seq[key]:
            raise NonMonotoneSequence(
                f"branch {line_id}/{branch_id}: seq {seq} follows {last_seq[key]}",
                path,
                row_number,
            )
        members = sequences.setdefault(key, [])
        if station_id in members:
            raise RepeatedStation(
                f"branch {line_id}/{branch_id} visits {station_id!r} twice", path, row_number
            )
        members.append(station_id)
        last_seq[key] = seq
        first_row.setdefault(key, row_number)

    branches = []
    for key, members in sequences.items():
        if len(members) < 2:
            raise BranchTooShort(
                f"branch {key[0]}/{key[1]} has {len(members)} station(s), needs at least 2",
                path,
                first_row[key],
            )
        branches.append(LineBranch(line_id=key[0], branch_id=key[1], stations=tuple(members)))
    logger.info(f"Parsed {len(branches)} branches from {path}")
    return branches


# ==============================================================================
# Accessibility
# ==============================================================================
def parse_accessibility(
    path: str, stations: Optional[Sequence[Station]] = None
) -> list[AccessibilityRecord]:
    known = {s.id: s for s in stations} if stations is not None else None
    records: list[AccessibilityRecord] = []
    seen: dict[tuple[str, str], int] = {}
    valid_modes = {mode.value for mode in AccessMode}

    for row_number, row in _read_rows(path, ACCESS_COLUMNS):
        station_id = _require(row["station_id"], "station_id", path, row_number)
        line_id = _require(row["line_id"], "line_id", path, row_number)
        mode = row["mode"].lower()
        if mode not in valid_modes:
            raise BadMode(
                f"mode must be one of {sorted(valid_modes)}, got {row['mode']!r}",
                path,
                row_number,
            )

        key = (station_id, line_id)
        if key in seen:
            raise DuplicateRecord(
                f"({station_id}, {line_id}) already recorded at row {seen[key]}",
                path,
                row_number,
            )
        seen[key] = row_number

        if known is not None:
            station = known.get(station_id)
            if station is None:
                raise UnknownStationRef(f"unknown station id {station_id!r}", path, row_number)
            if line_id not in station.lines:
                raise LineNotServed(
                    f"station {station_id!r} does not list line {line_id!r}", path, row_number
                )

        records.append(AccessibilityRecord(station_id, line_id, AccessMode(mode)))
    logger.info(f"Parsed {len(records)} accessibility records from {path}")
    return records


# ==============================================================================
# Boroughs
# ==============================================================================
def parse_borough_table(path: str) -> list[BoroughRecord]:
    records: list[BoroughRecord] = []
    seen: dict[str, int] = {}
    for row_number, row in _read_rows(path, BOROUGH_COLUMNS):
        borough = _require(row["borough"], "borough", path, row_number)
        if borough in seen:
            raise DuplicateRecord(
                f"borough {borough!r} already listed at row {seen[borough]}", path, row_number
            )
        seen[borough] = row_number

        income_raw = _require(row["median_income_k"], "median_income_k", path, row_number)
        try:
            income = float(income_raw)
        except ValueError:
            raise BadValue(
                f"median_income_k must be a number, got {income_raw!r}", path, row_number
            )
        if income < 0:
            raise NegativeCount(
                f"median_income_k must be non-negative, got {income}", path, row_number
            )

        total = _parse_count(row["daytime_total"], "daytime_total", path, row_number)
        workers = _parse_count(row["daytime_workers"], "daytime_workers", path, row_number)
        if workers > total:
            raise WorkersExceedTotal(
                f"daytime_workers {workers} exceeds daytime_total {total}", path, row_number
            )

        records.append(
            BoroughRecord(
                borough=borough,
                median_income_k=income,
                daytime_population_total=total,
                daytime_population_workers=workers,
                weekday_ridership=_parse_optional_count(
                    row.get("weekday_ridership"), "weekday_ridership", path, row_number
                ),
                weekend_ridership=_parse_optional_count(
                    row.get("weekend_ridership"), "weekend_ridership", path, row_number
                ),
            )
        )
    logger.info(f"Parsed {len(records)} boroughs from {path}")
    return records


def load_dataset(
    stations_path: str,
    branches_path: str,
    access_path: str,
    boroughs_path: Optional[str] = None,
) -> Dataset:
    """Parse and cross-validate one city's inputs."""
    stations = parse_stations(stations_path)
    branches = parse_line_branches(branches_path, stations)
    access_records = parse_accessibility(access_path, stations)
    boroughs = parse_borough_table(boroughs_path) if boroughs_path else []
    return Dataset(
        stations=tuple(stations),
        branches=tuple(branches),
        access_records=tuple(access_records),
        boroughs=tuple(boroughs),
    )
