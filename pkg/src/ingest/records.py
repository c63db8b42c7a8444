"""
Immutable records produced by the CSV parsers.

Station ids are opaque strings. Two physically distinct stations that share a
display name (``Gun Hill Road (2)`` / ``Gun Hill Road (5)``) carry distinct ids;
disambiguation lives in the id, never in position data.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

StationId = str
LineId = str


class AccessMode(str, Enum):
    FULL = "full"
    ONE_WAY = "one_way"
    NONE = "none"


@dataclass(frozen=True)
class Station:
    id: StationId
    name: str
    borough: str
    region: Optional[int]
    lines: frozenset[LineId]

    def __post_init__(self):
        if not self.id:
            raise ValueError("Station id must be non-empty")
        if not self.lines:
            raise ValueError(f"Station {self.id!r} serves no lines")
        if self.region is not None and not 1 <= self.region <= 9:
            raise ValueError(f"Station {self.id!r} has region {self.region} outside 1..9")


@dataclass(frozen=True)
class LineBranch:
    line_id: LineId
    branch_id: str
    stations: tuple[StationId, ...]

    def __post_init__(self):
        if len(self.stations) < 2:
            raise ValueError(f"Branch {self.key} has fewer than two stations")
        if len(set(self.stations)) != len(self.stations):
            raise ValueError(f"Branch {self.key} visits a station twice")

    @property
    def key(self) -> tuple[LineId, str]:
        return (self.line_id, self.branch_id)


@dataclass(frozen=True)
class AccessibilityRecord:
    station: StationId
    line_id: LineId
    mode: AccessMode


@dataclass(frozen=True)
class BoroughRecord:
    borough: str
    median_income_k: float
    daytime_population_total: int
    daytime_population_workers: int
    weekday_ridership: Optional[int] = None
    weekend_ridership: Optional[int] = None


@dataclass(frozen=True)
class Dataset:
    """Everything one city needs, parsed and cross-validated."""

    stations: tuple[Station, ...]
    branches: tuple[LineBranch, ...]
    access_records: tuple[AccessibilityRecord, ...]
    boroughs: tuple[BoroughRecord, ...] = field(default_factory=tuple)


def access_lookup(records) -> dict[tuple[StationId, LineId], AccessMode]:
    """(station, line) → mode. Absent pairs mean ``AccessMode.NONE``."""
    return {(r.station, r.line_id): r.mode for r in records}
