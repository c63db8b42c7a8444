import csv
import hashlib
import json
import math
import os
from decimal import Decimal, ROUND_HALF_EVEN
from typing import Any, Iterable, Sequence

from transit_access.common.constants import TABLE_DECIMALS


# ==============================================================================
# Hashing
# ==============================================================================
def hash_file(path: str) -> str:
    """sha256 of a file's bytes, streamed in 64 KiB chunks."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ==============================================================================
# Float formatting
# ==============================================================================
def format_full(value: float) -> str:
    """
    Shortest representation that round-trips to the same double.

    ``repr`` gives at most 17 significant digits and is identical on every
    platform with IEEE-754 doubles, which is what byte-identical outputs need.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scores")
    if isinstance(value, int):
        return str(value)
    if math.isnan(value) or math.isinf(value):
        raise ValueError(f"Refusing to format non-finite value {value!r}")
    if value == 0.0:
        return "0.0"  # collapses -0.0
    return repr(float(value))


def round_half_even(value: float, decimals: int = TABLE_DECIMALS) -> str:
    """Round to ``decimals`` places with banker's rounding, as a fixed-point string."""
    quantum = Decimal(1).scaleb(-decimals)
    rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if rounded.is_zero():
        rounded = abs(rounded)
    return f"{rounded:.{decimals}f}"


# ==============================================================================
# Deterministic writers
# ==============================================================================
def ensure_parent(path: str) -> None:
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> int:
    """Write a header plus rows with LF line endings. Returns the number of data rows."""
    ensure_parent(path)
    count = 0
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def write_json(path: str, payload: Any) -> None:
    """Sorted keys, two-space indent, trailing newline."""
    ensure_parent(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")


def json_float(value: float | None) -> float | None:
    """Normalise floats destined for JSON (-0.0 → 0.0); None passes through."""
    if value is None:
        return None
    if value == 0.0:
        return 0.0
    return float(value)
