import os
from typing import Optional


# default home directory for configs and run logs
default_home: str = os.path.join(os.path.expanduser("~"), ".cache")
TRANSIT_ACCESS_HOME: str = os.path.expandvars(
    os.path.expanduser(
        os.getenv(
            "TRANSIT_ACCESS_HOME",
            os.path.join(os.getenv("XDG_CACHE_HOME", default_home), "transit_access"),
        )
    )
)

# Path to config.yaml. Only read when it exists; never created implicitly.
default_config_path = os.path.join(TRANSIT_ACCESS_HOME, "config.yaml")
TRANSIT_ACCESS_CONFIG = os.path.expandvars(
    os.path.expanduser(
        os.getenv(
            "TRANSIT_ACCESS_CONFIG",
            default_config_path,
        )
    )
)

# the path to the folder where run logs are stored
default_log_path = os.path.join(TRANSIT_ACCESS_HOME, "logs")
TRANSIT_ACCESS_LOG_DIR = os.path.expandvars(
    os.path.expanduser(
        os.getenv(
            "TRANSIT_ACCESS_LOG_DIR",
            default_log_path,
        )
    )
)
RUN_LOG = os.path.join(TRANSIT_ACCESS_LOG_DIR, "run.log")

THREADS_ENV_VAR = "TRANSIT_ACCESS_THREADS"

# Output schema version, bumped whenever a file layout or column set changes.
OUTPUT_SCHEMA_VERSION = 1

# Places used by the summary tables.
TABLE_DECIMALS = 3

# CLI exit codes
EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INVARIANT = 3

# Borough fields that can be correlated against each other
SUMMARY_FIELDS = (
    "accessible_count",
    "total_count",
    "median_income_k",
    "daytime_total",
    "daytime_workers",
    "weekday_ridership",
    "weekend_ridership",
)

# Pairs reported by the socio command, x against y
CORRELATION_PAIRS = (
    ("accessible_count", "median_income_k"),
    ("accessible_count", "daytime_total"),
    ("accessible_count", "daytime_workers"),
    ("accessible_count", "weekday_ridership"),
    ("accessible_count", "weekend_ridership"),
)


def threads_from_env() -> Optional[int]:
    """Read ``TRANSIT_ACCESS_THREADS``; None when unset or blank."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV_VAR} must be a non-negative integer, got {raw!r}")
    if value < 0:
        raise ValueError(f"{THREADS_ENV_VAR} must be a non-negative integer, got {raw!r}")
    return value


def resolve_threads(threads: int) -> int:
    """Map the ``0 = auto`` convention onto a concrete worker count."""
    if threads > 0:
        return threads
    import psutil

    return max(1, psutil.cpu_count(logical=True) or 1)
