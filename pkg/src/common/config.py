import dataclasses
import os
from dataclasses import dataclass, field
from typing import Any, Optional
import yaml

from transit_access.common.logger import logger


NETWORK_CHOICES = ("full", "accessible", "both")
CLOSENESS_CHOICES = ("n-1", "n")
POWER_LAW_CHOICES = ("pdf", "ccdf")


@dataclass
class Config:
    network: str = "both"
    closeness_convention: str = "n-1"
    top_k: int = 10
    threads: int = 0  # 0 = auto
    power_law_method: str = "pdf"
    power_law_kmin: int = 1
    exclude_lines: list[str] = field(default_factory=list)
    out_dir: str = "transit_access_out"
    # Free text copied into manifest.json, e.g. how the inputs differ from published counts.
    dataset_notes: str = ""

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        for name in ("top_k", "threads", "power_law_kmin"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{name} must be an integer, got {value!r}")
        for name in (
            "network",
            "closeness_convention",
            "power_law_method",
            "out_dir",
            "dataset_notes",
        ):
            if not isinstance(getattr(self, name), str):
                raise ValueError(f"{name} must be a string, got {getattr(self, name)!r}")
        if not isinstance(self.exclude_lines, list) or not all(
            isinstance(line, str) for line in self.exclude_lines
        ):
            raise ValueError(
                f"exclude_lines must be a list of line ids, got {self.exclude_lines!r}"
            )
        if self.network not in NETWORK_CHOICES:
            raise ValueError(f"network must be one of {NETWORK_CHOICES}, got {self.network!r}")
        if self.closeness_convention not in CLOSENESS_CHOICES:
            raise ValueError(
                f"closeness_convention must be one of {CLOSENESS_CHOICES}, "
                f"got {self.closeness_convention!r}"
            )
        if self.power_law_method not in POWER_LAW_CHOICES:
            raise ValueError(
                f"power_law_method must be one of {POWER_LAW_CHOICES}, "
                f"got {self.power_law_method!r}"
            )
        if self.top_k < 0:
            raise ValueError(f"top_k must be non-negative, got {self.top_k}")
        if self.threads < 0:
            raise ValueError(f"threads must be non-negative, got {self.threads}")
        if self.power_law_kmin < 1:
            raise ValueError(f"power_law_kmin must be >= 1, got {self.power_law_kmin}")

    @property
    def networks(self) -> tuple[str, ...]:
        """Network kinds selected by ``network``, accessible first."""
        if self.network == "both":
            return ("accessible", "full")
        return (self.network,)

    @classmethod
    def from_yaml_file(cls, yaml_file: str) -> "Config":
        with open(yaml_file, encoding="utf-8") as f:
            try:
                config_dict = yaml.safe_load(f) or {}
            except yaml.YAMLError as e:
                raise ValueError(f"The config file at {yaml_file} is not valid YAML: {e}") from e
        if not isinstance(config_dict, dict):
            raise ValueError(
                f"The config file at {yaml_file} must be a mapping, "
                f"got {type(config_dict).__name__}."
            )
        extra_keys = sorted(set(config_dict.keys()) - set(cls.__dataclass_fields__.keys()))
        if len(extra_keys) > 0:
            raise ValueError(f"The config file at {yaml_file} had unknown keys ({extra_keys}).")
        return cls(**config_dict)

    def to_yaml_file(self, yaml_file: str) -> None:
        # Create parent directories if they don't exist
        parent = os.path.dirname(yaml_file)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(yaml_file, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=True)
        logger.info(f"Saved config at {yaml_file}")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def with_overrides(self, **overrides: Any) -> "Config":
        """Return a copy where every non-None override replaces the current value."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        extra_keys = sorted(set(changes) - set(self.__dataclass_fields__.keys()))
        if extra_keys:
            raise ValueError(f"Unknown config keys ({extra_keys}).")
        return dataclasses.replace(self, **changes)


def load_config(config_file: Optional[str] = None) -> Config:
    """
    Resolve the effective configuration before CLI flags are applied.

    Order (later wins): dataclass defaults, the YAML file (``config_file`` or
    ``TRANSIT_ACCESS_CONFIG`` when it exists), then ``TRANSIT_ACCESS_THREADS``.
    """
    from transit_access.common.constants import TRANSIT_ACCESS_CONFIG, threads_from_env

    config = Config()
    if config_file is not None:
        config = Config.from_yaml_file(config_file)
        logger.debug(f"Loaded config from {config_file}")
    elif os.path.isfile(TRANSIT_ACCESS_CONFIG):
        config = Config.from_yaml_file(TRANSIT_ACCESS_CONFIG)
        logger.debug(f"Loaded config from {TRANSIT_ACCESS_CONFIG}")

    env_threads = threads_from_env()
    if env_threads is not None:
        config = config.with_overrides(threads=env_threads)
    return config
