"""Provenance record written as ``manifest.json`` into every output directory."""

import os
from dataclasses import dataclass, field
from typing import Optional

from transit_access.common.config import Config
from transit_access.common.constants import OUTPUT_SCHEMA_VERSION
from transit_access.common.utils import hash_file, write_json

MANIFEST_FILE = "manifest.json"


@dataclass(frozen=True)
class RunManifest:
    # Paths exactly as given on the command line.
    inputs: dict[str, Optional[str]]
    network_kinds: tuple[str, ...]
    closeness_convention: str
    out_dir: str
    tool_version: str
    checksums: dict[str, str] = field(default_factory=dict)
    top_k: int = 10
    exclude_lines: tuple[str, ...] = ()
    power_law_method: str = "pdf"
    power_law_kmin: int = 1
    commands: tuple[str, ...] = ()
    dataset_notes: str = ""
    schema_version: int = OUTPUT_SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool_version": self.tool_version,
            "inputs": {k: v for k, v in sorted(self.inputs.items())},
            "checksums": {k: v for k, v in sorted(self.checksums.items())},
            "network_kinds": list(self.network_kinds),
            "closeness_convention": self.closeness_convention,
            "top_k": self.top_k,
            "exclude_lines": list(self.exclude_lines),
            "power_law": {"method": self.power_law_method, "kmin": self.power_law_kmin},
            "out_dir": self.out_dir,
            "commands": list(self.commands),
            "dataset_notes": self.dataset_notes,
        }


def build_manifest(config: Config, inputs: dict[str, Optional[str]], command: str) -> RunManifest:
    """
    Manifest for one CLI invocation.

    Thread counts and timestamps are not recorded; repeated runs over the
    same inputs produce the same bytes.
    """
    from transit_access import __version__

    checksums = {
        name: f"sha256:{hash_file(path)}"
        for name, path in inputs.items()
        if path is not None and os.path.isfile(path)
    }
    return RunManifest(
        inputs=dict(inputs),
        network_kinds=config.networks,
        closeness_convention=config.closeness_convention,
        out_dir=config.out_dir,
        tool_version=__version__,
        checksums=checksums,
        top_k=config.top_k,
        exclude_lines=tuple(sorted(config.exclude_lines)),
        power_law_method=config.power_law_method,
        power_law_kmin=config.power_law_kmin,
        commands=(command,),
        dataset_notes=config.dataset_notes,
    )


def write_manifest(out_dir: str, manifest: RunManifest) -> str:
    path = os.path.join(out_dir, MANIFEST_FILE)
    write_json(path, manifest.to_dict())
    return path
