"""Deterministic CSV and JSON emission for CLI runs.

Every numeric CSV field goes through the same 12-significant-digit
formatter, which sits below the eigendecomposition noise floor and keeps
golden files portable; identical inputs therefore reproduce byte-identical
numeric fields. CSVs are RFC-4180-style (csv module, minimal quoting) with
LF line endings and a mandatory header row. Each run writes one manifest
JSON recording the tool version, subcommand, parameters, config hash and
output files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from pathlib import Path

from . import __version__
from .configio import format_array_config
from .model import ArrayConfig


def fmt(value) -> str:
    """Format one numeric field at 12 significant digits."""
    return format(float(value), ".12g")


def write_csv(path, header, rows) -> Path:
    """Write pre-formatted string rows as CSV with LF endings."""
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def config_hash(cfg: ArrayConfig) -> str:
    """sha256 of the canonical text serialization of a config."""
    return hashlib.sha256(format_array_config(cfg).encode("utf-8")).hexdigest()


def write_json(path, payload) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


class ManifestWriter:
    """Collects run metadata and output paths, then writes manifest.json."""

    def __init__(self, out_dir, subcommand: str, parameters: dict):
        self.out_dir = Path(out_dir)
        self.subcommand = subcommand
        self.parameters = parameters
        self.outputs: list[str] = []
        self._start = time.monotonic()

    def record(self, path) -> Path:
        path = Path(path)
        self.outputs.append(path.name)
        return path

    def write(self, extra: dict | None = None) -> Path:
        payload = {
            "tool": "waveflow",
            "version": __version__,
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "outputs": sorted(self.outputs),
            "duration_s": round(time.monotonic() - self._start, 3),
        }
        if extra:
            payload.update(extra)
        return write_json(self.out_dir / "manifest.json", payload)
