"""File output: fixed-width numeric formatting, RFC-4180 CSV, JSON, and
the run manifest that accompanies every data file.

Data files are byte-deterministic for a given command and version; the
timestamp lives only in the manifest so reruns diff clean.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import mpmath as mp

MANIFEST_SUFFIX = ".manifest.json"


def fmt(value) -> str:
    """17-significant-digit decimal rendering (round-half-even).

    Accepts float, int, mpf/mpc-free real mp values, exact integers, or
    None/empty for absent cells. Strings pass through untouched so exact
    rationals can be preformatted.
    """
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.16e}"
    # mpf and friends: mpmath's own printer, fixed significant digits
    return mp.nstr(value, 17, strip_zeros=False)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(c) for c in row])


def write_json(path, header, rows) -> None:
    payload = {
        "columns": list(header),
        "rows": [[fmt(c) for c in row] for row in rows],
    }
    with open(path, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    """Reproducibility sidecar: what ran, with which knobs, over which
    outputs (by digest). One manifest per primary output file."""

    command: str
    parameters: dict
    precision_mode: str
    version: str
    outputs: dict = field(default_factory=dict)

    def add_output(self, path) -> None:
        p = Path(path)
        self.outputs[p.name] = _sha256(p)

    def write(self, data_path) -> Path:
        side = Path(str(data_path) + MANIFEST_SUFFIX)
        doc = {
            "command": self.command,
            "parameters": self.parameters,
            "precision_mode": self.precision_mode,
            "version": self.version,
            "outputs": self.outputs,
            "created_utc": datetime.now(timezone.utc).isoformat(),
        }
        with open(side, "w", encoding="ascii") as fh:
            json.dump(doc, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return side
