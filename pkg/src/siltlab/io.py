"""Serialization and run-persistence helpers for the command-line tools.

All data files start with a "# schema=siltlab/<name>/<version>" comment
line so readers can detect format drift.  Floats are written with 17
significant digits, which round-trips IEEE doubles exactly.  Each run
directory gets a manifest recording the configuration snapshot, tool
version, and a sha256 checksum per output file; re-running the same
configuration reproduces every data file byte for byte (the manifest's
timestamp is the only thing that moves).
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

__all__ = [
    "SCHEMA_VERSION",
    "format_float",
    "format_value",
    "schema_line",
    "write_csv",
    "read_csv",
    "write_json",
    "sha256_file",
    "write_manifest",
    "load_config",
    "parse_override",
    "output_root",
    "estimate_to_row",
    "ESTIMATE_COLUMNS",
]

SCHEMA_VERSION = 1

ESTIMATE_COLUMNS = ("kind", "H", "t", "n_steps", "seed", "y", "epsilon",
                    "region_id", "value", "converged")


def format_float(x: float) -> str:
    """17-significant-digit decimal, round-trip exact for 64-bit floats."""
    return format(float(x), ".17g")


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, (list, tuple)):
        return ",".join(format_value(x) for x in v)
    return str(v)


def schema_line(name: str) -> str:
    return f"# schema=siltlab/{name}/{SCHEMA_VERSION}"


def write_csv(path, name: str, columns, rows) -> Path:
    """Write a schema-tagged CSV; row values go through format_value."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(schema_line(name) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def read_csv(path):
    """Read a schema-tagged CSV -> (schema string, list of row dicts)."""
    with open(path, newline="") as fh:
        first = fh.readline().rstrip("\n")
        if not first.startswith("# schema="):
            raise ValueError(f"{path}: missing schema header line")
        schema = first[len("# schema="):]
        reader = csv.reader(fh)
        header = next(reader)
        rows = [dict(zip(header, row)) for row in reader]
    return schema, rows


def write_json(path, name: str, payload: dict) -> Path:
    """Write a JSON document with an embedded schema tag, stable key order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"schema": f"siltlab/{name}/{SCHEMA_VERSION}"}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(outdir, command: str, config: dict, outputs) -> Path:
    """Record the run: config snapshot, tool version, output checksums."""
    outdir = Path(outdir)
    entries = []
    for p in sorted(Path(p) for p in outputs):
        entries.append({
            "path": p.name,
            "bytes": p.stat().st_size,
            "sha256": sha256_file(p),
        })
    payload = {
        "command": command,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": {k: format_value(v) for k, v in sorted(config.items())},
        "outputs": entries,
    }
    return write_json(outdir / "manifest.json", "manifest", payload)


def load_config(path) -> dict:
    """Flat key=value configuration file; '#' comments and blanks ignored."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def parse_override(text: str):
    """Parse one --set KEY=VALUE override."""
    if "=" not in text:
        raise ValueError(f"--set needs KEY=VALUE, got {text!r}")
    key, _, value = text.partition("=")
    return key.strip(), value.strip()


def output_root() -> Path:
    """Default output root: $SILTLAB_OUTPUT_ROOT or ./siltlab-out."""
    env = os.environ.get("SILTLAB_OUTPUT_ROOT")
    return Path(env) if env else Path.cwd() / "siltlab-out"


def estimate_to_row(est) -> tuple:
    """SiltEstimate -> the canonical CSV row (ESTIMATE_COLUMNS order)."""
    return (est.kind, est.hurst, est.horizon, est.n_steps, est.seed,
            est.y, est.epsilon, est.region_id, est.value, est.converged)
