"""Artifact serialization: CSV tables and JSON manifests.

Numeric CSV cells carry 17 significant digits so float64 values
round-trip exactly and reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(path, columns: dict) -> None:
    """Write named columns (equal-length arrays) with a header row."""
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[n])) for n in names]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("CSV columns must have equal length")
    lines = [",".join(names)]
    for i in range(n):
        lines.append(",".join(_cell(a[i]) for a in arrays))
    Path(path).write_text("\n".join(lines) + "\n")


def write_samples_csv(path, x: np.ndarray, value: np.ndarray) -> None:
    """Canonical sample-array serialization (columns x, value)."""
    write_csv(path, {"x": x, "value": value})


def write_field_csv(path, x: np.ndarray, y_levels: np.ndarray, values: np.ndarray) -> None:
    """Flatten a (level, x) field to columns x, y, value."""
    ny, nx = values.shape
    xs = np.tile(x, ny)
    ys = np.repeat(y_levels, nx)
    write_csv(path, {"x": xs, "y": ys, "value": values.reshape(-1)})


def config_hash(echo_text: str) -> str:
    return hashlib.sha256(echo_text.encode()).hexdigest()


#: model units carried by every artifact (all quantities dimensionless
#: multiples of these)
UNITS = {
    "length": "b",
    "displacement": "b",
    "stress": "G",
    "force_per_area": "G*b/d",
    "energy_per_length": "G*b^2/d",
    "time": "d/G",
}


def write_manifest(path, cfg_echo: str, command: str, timings_s: dict,
                   extra: dict | None = None) -> None:
    from . import __version__

    manifest = {
        "format_version": "1",
        "package_version": __version__,
        "command": command,
        "config_hash": config_hash(cfg_echo),
        "config_echo": cfg_echo,
        "timings_s": timings_s,
        "units": UNITS,
        "written_at": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    if extra:
        manifest.update(extra)
    Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def prepare_output_dir(path, overwrite: bool) -> Path:
    """Create the output directory; refuse to reuse one unless overwriting."""
    out = Path(path)
    marker = out / "manifest.json"
    if marker.exists() and not overwrite:
        raise FileExistsError(
            f"output directory {out} already holds results; pass --overwrite to replace"
        )
    out.mkdir(parents=True, exist_ok=True)
    return out
