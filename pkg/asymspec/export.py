"""
asymspec - Spectral analysis of asymmetric lagged correlation matrices.

Copyright (c) 2026 The asymspec developers
SPDX-License-Identifier: MIT

Artifact writers.

CSV and JSON files consumed by plotting tools. Output is deterministic:
floats are written in their shortest round-trip form, JSON keys are sorted,
and every file is replaced atomically so a reader never sees a partial
artifact.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Any

from asymspec.utils import format_float

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from asymspec.eig import ComplexSpectrum
    from asymspec.ingest import ReturnPanel


def atomic_write_text(path: str | Path, text: str) -> Path:
    """Write text to path through a temporary file in the same directory.

    Creates parent directories if they don't exist.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return target


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if value is None:
        return ""
    if hasattr(value, "dtype"):
        return _cell(value.item())
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a header line and rows as CSV."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return atomic_write_text(path, buffer.getvalue())


def write_json(path: str | Path, payload: Any) -> Path:
    """Write payload as indented JSON with sorted keys."""
    return atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def write_spectrum(path: str | Path, spectrum: ComplexSpectrum) -> Path:
    """Eigenvalues as (re, im) rows, ordered by real then imaginary part."""
    ordered = spectrum.sorted().eigenvalues
    return write_csv(path, ["re", "im"], ((float(z.real), float(z.imag)) for z in ordered))


def write_panel(panel: ReturnPanel, path: str | Path) -> Path:
    """Panel as a wide CSV (date, <ticker>...) plus a JSON sidecar.

    The sidecar sits next to the CSV with a .json suffix and records
    system_label, N, T and the standardized flag.
    """
    target = Path(path)
    rows = (
        [day.isoformat(), *(float(v) for v in panel.values[:, col])]
        for col, day in enumerate(panel.dates)
    )
    write_csv(target, ["date", *panel.tickers], rows)
    write_json(
        target.with_suffix(".json"),
        {
            "system_label": panel.system_label,
            "N": panel.n,
            "T": panel.t,
            "standardized": panel.standardized,
        },
    )
    return target
