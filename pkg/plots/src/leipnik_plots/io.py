"""Readers for the CLI's CSV/JSON output files, with header validation."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


class PlotInputError(ValueError):
    """An input file is missing, malformed, or has the wrong columns."""


def read_columns(path, required: tuple[str, ...]) -> dict[str, np.ndarray]:
    """Read a CSV with the given header columns into float arrays.

    Raises PlotInputError naming the first missing column, or complaining
    about an empty body.
    """
    path = Path(path)
    if not path.exists():
        raise PlotInputError(f"missing file: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise PlotInputError(f"empty file: {path}") from None
        for col in required:
            if col not in header:
                raise PlotInputError(f"missing column: {col}")
        idx = [header.index(col) for col in required]
        rows = []
        for row in reader:
            if row:
                rows.append([float(row[i]) for i in idx])
    if not rows:
        raise PlotInputError(f"empty CSV body: {path}")
    data = np.asarray(rows)
    return {col: data[:, j] for j, col in enumerate(required)}


def read_run(run_dir) -> tuple[dict, dict, list[dict]]:
    """Load a sync run directory: trace columns, manifest, snapshot series.

    Snapshots are discovered through the manifest's file list (which also
    carries their times); a listed file that is absent on disk raises
    PlotInputError naming it.
    """
    run_dir = Path(run_dir)
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        raise PlotInputError(f"missing file: {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    trace = read_columns(run_dir / "trace.csv", ("t", "err_sup", "V"))

    snapshots = []
    for entry in manifest.get("files", []):
        name = entry["name"]
        if not (name.startswith("master_") or name.startswith("slave_")) or not name.endswith(".csv"):
            continue
        cols = read_columns(run_dir / name, ("x", "c1", "c2", "c3"))
        snapshots.append(
            {
                "name": name,
                "kind": "master" if name.startswith("master_") else "slave",
                "t": float(entry.get("t", len(snapshots))),
                "x": cols["x"],
                "values": np.stack([cols["c1"], cols["c2"], cols["c3"]]),
            }
        )
    if not snapshots:
        raise PlotInputError(f"no master_/slave_ snapshots listed in {manifest_path}")
    snapshots.sort(key=lambda s: (s["t"], s["kind"]))
    return trace, manifest, snapshots
