"""Esri ASCII grid reading and writing.

Header keys are written in the order ``ncols nrows xllcorner yllcorner
cellsize NODATA_value``; data rows follow top (north) to bottom with values
printed to 6 significant digits. Header coordinates use the shortest
representation that round-trips the float exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .rasterize import DemGrid

NODATA_VALUE = -9999.0
_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "nodata_value")


def _fmt(v: float) -> str:
    if np.isnan(v):
        return "-9999"
    s = "%.6g" % v
    return "0" if s == "-0" else s


def format_asc(grid: DemGrid) -> str:
    lines = [
        f"ncols {grid.ncols}",
        f"nrows {grid.nrows}",
        f"xllcorner {float(grid.x0)!r}",
        f"yllcorner {float(grid.y0)!r}",
        f"cellsize {float(grid.cell)!r}",
        "NODATA_value -9999",
    ]
    for row in grid.values:
        lines.append(" ".join(_fmt(v) for v in row.tolist()))
    return "\n".join(lines) + "\n"


def write_asc(path, grid: DemGrid) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_asc(grid))


def read_asc(path) -> DemGrid:
    with open(path, "r", encoding="ascii") as fh:
        text = fh.read().split("\n")
    header = {}
    pos = 0
    while pos < len(text) and len(header) < 6:
        parts = text[pos].split()
        if parts and parts[0][0] in "+-.0123456789":
            break
        pos += 1
        if not parts:
            continue
        key = parts[0].lower()
        if key in ("xllcenter", "yllcenter"):
            raise ValueError(f"{path}: cell-centre registration is not supported")
        if key not in _KEYS or len(parts) != 2:
            raise ValueError(f"{path}: bad header line {pos}: {text[pos - 1]!r}")
        header[key] = parts[1]
    missing = [k for k in _KEYS[:5] if k not in header]
    if missing:
        raise ValueError(f"{path}: missing header keys {missing}")
    ncols = int(header["ncols"])
    nrows = int(header["nrows"])
    nodata = float(header.get("nodata_value", NODATA_VALUE))
    body = " ".join(text[pos:]).split()
    if len(body) != nrows * ncols:
        raise ValueError(f"{path}: expected {nrows * ncols} values, found {len(body)}")
    vals = np.array(body, dtype=np.float64).reshape(nrows, ncols)
    vals[vals == nodata] = np.nan
    return DemGrid(vals, float(header["xllcorner"]), float(header["yllcorner"]), float(header["cellsize"]))


def write_meta(path, meta: dict) -> None:
    """Sidecar metadata: one single-key JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key, value in meta.items():
            fh.write(json.dumps({key: value}) + "\n")


def read_meta(path) -> dict:
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.update(json.loads(line))
    return out
