"""Scattered elevation samples: XYZ text I/O, global plane fit and detrending."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)


class DegenerateGeometryError(ValueError):
    """Raised when points are collinear (or too few) for a plane or triangulation."""

    def __init__(self, msg: str = "degenerate geometry"):
        super().__init__(msg)


@dataclass(frozen=True)
class Plane:
    """z = a*x + b*y + c"""

    a: float
    b: float
    c: float

    def __call__(self, x, y):
        return self.a * np.asarray(x) + self.b * np.asarray(y) + self.c


class PointCloud:
    """Ordered scattered (x, y, z) samples.

    Coordinates are stored as a contiguous ``(n, 3)`` float64 array.
    """

    def __init__(self, points):
        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"expected an (n, 3) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        pts.setflags(write=False)
        self._pts = pts

    @classmethod
    def from_xyz(cls, x, y, z) -> "PointCloud":
        return cls(np.column_stack([np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)]))

    @property
    def points(self) -> np.ndarray:
        return self._pts

    @property
    def x(self) -> np.ndarray:
        return self._pts[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self._pts[:, 1]

    @property
    def z(self) -> np.ndarray:
        return self._pts[:, 2]

    @property
    def xy(self) -> np.ndarray:
        return np.ascontiguousarray(self._pts[:, :2])

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        if len(self) == 0:
            raise ValueError("empty cloud has no bounding box")
        lo = self._pts[:, :2].min(axis=0)
        hi = self._pts[:, :2].max(axis=0)
        return (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1]))

    def __len__(self) -> int:
        return self._pts.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointCloud):
            return NotImplemented
        return np.array_equal(self._pts, other._pts)

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)})"

    def with_z(self, z) -> "PointCloud":
        pts = self._pts.copy()
        pts[:, 2] = z
        return PointCloud(pts)


def _split_fields(line: str) -> list[str]:
    if "," in line:
        return [f.strip() for f in line.split(",")]
    return line.split()


def load_xyz(path, format: Optional[str] = None) -> PointCloud:
    """Read an XYZ text file.

    One point per line; fields are separated by commas (``format="csv"``) or
    whitespace (``format="whitespace"``). With ``format=None`` each line is
    split on commas if it has any, otherwise on whitespace. Lines starting
    with ``#`` are comments. A single header line is allowed before the data,
    recognised by a non-numeric first field. Fields beyond the third are
    ignored.
    """
    if format not in (None, "csv", "whitespace"):
        raise ValueError(f"unknown XYZ format {format!r}")
    rows: list[tuple[float, float, float]] = []
    seen_data = False
    header_used = False
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if format == "csv":
                fields = [f.strip() for f in line.split(",")]
            elif format == "whitespace":
                fields = line.split()
            else:
                fields = _split_fields(line)
            try:
                vals = (float(fields[0]), float(fields[1]), float(fields[2]))
            except (ValueError, IndexError):
                first_numeric = True
                try:
                    float(fields[0])
                except (ValueError, IndexError):
                    first_numeric = False
                if not seen_data and not header_used and not first_numeric:
                    header_used = True
                    continue
                raise ValueError(f"{path}: unparseable line {lineno}: {line!r}") from None
            if not all(np.isfinite(vals)):
                raise ValueError(f"{path}: non-finite value on line {lineno}")
            rows.append(vals)
            seen_data = True
    if len(rows) < 3:
        raise ValueError("insufficient points")
    cloud = PointCloud(np.array(rows, dtype=np.float64))
    logger.info("read %d points from %s", len(cloud), os.fspath(path))
    return cloud


def save_xyz(cloud: PointCloud, path, fmt: str = "%.6f") -> None:
    """Write ``x y z`` lines (whitespace separated, fixed precision)."""
    np.savetxt(path, cloud.points, fmt=fmt, delimiter=" ")


def fit_plane(cloud: PointCloud) -> Plane:
    """Least-squares plane through the points (vertical residuals).

    Coordinates are centred on the centroid before forming the normal
    equations, which keeps large map coordinates well conditioned.
    """
    if len(cloud) < 3:
        raise DegenerateGeometryError()
    p = cloud.points
    xm, ym, zm = p.mean(axis=0)
    dx = p[:, 0] - xm
    dy = p[:, 1] - ym
    dz = p[:, 2] - zm
    sxx = np.dot(dx, dx)
    syy = np.dot(dy, dy)
    sxy = np.dot(dx, dy)
    sxz = np.dot(dx, dz)
    syz = np.dot(dy, dz)
    det = sxx * syy - sxy * sxy
    if not (sxx > 0 and syy > 0) or det <= 1e-12 * sxx * syy:
        raise DegenerateGeometryError()
    a = (sxz * syy - syz * sxy) / det
    b = (syz * sxx - sxz * sxy) / det
    c = zm - a * xm - b * ym
    return Plane(float(a), float(b), float(c))


def detrend(cloud: PointCloud, plane: Plane) -> PointCloud:
    """Subtract ``plane`` and shift so the lowest residual sits at exactly zero."""
    if not all(np.isfinite([plane.a, plane.b, plane.c])):
        raise ValueError("plane coefficients must be finite")
    resid = cloud.z - (plane.a * cloud.x + plane.b * cloud.y + plane.c)
    return cloud.with_z(resid - resid.min())


def dedupe_xy(cloud: PointCloud) -> PointCloud:
    """Drop repeated (x, y) locations, keeping the last sample of each.

    Surviving points keep their original relative order.
    """
    xy = cloud.points[:, :2]
    rev = xy[::-1]
    _, first_in_rev = np.unique(rev, axis=0, return_index=True)
    keep = np.sort(len(cloud) - 1 - first_in_rev)
    if keep.size == len(cloud):
        return cloud
    logger.info("dropped %d duplicate xy locations", len(cloud) - keep.size)
    return PointCloud(cloud.points[keep])
