"""Gridding scattered points into a DEM (natural neighbour, TIN-linear, nearest)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import geometry
from .geometry import Triangulation
from .pointcloud import PointCloud, dedupe_xy


@dataclass
class DemGrid:
    """Square-cell raster.

    ``values[r, c]`` is stored north-up: row 0 is the top (northern) row, as in
    the Esri ASCII layout. Row ``r`` counted from the bottom is
    ``i = nrows - 1 - r``, and the cell centre is
    ``(x0 + (c + 0.5) * cell, y0 + (i + 0.5) * cell)``. NaN marks nodata.
    """

    values: np.ndarray
    x0: float
    y0: float
    cell: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("grid values must be 2-D")
        if not self.cell > 0:
            raise ValueError("cell size must be positive")
        if np.isinf(self.values).any():
            raise ValueError("grid values must be finite or NaN")

    @property
    def nrows(self) -> int:
        return self.values.shape[0]

    @property
    def ncols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def nodata(self) -> np.ndarray:
        return np.isnan(self.values)

    def same_geometry(self, other: "DemGrid") -> bool:
        return (self.shape == other.shape and self.x0 == other.x0
                and self.y0 == other.y0 and self.cell == other.cell)

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, Y) arrays of cell-centre coordinates, shaped like ``values``."""
        xs = self.x0 + (np.arange(self.ncols) + 0.5) * self.cell
        ys = self.y0 + (np.arange(self.nrows)[::-1] + 0.5) * self.cell
        return np.meshgrid(xs, ys)

    def replace(self, values) -> "DemGrid":
        return DemGrid(values, self.x0, self.y0, self.cell)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DemGrid):
            return NotImplemented
        return self.same_geometry(other) and np.array_equal(self.values, other.values, equal_nan=True)


class InterpMethod(str, enum.Enum):
    NATURAL_NEIGHBOUR = "natural_neighbour"
    NEAREST_NEIGHBOUR = "nearest_neighbour"
    TIN_LINEAR = "tin_linear"

    @classmethod
    def parse(cls, name: Union[str, "InterpMethod"]) -> "InterpMethod":
        if isinstance(name, cls):
            return name
        aliases = {"natural": cls.NATURAL_NEIGHBOUR, "nearest": cls.NEAREST_NEIGHBOUR, "tin": cls.TIN_LINEAR}
        key = str(name).lower().replace("-", "_")
        if key in aliases:
            return aliases[key]
        return cls(key)


def grid_for(bbox, cell: float) -> DemGrid:
    """Empty (all-nodata) grid spanning ``bbox`` with ``ceil(span / cell)`` cells per axis."""
    if not cell > 0:
        raise ValueError("cell size must be positive")
    xmin, ymin, xmax, ymax = bbox
    ncols = max(1, math.ceil((xmax - xmin) / cell))
    nrows = max(1, math.ceil((ymax - ymin) / cell))
    return DemGrid(np.full((nrows, ncols), np.nan), float(xmin), float(ymin), float(cell))


def _query_points(grid: DemGrid) -> np.ndarray:
    X, Y = grid.cell_centers()
    return np.ascontiguousarray(np.column_stack([X.ravel(), Y.ravel()]))


def tin_interp(tri: Triangulation, zvals, q, backend: Optional[str] = None) -> float:
    """Barycentric interpolation in the triangle holding q; NaN outside the hull."""
    k = geometry._kernels(backend)
    q = np.asarray(q, dtype=np.float64).reshape(1, 2)
    return float(k.tin_grid(tri.xy, np.asarray(zvals, np.float64), tri.triangles, tri.neighbors, q)[0])


def natural_neighbour_interp(tri: Triangulation, zvals, q, backend: Optional[str] = None) -> float:
    """Sibson interpolation; returns the site value when q lands on a site, NaN outside."""
    k = geometry._kernels(backend)
    q = np.asarray(q, dtype=np.float64).reshape(1, 2)
    return float(k.natural_grid(tri.xy, np.asarray(zvals, np.float64), tri.triangles, tri.neighbors, q)[0])


def bin_hash(xy: np.ndarray, binsize: Optional[float] = None):
    """Uniform bin index over the points: (starts, items, x0, y0, binsize, nbx, nby).

    Items inside each bin are in ascending point index. The default bin size
    is the mean point spacing ``sqrt(bbox_area / n)``.
    """
    xy = np.asarray(xy, dtype=np.float64)
    lo = xy.min(axis=0)
    span = xy.max(axis=0) - lo
    if binsize is None:
        area = float(span[0] * span[1])
        binsize = math.sqrt(area / xy.shape[0]) if area > 0 else float(span.max()) / max(xy.shape[0], 1)
        if binsize <= 0:
            binsize = 1.0
    nbx = int(span[0] // binsize) + 1
    nby = int(span[1] // binsize) + 1
    bx = np.minimum(((xy[:, 0] - lo[0]) / binsize).astype(np.int64), nbx - 1)
    by = np.minimum(((xy[:, 1] - lo[1]) / binsize).astype(np.int64), nby - 1)
    key = by * nbx + bx
    items = np.argsort(key, kind="stable").astype(np.int64)
    counts = np.bincount(key, minlength=nbx * nby)
    starts = np.zeros(nbx * nby + 1, dtype=np.int64)
    np.cumsum(counts, out=starts[1:])
    return starts, items, float(lo[0]), float(lo[1]), float(binsize), nbx, nby


def nearest_values(cloud: PointCloud, q, backend: Optional[str] = None) -> np.ndarray:
    """z of the Euclidean-nearest sample for each query (ties to the lowest index)."""
    k = geometry._kernels(backend)
    starts, items, x0, y0, bs, nbx, nby = bin_hash(cloud.xy)
    q = np.ascontiguousarray(q, dtype=np.float64).reshape(-1, 2)
    return k.nearest_grid(cloud.xy, cloud.z, q, starts, items, x0, y0, bs, nbx, nby)


def rasterize(cloud: PointCloud, method="natural_neighbour", cell: float = 1.0,
              backend: Optional[str] = None, tri: Optional[Triangulation] = None) -> DemGrid:
    """Interpolate the cloud at the cell centres of a grid covering its bbox.

    Cells whose centre lies outside the convex hull are nodata for the
    natural neighbour and TIN methods; nearest neighbour fills every cell.
    Repeated xy locations keep their last sample. A prebuilt triangulation
    of the deduplicated cloud may be passed as ``tri``.
    """
    method = InterpMethod.parse(method)
    cloud = dedupe_xy(cloud)
    grid = grid_for(cloud.bbox, cell)
    q = _query_points(grid)
    k = geometry._kernels(backend)
    if method is InterpMethod.NEAREST_NEIGHBOUR:
        if len(cloud) < 1:
            raise ValueError("insufficient points")
        vals = nearest_values(cloud, q, backend)
    else:
        if tri is None:
            tri = geometry.delaunay(cloud, backend=backend)
        fn = k.natural_grid if method is InterpMethod.NATURAL_NEIGHBOUR else k.tin_grid
        vals = fn(tri.xy, cloud.z, tri.triangles, tri.neighbors, q)
    return grid.replace(vals.reshape(grid.shape))
