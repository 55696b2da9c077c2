"""Local roughness descriptors on non-overlapping windows.

Five descriptors are supported, each a sample standard deviation (n - 1
denominator) over the cells of a ``w x w`` tile:

``rmsh``          raw elevations
``ldre``          residuals from a least-squares plane fitted inside the tile
``rt``            residual topography, DEM minus its 5x5 moving mean
``slope_sd``      slope in degrees from the 3x3 Sobel-type stencil
``curvature_sd``  curvature ``2D + 2E`` from the Zevenbergen-Thorne stencil

Tiles are anchored at the top-left cell; the right/bottom remainder that does
not fill a whole tile is dropped. A tile containing any nodata cell of the
relevant field is nodata.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .pointcloud import DegenerateGeometryError, PointCloud, fit_plane
from .rasterize import DemGrid

DEFAULT_WINDOWS = (3, 5, 7, 9, 11)
SMOOTH_SIZE = 5


class Descriptor(str, enum.Enum):
    RMSH = "rmsh"
    LDRE = "ldre"
    RT = "rt"
    SLOPE_SD = "slope_sd"
    CURVATURE_SD = "curvature_sd"

    @classmethod
    def parse(cls, name: Union[str, "Descriptor"]) -> "Descriptor":
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("-", "_")
        aliases = {"slope": cls.SLOPE_SD, "curv": cls.CURVATURE_SD, "curvature": cls.CURVATURE_SD}
        return aliases.get(key) or cls(key)

    @property
    def units(self) -> str:
        return {"slope_sd": "degrees", "curvature_sd": "1/m"}.get(self.value, "m")


# sorted by name, the ordering used in reports
ALL_DESCRIPTORS = tuple(sorted(Descriptor, key=lambda d: d.value))


def check_window(w) -> int:
    if isinstance(w, bool) or int(w) != w:
        raise ValueError("window must be an integer")
    w = int(w)
    if w < 3:
        raise ValueError("window must be at least 3")
    if w % 2 == 0:
        raise ValueError("window must be odd")
    return w


@dataclass
class RoughnessMap:
    """One roughness value per tile, as a coarse raster aligned with the source DEM."""

    grid: DemGrid
    descriptor: Descriptor
    window: int
    source_cell: float
    normalized: bool = False

    @property
    def values(self) -> np.ndarray:
        return self.grid.values

    @property
    def shape(self) -> tuple[int, int]:
        return self.grid.shape

    @property
    def nodata(self) -> np.ndarray:
        return self.grid.nodata

    @property
    def units(self) -> str:
        return "1" if self.normalized else self.descriptor.units

    def meta(self) -> dict:
        return {
            "descriptor": self.descriptor.value,
            "window": self.window,
            "source_cell": self.source_cell,
            "units": self.units,
            "normalized": self.normalized,
        }

    def with_values(self, values, normalized: Optional[bool] = None) -> "RoughnessMap":
        return RoughnessMap(self.grid.replace(values), self.descriptor, self.window, self.source_cell,
                            self.normalized if normalized is None else normalized)


# ---------------------------------------------------------------------------
# single-window operations

def _sample_std(v: np.ndarray) -> float:
    v = v - v[0]
    return float(np.sqrt(np.sum((v - v.mean()) ** 2) / (v.size - 1)))


def rmsh_window(cells) -> float:
    """Sample standard deviation of the valid (non-NaN) cells; NaN if fewer than two."""
    v = np.asarray(cells, dtype=np.float64).ravel()
    v = v[~np.isnan(v)]
    if v.size < 2:
        return float("nan")
    return _sample_std(v)


def ldre_window(cells, cell: float = 1.0) -> float:
    """Standard deviation of residuals after removing the best-fit plane.

    ``cells`` is a 2-D north-up window; the plane is fitted on cell-centre
    coordinates in metres. Collinear or too few valid cells give NaN.
    """
    z = np.asarray(cells, dtype=np.float64)
    if z.ndim != 2:
        raise ValueError("ldre_window expects a 2-D window")
    rows, cols = np.indices(z.shape)
    x = (cols + 0.5) * cell
    y = -(rows + 0.5) * cell
    ok = ~np.isnan(z)
    if ok.sum() < 3:
        return float("nan")
    pc = PointCloud.from_xyz(x[ok], y[ok], z[ok])
    try:
        plane = fit_plane(pc)
    except DegenerateGeometryError:
        return float("nan")
    return _sample_std(pc.z - plane(pc.x, pc.y))


# ---------------------------------------------------------------------------
# DEM-wide fields

def smooth_dem(dem: DemGrid, size: int = SMOOTH_SIZE) -> DemGrid:
    """Mean of the valid cells in the centred ``size x size`` block (clipped at edges).

    A cell is nodata exactly when the input cell is.
    """
    h = size // 2
    z = dem.values
    ok = ~np.isnan(z)
    zf = np.where(ok, z, 0.0)
    nr, nc = z.shape
    pz = np.zeros((nr + 2 * h, nc + 2 * h))
    pn = np.zeros_like(pz)
    pz[h:h + nr, h:h + nc] = zf
    pn[h:h + nr, h:h + nc] = ok
    acc = np.zeros_like(zf)
    cnt = np.zeros_like(zf)
    for dr in range(size):
        for dc in range(size):
            acc += pz[dr:dr + nr, dc:dc + nc]
            cnt += pn[dr:dr + nr, dc:dc + nc]
    with np.errstate(invalid="ignore", divide="ignore"):
        out = acc / cnt
    out[~ok] = np.nan
    return dem.replace(out)


def residual_topography(dem: DemGrid) -> DemGrid:
    return dem.replace(dem.values - smooth_dem(dem).values)


def stencil(z: np.ndarray) -> list[np.ndarray]:
    """The nine 3x3 stencil planes Z1..Z9 (row-major, north-up) for every cell.

    Neighbours off the grid or nodata take the centre value.
    """
    nr, nc = z.shape
    p = np.full((nr + 2, nc + 2), np.nan)
    p[1:-1, 1:-1] = z
    out = []
    for dr in range(3):
        for dc in range(3):
            nb = p[dr:dr + nr, dc:dc + nc]
            out.append(np.where(np.isnan(nb), z, nb))
    return out


def gradients(dem: DemGrid) -> tuple[np.ndarray, np.ndarray]:
    z1, z2, z3, z4, _, z6, z7, z8, z9 = stencil(dem.values)
    L = dem.cell
    dzdx = ((z3 + 2 * z6 + z9) - (z1 + 2 * z4 + z7)) / (8 * L)
    dzdy = ((z7 + 2 * z8 + z9) - (z1 + 2 * z2 + z3)) / (8 * L)
    # the centre cell is not in the formula, so carry its nodata mask explicitly
    hole = np.isnan(dem.values)
    dzdx[hole] = np.nan
    dzdy[hole] = np.nan
    return dzdx, dzdy


def slope_map(dem: DemGrid) -> DemGrid:
    """Slope angle in degrees."""
    dzdx, dzdy = gradients(dem)
    return dem.replace(np.degrees(np.arctan(np.hypot(dzdx, dzdy))))


def curvature_map(dem: DemGrid) -> DemGrid:
    """Zevenbergen-Thorne curvature ``2D + 2E`` in 1/m."""
    z = dem.values
    _, z2, _, z4, z5, z6, _, z8, _ = stencil(z)
    L2 = dem.cell * dem.cell
    d = ((z4 + z6) / 2 - z5) / L2
    e = ((z2 + z8) / 2 - z5) / L2
    return dem.replace(2 * e + 2 * d)


# ---------------------------------------------------------------------------
# tiling

def tiles(field: np.ndarray, w: int) -> np.ndarray:
    """View of ``field`` as ``(rows // w, cols // w, w * w)`` top-left anchored tiles."""
    nr, nc = field.shape
    mr, mc = nr // w, nc // w
    t = field[:mr * w, :mc * w].reshape(mr, w, mc, w).transpose(0, 2, 1, 3)
    return t.reshape(mr, mc, w * w)


def tile_std(field: np.ndarray, w: int) -> np.ndarray:
    t = tiles(field, w)
    t = t - t[..., :1]
    return t.std(axis=-1, ddof=1)


def tile_ldre(z: np.ndarray, w: int, cell: float = 1.0) -> np.ndarray:
    # full tiles share one centred, orthogonal design, so the plane fit
    # separates into independent x and y slopes
    t = tiles(z, w)
    t = t - t[..., :1]
    off = (np.arange(w) - (w - 1) / 2) * cell
    dx = np.tile(off, w)
    dy = -np.repeat(off, w)
    mean = t.mean(axis=-1, keepdims=True)
    a = (t @ dx) / np.dot(dx, dx)
    b = (t @ dy) / np.dot(dy, dy)
    resid = t - mean - a[..., None] * dx - b[..., None] * dy
    return np.sqrt(np.sum(resid * resid, axis=-1) / (w * w - 1))


def coarse_grid(dem: DemGrid, w: int, values: np.ndarray) -> DemGrid:
    mr = dem.nrows // w
    return DemGrid(values, dem.x0, dem.y0 + (dem.nrows - mr * w) * dem.cell, dem.cell * w)


class FieldCache:
    """Lazily computed DEM-wide fields, shared across descriptors and windows."""

    def __init__(self, dem: DemGrid):
        self.dem = dem
        self._rt = None
        self._slope = None
        self._curv = None

    @property
    def rt(self) -> np.ndarray:
        if self._rt is None:
            self._rt = residual_topography(self.dem).values
        return self._rt

    @property
    def slope(self) -> np.ndarray:
        if self._slope is None:
            self._slope = slope_map(self.dem).values
        return self._slope

    @property
    def curvature(self) -> np.ndarray:
        if self._curv is None:
            self._curv = curvature_map(self.dem).values
        return self._curv


def roughness_map(dem: DemGrid, d, w: int, fields: Optional[FieldCache] = None) -> RoughnessMap:
    """Roughness of ``dem`` for descriptor ``d`` on non-overlapping ``w x w`` tiles."""
    d = Descriptor.parse(d)
    w = check_window(w)
    if dem.nrows < w or dem.ncols < w:
        raise ValueError("window exceeds DEM")
    if fields is None:
        fields = FieldCache(dem)
    if d is Descriptor.RMSH:
        vals = tile_std(dem.values, w)
    elif d is Descriptor.LDRE:
        vals = tile_ldre(dem.values, w, dem.cell)
    elif d is Descriptor.RT:
        vals = tile_std(fields.rt, w)
    elif d is Descriptor.SLOPE_SD:
        vals = tile_std(fields.slope, w)
    else:
        vals = tile_std(fields.curvature, w)
    return RoughnessMap(coarse_grid(dem, w, vals), d, w, float(dem.cell))


def roughness_maps(dem: DemGrid, descriptors: Iterable = ALL_DESCRIPTORS,
                   windows: Iterable[int] = (5,)) -> dict:
    """All requested maps keyed by ``(descriptor, window)``; fields computed once."""
    fields = FieldCache(dem)
    out = {}
    for w in windows:
        for d in descriptors:
            d = Descriptor.parse(d)
            out[(d, int(w))] = roughness_map(dem, d, w, fields)
    return out
