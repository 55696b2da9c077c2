"""Delaunay triangulation, point location and Sibson (natural neighbour) weights.

The heavy loops live in a kernel module: the compiled ``_ckernels`` extension
when it has been built, otherwise the pure-Python ``_pykernels``. Set
``TERRAROUGH_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..pointcloud import DegenerateGeometryError, PointCloud
from . import _pykernels

kernels = _pykernels
BACKEND = "python"
if os.environ.get("TERRAROUGH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        pass


def available_backends() -> dict:
    """Kernel modules that can be imported, keyed by name."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["compiled"] = _ckernels
    except ImportError:
        pass
    return out


OUTSIDE = -1


@dataclass(frozen=True)
class Triangulation:
    """Delaunay triangulation of the xy sites.

    ``triangles[t]`` lists three site indices counter-clockwise, rotated so
    the smallest index comes first; rows are sorted, so triangle numbering
    does not depend on construction order. ``neighbors[t, k]`` is the
    triangle across the edge opposite ``triangles[t, k]`` (-1 on the hull).
    """

    xy: np.ndarray
    triangles: np.ndarray
    neighbors: np.ndarray
    backend: str = field(default="python", compare=False)

    @property
    def n_sites(self) -> int:
        return self.xy.shape[0]

    def __len__(self) -> int:
        return self.triangles.shape[0]


@dataclass(frozen=True)
class SibsonWeights:
    contributors: np.ndarray
    weights: np.ndarray

    def interpolate(self, z) -> float:
        return float(np.dot(self.weights, np.asarray(z, dtype=np.float64)[self.contributors]))


def hilbert_order(xy: np.ndarray, bits: int = 16) -> np.ndarray:
    """Indices of ``xy`` sorted along a Hilbert curve (ties by index)."""
    xy = np.asarray(xy, dtype=np.float64)
    lo = xy.min(axis=0)
    span = float(max((xy.max(axis=0) - lo).max(), 1e-300))
    side = (1 << bits) - 1
    qx = np.minimum(((xy[:, 0] - lo[0]) / span * side).astype(np.int64), side)
    qy = np.minimum(((xy[:, 1] - lo[1]) / span * side).astype(np.int64), side)
    d = np.zeros(xy.shape[0], dtype=np.int64)
    s = 1 << (bits - 1)
    while s > 0:
        rx = (qx & s) > 0
        ry = (qy & s) > 0
        d += s * s * ((3 * rx) ^ ry)
        # rotate the quadrant
        flip = ~ry
        swap_x = flip & rx
        qx = np.where(swap_x, side - qx, qx)
        qy = np.where(swap_x, side - qy, qy)
        qx, qy = np.where(flip, qy, qx), np.where(flip, qx, qy)
        s >>= 1
    return np.argsort(d, kind="stable")


def canonicalize(triangles: np.ndarray) -> np.ndarray:
    """Rotate each ccw triple so its smallest index leads, then sort rows."""
    tri = np.asarray(triangles, dtype=np.int64).reshape(-1, 3)
    if tri.size == 0:
        return tri
    shift = np.argmin(tri, axis=1)
    idx = (shift[:, None] + np.arange(3)[None, :]) % 3
    tri = np.take_along_axis(tri, idx, axis=1)
    order = np.lexsort((tri[:, 2], tri[:, 1], tri[:, 0]))
    return np.ascontiguousarray(tri[order])


def build_neighbors(triangles: np.ndarray, n_sites: int) -> np.ndarray:
    """Triangle adjacency: entry (t, k) is the triangle across the edge opposite vertex k."""
    tri = np.asarray(triangles, dtype=np.int64)
    m = tri.shape[0]
    nbrs = np.full((m, 3), -1, dtype=np.int64)
    if m == 0:
        return nbrs
    u = np.concatenate([tri[:, 1], tri[:, 2], tri[:, 0]])
    v = np.concatenate([tri[:, 2], tri[:, 0], tri[:, 1]])
    owner = np.tile(np.arange(m), 3)
    slot = np.repeat(np.arange(3), m)
    key = np.minimum(u, v) * n_sites + np.maximum(u, v)
    order = np.argsort(key, kind="stable")
    ks = key[order]
    same = np.flatnonzero(ks[1:] == ks[:-1])
    i, j = order[same], order[same + 1]
    nbrs[owner[i], slot[i]] = owner[j]
    nbrs[owner[j], slot[j]] = owner[i]
    return nbrs


def delaunay(cloud, backend: Optional[str] = None) -> Triangulation:
    """Delaunay triangulation of the cloud's xy locations.

    ``cloud`` may be a :class:`PointCloud` or an ``(n, 2)`` array. Sites must
    be distinct; see :func:`terrarough.pointcloud.dedupe_xy`.
    """
    xy = cloud.xy if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)[:, :2]
    xy = np.ascontiguousarray(xy, dtype=np.float64)
    if xy.shape[0] < 3:
        raise DegenerateGeometryError()
    k = _kernels(backend)
    order = hilbert_order(xy)
    try:
        raw = k.triangulate(xy, order)
    except ValueError as exc:
        if "degenerate" in str(exc):
            raise DegenerateGeometryError() from None
        raise
    tris = canonicalize(raw)
    return Triangulation(xy, tris, build_neighbors(tris, xy.shape[0]), "python" if k is _pykernels else "compiled")


def _kernels(backend: Optional[str]):
    if backend is None:
        return kernels
    mods = available_backends()
    if backend not in mods:
        raise ValueError(f"kernel backend {backend!r} is not available")
    return mods[backend]


def locate(tri: Triangulation, q, backend: Optional[str] = None) -> int:
    """Index of a triangle whose closed region contains q, or ``OUTSIDE``.

    A point on an edge or vertex shared by several triangles resolves to the
    lowest triangle index among them.
    """
    q = np.asarray(q, dtype=np.float64).reshape(1, 2)
    return int(_kernels(backend).locate_many(tri.xy, tri.triangles, tri.neighbors, q)[0])


def locate_many(tri: Triangulation, q, backend: Optional[str] = None) -> np.ndarray:
    q = np.ascontiguousarray(q, dtype=np.float64).reshape(-1, 2)
    return _kernels(backend).locate_many(tri.xy, tri.triangles, tri.neighbors, q)


def sibson_weights(tri: Triangulation, q, backend: Optional[str] = None) -> SibsonWeights:
    """Natural neighbour (Sibson) coordinates of q.

    Each weight is the area q's inserted Voronoi cell takes from that
    neighbour's cell, normalised to sum to one. A q on the hull boundary gets
    linear weights along the hull edge; a q on a site gets weight one there.
    Raises ``ValueError("outside hull")`` otherwise.
    """
    qx, qy = (float(v) for v in np.asarray(q, dtype=np.float64).ravel()[:2])
    idx, w = _kernels(backend).sibson(tri.xy, tri.triangles, tri.neighbors, qx, qy, 0)
    order = np.argsort(idx)
    return SibsonWeights(idx[order], w[order])
