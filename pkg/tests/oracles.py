"""Slow, obviously-correct reference implementations used as test oracles.

Nothing here imports library internals beyond the plain data types, so a
bug in the library cannot leak into the expected values.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from terrarough.pointcloud import PointCloud
from terrarough.rasterize import DemGrid


def random_cloud(rng, n, z=None, scale=10.0):
    xy = rng.random((n, 2)) * scale
    zz = rng.normal(size=n) if z is None else z(xy[:, 0], xy[:, 1])
    return PointCloud.from_xyz(xy[:, 0], xy[:, 1], zz)


def grid_from(values, cell=1.0, x0=0.0, y0=0.0):
    return DemGrid(np.asarray(values, dtype=np.float64), x0, y0, cell)


# ---------------------------------------------------------------------------
# geometry

def orient_exact(a, b, c) -> int:
    ax, ay, bx, by, cx, cy = (Fraction(float(v)) for v in (*a, *b, *c))
    d = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    return (d > 0) - (d < 0)


def incircle_exact(a, b, c, d) -> int:
    rows = []
    for p in (a, b, c):
        px, py = Fraction(float(p[0])) - Fraction(float(d[0])), Fraction(float(p[1])) - Fraction(float(d[1]))
        rows.append((px, py, px * px + py * py))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (det > 0) - (det < 0)


def circumcircle_violations(xy, triangles) -> int:
    """Count (triangle, site) pairs with the site strictly inside the circumcircle.

    A float filter discards clearly-outside pairs; the rest are decided exactly.
    """
    xy = np.asarray(xy, dtype=np.float64)
    bad = 0
    for t in np.asarray(triangles):
        a, b, c = xy[t]
        d = b - a
        e = c - a
        den = 2 * (d[0] * e[1] - d[1] * e[0])
        ux = (e[1] * (d @ d) - d[1] * (e @ e)) / den
        uy = (d[0] * (e @ e) - e[0] * (d @ d)) / den
        r2 = ux * ux + uy * uy
        dist2 = np.sum((xy - a - np.array([ux, uy])) ** 2, axis=1)
        cand = np.flatnonzero(dist2 < r2 * (1 + 1e-9))
        for k in cand:
            if k in t:
                continue
            if incircle_exact(a, b, c, xy[k]) > 0:
                bad += 1
    return bad


def hull_area(xy) -> float:
    """Convex hull area by Andrew's monotone chain and the shoelace formula."""
    pts = sorted(map(tuple, np.asarray(xy, dtype=np.float64).tolist()))

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    s = 0.0
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        s += x1 * y2 - x2 * y1
    return abs(s) / 2


def voronoi_pixel_weights(sites, q, npix=2000, chunk=100):
    """Sibson weights of q by rasterising its inserted Voronoi cell.

    A coarse pass finds the cell's bounding box; the fine pass counts, over an
    ``npix x npix`` grid on that box, the pixels closer to q than to any site,
    split by which site each pixel was nearest to before q was inserted.
    """
    sites = np.asarray(sites, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    lo = sites.min(axis=0)
    hi = sites.max(axis=0)
    span = hi - lo
    box = (lo - 2 * span, hi + 2 * span)

    def owned(xs, ys):
        X, Y = np.meshgrid(xs, ys)
        d = (X[..., None] - sites[:, 0]) ** 2 + (Y[..., None] - sites[:, 1]) ** 2
        nearest = d.argmin(axis=-1)
        dq = (X - q[0]) ** 2 + (Y - q[1]) ** 2
        return dq < d.min(axis=-1), nearest

    xs = np.linspace(box[0][0], box[1][0], 401)
    ys = np.linspace(box[0][1], box[1][1], 401)
    inside, _ = owned(xs, ys)
    rr, cc = np.nonzero(inside)
    step = np.array([xs[1] - xs[0], ys[1] - ys[0]])
    flo = np.array([xs[cc.min()], ys[rr.min()]]) - 2 * step
    fhi = np.array([xs[cc.max()], ys[rr.max()]]) + 2 * step
    px = (fhi - flo) / npix
    xs = flo[0] + (np.arange(npix) + 0.5) * px[0]
    ys = flo[1] + (np.arange(npix) + 0.5) * px[1]
    counts = np.zeros(len(sites))
    for r0 in range(0, npix, chunk):
        inside, nearest = owned(xs, ys[r0:r0 + chunk])
        counts += np.bincount(nearest[inside], minlength=len(sites))
    return counts / counts.sum()


def nearest_site(xy, q):
    """Index of the Euclidean-nearest site (lowest index on ties) by exhaustive search."""
    d = np.sum((np.asarray(xy) - np.asarray(q)) ** 2, axis=1)
    return int(np.flatnonzero(d == d.min())[0])


# ---------------------------------------------------------------------------
# descriptors

def sample_std(values) -> float:
    v = [float(x) for x in values]
    n = len(v)
    m = math.fsum(v) / n
    return math.sqrt(math.fsum((x - m) ** 2 for x in v) / (n - 1))


def ldre_std(z, cell=1.0) -> float:
    """Residual sample std after an lstsq plane fit on cell-centre coordinates."""
    z = np.asarray(z, dtype=np.float64)
    r, c = np.indices(z.shape)
    A = np.column_stack([(c.ravel() + 0.5) * cell, -(r.ravel() + 0.5) * cell, np.ones(z.size)])
    coef, *_ = np.linalg.lstsq(A, z.ravel(), rcond=None)
    return sample_std(z.ravel() - A @ coef)


def smooth(z, size=5):
    z = np.asarray(z, dtype=np.float64)
    nr, nc = z.shape
    h = size // 2
    out = np.full_like(z, np.nan)
    for i in range(nr):
        for j in range(nc):
            if np.isnan(z[i, j]):
                continue
            vals = []
            for a in range(max(0, i - h), min(nr, i + h + 1)):
                for b in range(max(0, j - h), min(nc, j + h + 1)):
                    if not np.isnan(z[a, b]):
                        vals.append(z[a, b])
            out[i, j] = math.fsum(vals) / len(vals)
    return out


def _neighbours(z, i, j):
    """Z1..Z9 around (i, j), missing or nodata neighbours replaced by the centre."""
    nr, nc = z.shape
    out = []
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            a, b = i + di, j + dj
            if 0 <= a < nr and 0 <= b < nc and not np.isnan(z[a, b]):
                out.append(z[a, b])
            else:
                out.append(z[i, j])
    return out


def slope_deg(z, cell=1.0):
    z = np.asarray(z, dtype=np.float64)
    out = np.full_like(z, np.nan)
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            if np.isnan(z[i, j]):
                continue
            z1, z2, z3, z4, z5, z6, z7, z8, z9 = _neighbours(z, i, j)
            p = ((z3 + 2 * z6 + z9) - (z1 + 2 * z4 + z7)) / (8 * cell)
            q = ((z7 + 2 * z8 + z9) - (z1 + 2 * z2 + z3)) / (8 * cell)
            out[i, j] = math.degrees(math.atan(math.sqrt(p * p + q * q)))
    return out


def curvature(z, cell=1.0):
    z = np.asarray(z, dtype=np.float64)
    out = np.full_like(z, np.nan)
    for i in range(z.shape[0]):
        for j in range(z.shape[1]):
            if np.isnan(z[i, j]):
                continue
            _, z2, _, z4, z5, z6, _, z8, _ = _neighbours(z, i, j)
            d = ((z4 + z6) / 2 - z5) / cell ** 2
            e = ((z2 + z8) / 2 - z5) / cell ** 2
            out[i, j] = 2 * d + 2 * e
    return out


def per_tile(field, w, fn):
    """Apply ``fn`` to each top-left anchored w x w tile; NaN if the tile has nodata."""
    field = np.asarray(field, dtype=np.float64)
    mr, mc = field.shape[0] // w, field.shape[1] // w
    out = np.empty((mr, mc))
    for i in range(mr):
        for j in range(mc):
            t = field[i * w:(i + 1) * w, j * w:(j + 1) * w]
            out[i, j] = np.nan if np.isnan(t).any() else fn(t)
    return out


def descriptor_oracle(z, d, w, cell=1.0):
    z = np.asarray(z, dtype=np.float64)
    if d == "rmsh":
        return per_tile(z, w, lambda t: sample_std(t.ravel()))
    if d == "ldre":
        return per_tile(z, w, lambda t: ldre_std(t, cell))
    if d == "rt":
        return per_tile(z - smooth(z), w, lambda t: sample_std(t.ravel()))
    if d == "slope_sd":
        return per_tile(slope_deg(z, cell), w, lambda t: sample_std(t.ravel()))
    if d == "curvature_sd":
        return per_tile(curvature(z, cell), w, lambda t: sample_std(t.ravel()))
    raise KeyError(d)


# ---------------------------------------------------------------------------
# correlation

def pearson_two_pass(a, b) -> float:
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    ok = ~(np.isnan(a) | np.isnan(b))
    xa = [float(v) for v in a[ok]]
    xb = [float(v) for v in b[ok]]
    ma = math.fsum(xa) / len(xa)
    mb = math.fsum(xb) / len(xb)
    num = math.fsum((x - ma) * (y - mb) for x, y in zip(xa, xb))
    da = math.fsum((x - ma) ** 2 for x in xa)
    db = math.fsum((y - mb) ** 2 for y in xb)
    return num / math.sqrt(da * db)
