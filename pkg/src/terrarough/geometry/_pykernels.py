"""Pure-Python geometry kernels.

Same algorithms and the same call signatures as the compiled ``_ckernels``
module; selected automatically when the extension is not built.

Triangles are stored flat: vertices of triangle ``t`` at ``V[3t:3t+3]``
(counter-clockwise), and ``N[3t+k]`` is the triangle across the edge opposite
vertex ``k``. During construction the hull is closed with ghost triangles
``(a, b, GHOST)``: the hull edge ``a -> b`` has the interior on its right and
the ghost vertex stands for a point at infinity.
"""

from __future__ import annotations

import math

import numpy as np

from .predicates import incircle, incircle_sos, orient2d

GHOST = -1
COINCIDENT_TOL = 1e-9


# --------------------------------------------------------------------------
# Delaunay construction (Bowyer-Watson with ghost triangles)

def triangulate(xy, order):
    xy = np.asarray(xy, dtype=np.float64)
    X = xy[:, 0].tolist()
    Y = xy[:, 1].tolist()
    order = [int(i) for i in order]
    n = len(X)
    if n < 3:
        raise ValueError("degenerate geometry")

    V: list[int] = []
    N: list[int] = []
    alive: list[bool] = []
    mark: list[int] = []
    free: list[int] = []

    def alloc():
        if free:
            t = free.pop()
            alive[t] = True
            return t
        V.extend((0, 0, 0))
        N.extend((-1, -1, -1))
        alive.append(True)
        mark.append(0)
        return len(alive) - 1

    def set_tri(t, a, b, c):
        # keep the ghost vertex in the last slot, preserving cyclic order
        if a == GHOST:
            a, b, c = b, c, a
        elif b == GHOST:
            a, b, c = c, a, b
        V[3 * t] = a
        V[3 * t + 1] = b
        V[3 * t + 2] = c

    def in_circle(t, px, py, pid):
        a, b, c = V[3 * t], V[3 * t + 1], V[3 * t + 2]
        if c == GHOST:
            o = orient2d(X[a], Y[a], X[b], Y[b], px, py)
            if o != 0:
                return o > 0
            # collinear with the hull edge: inside only strictly between a and b
            dot = (px - X[a]) * (X[b] - X[a]) + (py - Y[a]) * (Y[b] - Y[a])
            return 0 < dot < (X[b] - X[a]) ** 2 + (Y[b] - Y[a]) ** 2
        return incircle_sos(X[a], Y[a], X[b], Y[b], X[c], Y[c], px, py, a, b, c, pid) > 0

    # seed triangle: first two sites plus the first site not collinear with them
    p0, p1 = order[0], order[1]
    if X[p0] == X[p1] and Y[p0] == Y[p1]:
        raise ValueError(f"duplicate site {p1}")
    pk = -1
    for i in order[2:]:
        if orient2d(X[p0], Y[p0], X[p1], Y[p1], X[i], Y[i]) != 0:
            pk = i
            break
    if pk < 0:
        raise ValueError("degenerate geometry")
    if orient2d(X[p0], Y[p0], X[p1], Y[p1], X[pk], Y[pk]) < 0:
        p0, p1 = p1, p0
    init = [(p0, p1, pk), (p1, p0, GHOST), (pk, p1, GHOST), (p0, pk, GHOST)]
    ts = []
    for tri in init:
        t = alloc()
        set_tri(t, *tri)
        ts.append(t)
    for t in ts:
        for k in range(3):
            u, v = V[3 * t + (k + 1) % 3], V[3 * t + (k + 2) % 3]
            for s in ts:
                if s == t:
                    continue
                for j in range(3):
                    if V[3 * s + (j + 1) % 3] == v and V[3 * s + (j + 2) % 3] == u:
                        N[3 * t + k] = s

    start_of: dict[int, int] = {}
    end_of: dict[int, int] = {}
    last = ts[0]
    stamp = 0
    skip = {order[0], order[1], pk}
    for pid in order:
        if pid in skip:
            continue
        px, py = X[pid], Y[pid]

        # visibility walk to a triangle whose circumcircle holds p
        t = last
        step = 0
        while True:
            if V[3 * t + 2] == GHOST:
                if in_circle(t, px, py, pid):
                    break
                t = N[3 * t + 2]
                continue
            moved = False
            for j in range(3):
                k = (step + j) % 3
                u, v = V[3 * t + (k + 1) % 3], V[3 * t + (k + 2) % 3]
                if orient2d(X[u], Y[u], X[v], Y[v], px, py) < 0:
                    t = N[3 * t + k]
                    moved = True
                    break
            step += 1
            if not moved:
                for k in range(3):
                    w = V[3 * t + k]
                    if X[w] == px and Y[w] == py:
                        raise ValueError(f"duplicate site {pid}")
                break

        # cavity of triangles whose circumcircle contains p
        stamp += 1
        mark[t] = stamp
        cavity = [t]
        stack = [t]
        while stack:
            s = stack.pop()
            for k in range(3):
                nb = N[3 * s + k]
                if mark[nb] != stamp and in_circle(nb, px, py, pid):
                    mark[nb] = stamp
                    cavity.append(nb)
                    stack.append(nb)

        boundary = []
        for s in cavity:
            for k in range(3):
                nb = N[3 * s + k]
                if mark[nb] != stamp:
                    e0, e1 = V[3 * s + (k + 1) % 3], V[3 * s + (k + 2) % 3]
                    boundary.append((e0, e1, nb, s))

        new = []
        for e0, e1, nb, s in boundary:
            t2 = alloc()
            set_tri(t2, e0, e1, pid)
            for k in range(3):
                if V[3 * t2 + k] == pid:
                    N[3 * t2 + k] = nb
            for j in range(3):
                if N[3 * nb + j] == s:
                    N[3 * nb + j] = t2
            start_of[e0] = t2
            end_of[e1] = t2
            new.append(t2)
        for t2 in new:
            for k in range(3):
                u, v = V[3 * t2 + (k + 1) % 3], V[3 * t2 + (k + 2) % 3]
                if v == pid:
                    N[3 * t2 + k] = start_of[u]
                elif u == pid:
                    N[3 * t2 + k] = end_of[v]
        for s in cavity:
            alive[s] = False
            free.append(s)
        last = new[0]
        for t2 in new:
            if V[3 * t2 + 2] != GHOST:
                last = t2
                break

    out = [(V[3 * t], V[3 * t + 1], V[3 * t + 2])
           for t in range(len(alive)) if alive[t] and V[3 * t + 2] != GHOST]
    return np.array(out, dtype=np.int64).reshape(-1, 3)


# --------------------------------------------------------------------------
# Queries on a finished triangulation (neighbor -1 marks the hull)

def _walk(X, Y, T, Nb, qx, qy, t):
    """Return a triangle whose closed region holds q, or -1 if q is outside."""
    step = 0
    while True:
        moved = False
        for j in range(3):
            k = (step + j) % 3
            u, v = T[t][(k + 1) % 3], T[t][(k + 2) % 3]
            if orient2d(X[u], Y[u], X[v], Y[v], qx, qy) < 0:
                nxt = Nb[t][k]
                if nxt < 0:
                    return -1
                t = nxt
                moved = True
                break
        step += 1
        if not moved:
            return t


def _zero_edges(X, Y, T, t, qx, qy):
    out = []
    for k in range(3):
        u, v = T[t][(k + 1) % 3], T[t][(k + 2) % 3]
        if orient2d(X[u], Y[u], X[v], Y[v], qx, qy) == 0:
            out.append(k)
    return out


def _fan_min(T, Nb, t, vert):
    """Lowest triangle index among those incident to ``vert``."""
    best = t
    cur = t
    while True:
        j = T[cur].index(vert)
        cur = Nb[cur][(j + 1) % 3]
        if cur < 0 or cur == t:
            break
        best = min(best, cur)
    if cur < 0:
        cur = t
        while True:
            j = T[cur].index(vert)
            cur = Nb[cur][(j + 2) % 3]
            if cur < 0:
                break
            best = min(best, cur)
    return best


def _tiebreak(X, Y, T, Nb, t, qx, qy):
    zeros = _zero_edges(X, Y, T, t, qx, qy)
    if len(zeros) == 1:
        nb = Nb[t][zeros[0]]
        return t if nb < 0 else min(t, nb)
    if len(zeros) == 2:
        vert = T[t][3 - zeros[0] - zeros[1]]
        return _fan_min(T, Nb, t, vert)
    return t


def _as_lists(xy, tris, nbrs):
    xy = np.asarray(xy, dtype=np.float64)
    return xy[:, 0].tolist(), xy[:, 1].tolist(), np.asarray(tris).tolist(), np.asarray(nbrs).tolist()


def locate_many(xy, tris, nbrs, q):
    X, Y, T, Nb = _as_lists(xy, tris, nbrs)
    q = np.asarray(q, dtype=np.float64)
    out = np.empty(q.shape[0], dtype=np.int64)
    hint = 0
    for i, (qx, qy) in enumerate(q.tolist()):
        t = _walk(X, Y, T, Nb, qx, qy, hint)
        if t >= 0:
            hint = t
            t = _tiebreak(X, Y, T, Nb, t, qx, qy)
        out[i] = t
    return out


def _circumcenter(ax, ay, bx, by, cx, cy):
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return ux, uy


def _sibson_at(X, Y, T, Nb, qx, qy, t):
    """Sibson weights for q strictly inside the hull, q in closed triangle t.

    Returns (contributors, weights) or, when q sits on a vertex or a hull
    edge, the corresponding point / linear weights.
    """
    n = len(X)
    for k in range(3):
        v = T[t][k]
        if math.hypot(X[v] - qx, Y[v] - qy) < COINCIDENT_TOL:
            return [v], [1.0]
    for k in _zero_edges(X, Y, T, t, qx, qy):
        if Nb[t][k] < 0:
            u, v = T[t][(k + 1) % 3], T[t][(k + 2) % 3]
            ex, ey = X[v] - X[u], Y[v] - Y[u]
            s = ((qx - X[u]) * ex + (qy - Y[u]) * ey) / (ex * ex + ey * ey)
            s = min(max(s, 0.0), 1.0)
            return [u, v], [1.0 - s, s]

    incav = {t}
    stack = [t]
    while stack:
        s = stack.pop()
        for k in range(3):
            nb = Nb[s][k]
            if nb < 0 or nb in incav:
                continue
            a, b, c = T[nb]
            if incircle_sos(X[a], Y[a], X[b], Y[b], X[c], Y[c], qx, qy, a, b, c, n) > 0:
                incav.add(nb)
                stack.append(nb)

    nxt = {}
    edge_tri = {}
    for s in incav:
        for k in range(3):
            nb = Nb[s][k]
            if nb < 0 or nb not in incav:
                e0, e1 = T[s][(k + 1) % 3], T[s][(k + 2) % 3]
                nxt[e0] = e1
                edge_tri[e0] = s
    first = min(nxt)
    ring = [first]
    v = nxt[first]
    while v != first:
        ring.append(v)
        v = nxt[v]

    cc = {}

    def old_cc(s):
        if s not in cc:
            a, b, c = T[s]
            cc[s] = _circumcenter(X[a] - qx, Y[a] - qy, X[b] - qx, Y[b] - qy, X[c] - qx, Y[c] - qy)
        return cc[s]

    m = len(ring)
    new_cc = []
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        new_cc.append(_circumcenter(0.0, 0.0, X[a] - qx, Y[a] - qy, X[b] - qx, Y[b] - qy))

    weights = []
    for i in range(m):
        vi = ring[i]
        poly = [new_cc[i]]
        s = edge_tri[vi]
        while True:
            poly.append(old_cc(s))
            j = T[s].index(vi)
            s2 = Nb[s][(j + 1) % 3]
            if s2 < 0 or s2 not in incav:
                break
            s = s2
        poly.append(new_cc[i - 1])
        area = 0.0
        for p in range(len(poly)):
            x1, y1 = poly[p]
            x2, y2 = poly[(p + 1) % len(poly)]
            area += x1 * y2 - x2 * y1
        weights.append(0.5 * area)
    total = sum(weights)
    return ring, [w / total for w in weights]


def sibson(xy, tris, nbrs, qx, qy, hint=0):
    X, Y, T, Nb = _as_lists(xy, tris, nbrs)
    t = _walk(X, Y, T, Nb, float(qx), float(qy), max(int(hint), 0))
    if t < 0:
        raise ValueError("outside hull")
    idx, w = _sibson_at(X, Y, T, Nb, float(qx), float(qy), t)
    return np.array(idx, dtype=np.int64), np.array(w, dtype=np.float64)


def natural_grid(xy, z, tris, nbrs, q):
    X, Y, T, Nb = _as_lists(xy, tris, nbrs)
    Z = np.asarray(z, dtype=np.float64).tolist()
    q = np.asarray(q, dtype=np.float64)
    out = np.full(q.shape[0], np.nan)
    hint = 0
    for i, (qx, qy) in enumerate(q.tolist()):
        t = _walk(X, Y, T, Nb, qx, qy, hint)
        if t < 0:
            continue
        hint = t
        idx, w = _sibson_at(X, Y, T, Nb, qx, qy, t)
        # anchored at the first contributor so a constant field comes back exactly
        z0 = Z[idx[0]]
        out[i] = z0 + sum(wi * (Z[j] - z0) for j, wi in zip(idx, w))
    return out


def tin_grid(xy, z, tris, nbrs, q):
    X, Y, T, Nb = _as_lists(xy, tris, nbrs)
    Z = np.asarray(z, dtype=np.float64).tolist()
    q = np.asarray(q, dtype=np.float64)
    out = np.full(q.shape[0], np.nan)
    hint = 0
    for i, (qx, qy) in enumerate(q.tolist()):
        t = _walk(X, Y, T, Nb, qx, qy, hint)
        if t < 0:
            continue
        hint = t
        t = _tiebreak(X, Y, T, Nb, t, qx, qy)
        out[i] = _barycentric(X, Y, Z, T[t], qx, qy)
    return out


def _barycentric(X, Y, Z, tri, qx, qy):
    a, b, c = tri
    for v in tri:
        if math.hypot(X[v] - qx, Y[v] - qy) < COINCIDENT_TOL:
            return Z[v]
    ax, ay, bx, by, cx, cy = X[a], Y[a], X[b], Y[b], X[c], Y[c]
    area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    lb = ((cx - qx) * (ay - qy) - (cy - qy) * (ax - qx)) / area
    lc = ((ax - qx) * (by - qy) - (ay - qy) * (bx - qx)) / area
    return Z[a] + lb * (Z[b] - Z[a]) + lc * (Z[c] - Z[a])


# --------------------------------------------------------------------------
# Nearest neighbour through a uniform bin hash

def nearest_grid(xy, z, q, bin_start, bin_items, x0, y0, binsize, nbx, nby):
    xy = np.asarray(xy, dtype=np.float64)
    X = xy[:, 0].tolist()
    Y = xy[:, 1].tolist()
    Z = np.asarray(z, dtype=np.float64).tolist()
    starts = np.asarray(bin_start).tolist()
    items = np.asarray(bin_items).tolist()
    q = np.asarray(q, dtype=np.float64)
    out = np.empty(q.shape[0])
    for i, (qx, qy) in enumerate(q.tolist()):
        bx = min(max(int((qx - x0) / binsize), 0), nbx - 1)
        by = min(max(int((qy - y0) / binsize), 0), nby - 1)
        best_d = math.inf
        best_i = -1
        r = 0
        while True:
            for jy in range(by - r, by + r + 1):
                if jy < 0 or jy >= nby:
                    continue
                ring_row = jy == by - r or jy == by + r
                step = 1 if ring_row else 2 * r
                jx = bx - r
                while jx <= bx + r:
                    if 0 <= jx < nbx:
                        b = jy * nbx + jx
                        for p in items[starts[b]:starts[b + 1]]:
                            dx = X[p] - qx
                            dy = Y[p] - qy
                            d = dx * dx + dy * dy
                            if d < best_d or (d == best_d and p < best_i):
                                best_d = d
                                best_i = p
                    jx += step if step > 0 else 1
            if best_i >= 0 and best_d <= (r * binsize) ** 2:
                break
            if r > nbx + nby:
                break
            r += 1
        out[i] = Z[best_i]
    return out
