# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled geometry kernels.

Mirror of ``_pykernels`` (same layout, same predicates, same tie-breaks).
Floating-point predicate results that fall inside Shewchuk's error bound are
handed to the exact rational routines in ``predicates``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot, INFINITY, NAN
from libcpp.vector cimport vector

from . import predicates as _pred

cnp.import_array()

ctypedef cnp.int64_t i64

cdef double _EPS = 1.1102230246251565e-16
cdef double CCW_ERRA = (3.0 + 16.0 * _EPS) * _EPS
cdef double ICC_ERRA = (10.0 + 96.0 * _EPS) * _EPS
cdef double COINCIDENT_TOL = 1e-9
cdef i64 GHOST = -1


cdef int orient(double ax, double ay, double bx, double by, double cx, double cy) except -9:
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    cdef double errbound = CCW_ERRA * (fabs(detleft) + fabs(detright))
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return _pred.orient2d_exact(ax, ay, bx, by, cx, cy)


cdef int incircle_sos(double ax, double ay, double bx, double by, double cx, double cy,
                      double dx, double dy, i64 ia, i64 ib, i64 ic, i64 id_) except -9:
    cdef double adx = ax - dx, ady = ay - dy
    cdef double bdx = bx - dx, bdy = by - dy
    cdef double cdx = cx - dx, cdy = cy - dy
    cdef double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy
    cdef double cdxady = cdx * ady, adxcdy = adx * cdy
    cdef double adxbdy = adx * bdy, bdxady = bdx * ady
    cdef double alift = adx * adx + ady * ady
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double clift = cdx * cdx + cdy * cdy
    cdef double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    cdef double permanent = ((fabs(bdxcdy) + fabs(cdxbdy)) * alift
                             + (fabs(cdxady) + fabs(adxcdy)) * blift
                             + (fabs(adxbdy) + fabs(bdxady)) * clift)
    cdef double errbound = ICC_ERRA * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return _pred.incircle_sos(ax, ay, bx, by, cx, cy, dx, dy, ia, ib, ic, id_)


# --------------------------------------------------------------------------
# Delaunay construction

cdef class _Mesh:
    cdef const double[:] X
    cdef const double[:] Y
    cdef vector[i64] V
    cdef vector[i64] N
    cdef vector[char] alive
    cdef vector[i64] mark
    cdef vector[i64] free

    cdef i64 alloc(self):
        cdef i64 t
        if self.free.size() > 0:
            t = self.free.back()
            self.free.pop_back()
            self.alive[t] = 1
            return t
        cdef int r
        for r in range(3):
            self.V.push_back(0)
            self.N.push_back(-1)
        self.alive.push_back(1)
        self.mark.push_back(0)
        return <i64>self.alive.size() - 1

    cdef void set_tri(self, i64 t, i64 a, i64 b, i64 c):
        if a == GHOST:
            a, b, c = b, c, a
        elif b == GHOST:
            a, b, c = c, a, b
        self.V[3 * t] = a
        self.V[3 * t + 1] = b
        self.V[3 * t + 2] = c

    cdef int in_circle(self, i64 t, double px, double py, i64 pid) except -9:
        cdef i64 a = self.V[3 * t], b = self.V[3 * t + 1], c = self.V[3 * t + 2]
        cdef int o
        cdef double dot, ex, ey
        if c == GHOST:
            o = orient(self.X[a], self.Y[a], self.X[b], self.Y[b], px, py)
            if o != 0:
                return o > 0
            ex = self.X[b] - self.X[a]
            ey = self.Y[b] - self.Y[a]
            dot = (px - self.X[a]) * ex + (py - self.Y[a]) * ey
            return 0 < dot and dot < ex * ex + ey * ey
        return incircle_sos(self.X[a], self.Y[a], self.X[b], self.Y[b], self.X[c], self.Y[c],
                            px, py, a, b, c, pid) > 0


def triangulate(const double[:, ::1] xy, order):
    cdef i64 n = xy.shape[0]
    if n < 3:
        raise ValueError("degenerate geometry")
    cdef i64[::1] ordv = np.ascontiguousarray(order, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(xy[:, 0])
    cdef cnp.ndarray[double, ndim=1] ys = np.ascontiguousarray(xy[:, 1])
    cdef _Mesh m = _Mesh()
    m.X = xs
    m.Y = ys
    cdef const double[:] X = xs
    cdef const double[:] Y = ys

    cdef i64 p0 = ordv[0], p1 = ordv[1], pk = -1, i, j, k, t, s, nb, u, v, pid, t2, step
    cdef i64 e0, e1, stamp = 0, last, ii
    cdef size_t ii2
    cdef double px, py
    cdef bint moved
    if X[p0] == X[p1] and Y[p0] == Y[p1]:
        raise ValueError(f"duplicate site {p1}")
    for ii in range(2, n):
        i = ordv[ii]
        if orient(X[p0], Y[p0], X[p1], Y[p1], X[i], Y[i]) != 0:
            pk = i
            break
    if pk < 0:
        raise ValueError("degenerate geometry")
    if orient(X[p0], Y[p0], X[p1], Y[p1], X[pk], Y[pk]) < 0:
        p0, p1 = p1, p0

    cdef i64 init[4][3]
    init[0][:] = [p0, p1, pk]
    init[1][:] = [p1, p0, GHOST]
    init[2][:] = [pk, p1, GHOST]
    init[3][:] = [p0, pk, GHOST]
    for i in range(4):
        t = m.alloc()
        m.set_tri(t, init[i][0], init[i][1], init[i][2])
    for t in range(4):
        for k in range(3):
            u = m.V[3 * t + (k + 1) % 3]
            v = m.V[3 * t + (k + 2) % 3]
            for s in range(4):
                if s == t:
                    continue
                for j in range(3):
                    if m.V[3 * s + (j + 1) % 3] == v and m.V[3 * s + (j + 2) % 3] == u:
                        m.N[3 * t + k] = s

    # vertex -> new triangle maps; slot n stands for the ghost vertex
    cdef vector[i64] start_of = vector[i64](n + 1, -1)
    cdef vector[i64] end_of = vector[i64](n + 1, -1)
    cdef vector[i64] cavity, stack, b_e0, b_e1, b_nb, b_src, new
    last = 0
    cdef i64 skip0 = ordv[0], skip1 = ordv[1]
    for ii in range(n):
        pid = ordv[ii]
        if pid == skip0 or pid == skip1 or pid == pk:
            continue
        px = X[pid]
        py = Y[pid]

        t = last
        step = 0
        while True:
            if m.V[3 * t + 2] == GHOST:
                if m.in_circle(t, px, py, pid):
                    break
                t = m.N[3 * t + 2]
                continue
            moved = False
            for j in range(3):
                k = (step + j) % 3
                u = m.V[3 * t + (k + 1) % 3]
                v = m.V[3 * t + (k + 2) % 3]
                if orient(X[u], Y[u], X[v], Y[v], px, py) < 0:
                    t = m.N[3 * t + k]
                    moved = True
                    break
            step += 1
            if not moved:
                for k in range(3):
                    u = m.V[3 * t + k]
                    if X[u] == px and Y[u] == py:
                        raise ValueError(f"duplicate site {pid}")
                break

        stamp += 1
        m.mark[t] = stamp
        cavity.clear()
        stack.clear()
        cavity.push_back(t)
        stack.push_back(t)
        while stack.size() > 0:
            s = stack.back()
            stack.pop_back()
            for k in range(3):
                nb = m.N[3 * s + k]
                if m.mark[nb] != stamp and m.in_circle(nb, px, py, pid):
                    m.mark[nb] = stamp
                    cavity.push_back(nb)
                    stack.push_back(nb)

        b_e0.clear(); b_e1.clear(); b_nb.clear(); b_src.clear()
        for ii2 in range(cavity.size()):
            s = cavity[ii2]
            for k in range(3):
                nb = m.N[3 * s + k]
                if m.mark[nb] != stamp:
                    b_e0.push_back(m.V[3 * s + (k + 1) % 3])
                    b_e1.push_back(m.V[3 * s + (k + 2) % 3])
                    b_nb.push_back(nb)
                    b_src.push_back(s)

        new.clear()
        for j in range(<i64>b_e0.size()):
            e0 = b_e0[j]
            e1 = b_e1[j]
            nb = b_nb[j]
            t2 = m.alloc()
            m.set_tri(t2, e0, e1, pid)
            for k in range(3):
                if m.V[3 * t2 + k] == pid:
                    m.N[3 * t2 + k] = nb
            for k in range(3):
                if m.N[3 * nb + k] == b_src[j]:
                    m.N[3 * nb + k] = t2
            start_of[e0 if e0 >= 0 else n] = t2
            end_of[e1 if e1 >= 0 else n] = t2
            new.push_back(t2)
        for j in range(<i64>new.size()):
            t2 = new[j]
            for k in range(3):
                u = m.V[3 * t2 + (k + 1) % 3]
                v = m.V[3 * t2 + (k + 2) % 3]
                if v == pid:
                    m.N[3 * t2 + k] = start_of[u if u >= 0 else n]
                elif u == pid:
                    m.N[3 * t2 + k] = end_of[v if v >= 0 else n]
        for j in range(<i64>cavity.size()):
            s = cavity[j]
            m.alive[s] = 0
            m.free.push_back(s)
        last = new[0]
        for j in range(<i64>new.size()):
            if m.V[3 * new[j] + 2] != GHOST:
                last = new[j]
                break

    cdef i64 count = 0
    for t in range(<i64>m.alive.size()):
        if m.alive[t] and m.V[3 * t + 2] != GHOST:
            count += 1
    out = np.empty((count, 3), dtype=np.int64)
    cdef i64[:, ::1] ov = out
    j = 0
    for t in range(<i64>m.alive.size()):
        if m.alive[t] and m.V[3 * t + 2] != GHOST:
            ov[j, 0] = m.V[3 * t]
            ov[j, 1] = m.V[3 * t + 1]
            ov[j, 2] = m.V[3 * t + 2]
            j += 1
    return out


# --------------------------------------------------------------------------
# Queries on a finished triangulation

cdef struct Mesh2:
    const double* X
    const double* Y
    const i64* T
    const i64* Nb
    i64 n


cdef i64 walk(Mesh2* g, double qx, double qy, i64 t) except -9:
    cdef i64 step = 0, j, k, u, v, nxt
    cdef bint moved
    while True:
        moved = False
        for j in range(3):
            k = (step + j) % 3
            u = g.T[3 * t + (k + 1) % 3]
            v = g.T[3 * t + (k + 2) % 3]
            if orient(g.X[u], g.Y[u], g.X[v], g.Y[v], qx, qy) < 0:
                nxt = g.Nb[3 * t + k]
                if nxt < 0:
                    return -1
                t = nxt
                moved = True
                break
        step += 1
        if not moved:
            return t


cdef int zero_edges(Mesh2* g, i64 t, double qx, double qy, int* out) except -9:
    cdef int cnt = 0, k
    cdef i64 u, v
    for k in range(3):
        u = g.T[3 * t + (k + 1) % 3]
        v = g.T[3 * t + (k + 2) % 3]
        if orient(g.X[u], g.Y[u], g.X[v], g.Y[v], qx, qy) == 0:
            out[cnt] = k
            cnt += 1
    return cnt


cdef inline int slot_of(Mesh2* g, i64 t, i64 vert):
    if g.T[3 * t] == vert:
        return 0
    if g.T[3 * t + 1] == vert:
        return 1
    return 2


cdef i64 fan_min(Mesh2* g, i64 t, i64 vert):
    cdef i64 best = t, cur = t
    cdef int j
    while True:
        j = slot_of(g, cur, vert)
        cur = g.Nb[3 * cur + (j + 1) % 3]
        if cur < 0 or cur == t:
            break
        if cur < best:
            best = cur
    if cur < 0:
        cur = t
        while True:
            j = slot_of(g, cur, vert)
            cur = g.Nb[3 * cur + (j + 2) % 3]
            if cur < 0:
                break
            if cur < best:
                best = cur
    return best


cdef i64 tiebreak(Mesh2* g, i64 t, double qx, double qy) except -9:
    cdef int zs[3]
    cdef int cnt = zero_edges(g, t, qx, qy, zs)
    cdef i64 nb
    if cnt == 1:
        nb = g.Nb[3 * t + zs[0]]
        if nb < 0 or t < nb:
            return t
        return nb
    if cnt == 2:
        return fan_min(g, t, g.T[3 * t + 3 - zs[0] - zs[1]])
    return t


cdef inline void circumcenter(double ax, double ay, double bx, double by, double cx, double cy,
                              double* ux, double* uy):
    cdef double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    cdef double a2 = ax * ax + ay * ay
    cdef double b2 = bx * bx + by * by
    cdef double c2 = cx * cx + cy * cy
    ux[0] = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy[0] = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d


cdef class _SibsonScratch:
    cdef vector[i64] mark
    cdef i64 stamp
    cdef vector[i64] cavity
    cdef vector[i64] stack
    cdef vector[i64] nxt
    cdef vector[i64] edge_tri
    cdef vector[i64] ring
    cdef vector[double] ccx
    cdef vector[double] ccy
    cdef vector[double] px
    cdef vector[double] py
    cdef vector[i64] out_idx
    cdef vector[double] out_w

    def __cinit__(self, i64 ntri, i64 nsite):
        self.mark = vector[i64](ntri, 0)
        self.stamp = 0
        self.nxt = vector[i64](nsite, -1)
        self.edge_tri = vector[i64](nsite, -1)


cdef int sibson_at(Mesh2* g, _SibsonScratch sc, double qx, double qy, i64 t) except -9:
    """Fill sc.out_idx / sc.out_w with natural neighbour weights of q."""
    cdef int zs[3]
    cdef int cnt, k, j
    cdef i64 v, u, s, nb, a, b, c, first, i, m, vi, s2
    cdef double ex, ey, sp, area, x1, y1, x2, y2, total, ux, uy
    sc.out_idx.clear()
    sc.out_w.clear()
    for k in range(3):
        v = g.T[3 * t + k]
        if hypot(g.X[v] - qx, g.Y[v] - qy) < COINCIDENT_TOL:
            sc.out_idx.push_back(v)
            sc.out_w.push_back(1.0)
            return 0
    cnt = zero_edges(g, t, qx, qy, zs)
    for j in range(cnt):
        k = zs[j]
        if g.Nb[3 * t + k] < 0:
            u = g.T[3 * t + (k + 1) % 3]
            v = g.T[3 * t + (k + 2) % 3]
            ex = g.X[v] - g.X[u]
            ey = g.Y[v] - g.Y[u]
            sp = ((qx - g.X[u]) * ex + (qy - g.Y[u]) * ey) / (ex * ex + ey * ey)
            if sp < 0.0:
                sp = 0.0
            if sp > 1.0:
                sp = 1.0
            sc.out_idx.push_back(u)
            sc.out_w.push_back(1.0 - sp)
            sc.out_idx.push_back(v)
            sc.out_w.push_back(sp)
            return 0

    sc.stamp += 1
    sc.mark[t] = sc.stamp
    sc.cavity.clear()
    sc.stack.clear()
    sc.cavity.push_back(t)
    sc.stack.push_back(t)
    while sc.stack.size() > 0:
        s = sc.stack.back()
        sc.stack.pop_back()
        for k in range(3):
            nb = g.Nb[3 * s + k]
            if nb < 0 or sc.mark[nb] == sc.stamp:
                continue
            a = g.T[3 * nb]
            b = g.T[3 * nb + 1]
            c = g.T[3 * nb + 2]
            if incircle_sos(g.X[a], g.Y[a], g.X[b], g.Y[b], g.X[c], g.Y[c], qx, qy, a, b, c, g.n) > 0:
                sc.mark[nb] = sc.stamp
                sc.cavity.push_back(nb)
                sc.stack.push_back(nb)

    first = -1
    for i in range(<i64>sc.cavity.size()):
        s = sc.cavity[i]
        for k in range(3):
            nb = g.Nb[3 * s + k]
            if nb < 0 or sc.mark[nb] != sc.stamp:
                u = g.T[3 * s + (k + 1) % 3]
                sc.nxt[u] = g.T[3 * s + (k + 2) % 3]
                sc.edge_tri[u] = s
                if first < 0 or u < first:
                    first = u
    sc.ring.clear()
    sc.ring.push_back(first)
    v = sc.nxt[first]
    while v != first:
        sc.ring.push_back(v)
        v = sc.nxt[v]
    m = sc.ring.size()

    sc.ccx.resize(m)
    sc.ccy.resize(m)
    for i in range(m):
        a = sc.ring[i]
        b = sc.ring[(i + 1) % m]
        circumcenter(0.0, 0.0, g.X[a] - qx, g.Y[a] - qy, g.X[b] - qx, g.Y[b] - qy, &ux, &uy)
        sc.ccx[i] = ux
        sc.ccy[i] = uy

    total = 0.0
    for i in range(m):
        vi = sc.ring[i]
        sc.px.clear()
        sc.py.clear()
        sc.px.push_back(sc.ccx[i])
        sc.py.push_back(sc.ccy[i])
        s = sc.edge_tri[vi]
        while True:
            a = g.T[3 * s]
            b = g.T[3 * s + 1]
            c = g.T[3 * s + 2]
            circumcenter(g.X[a] - qx, g.Y[a] - qy, g.X[b] - qx, g.Y[b] - qy,
                         g.X[c] - qx, g.Y[c] - qy, &ux, &uy)
            sc.px.push_back(ux)
            sc.py.push_back(uy)
            j = slot_of(g, s, vi)
            s2 = g.Nb[3 * s + (j + 1) % 3]
            if s2 < 0 or sc.mark[s2] != sc.stamp:
                break
            s = s2
        sc.px.push_back(sc.ccx[(i + m - 1) % m])
        sc.py.push_back(sc.ccy[(i + m - 1) % m])
        area = 0.0
        for k in range(<int>sc.px.size()):
            x1 = sc.px[k]
            y1 = sc.py[k]
            x2 = sc.px[(k + 1) % sc.px.size()]
            y2 = sc.py[(k + 1) % sc.px.size()]
            area += x1 * y2 - x2 * y1
        sc.out_idx.push_back(vi)
        sc.out_w.push_back(0.5 * area)
        total += 0.5 * area
    for i in range(m):
        sc.out_w[i] = sc.out_w[i] / total
    return 0


cdef class _Planar:
    """Contiguous x / y copies so the C structs can point at 1-D buffers."""
    cdef public object xs, ys, tris, nbrs
    cdef Mesh2 g

    def __cinit__(self, xy, tris, nbrs):
        xy = np.asarray(xy, dtype=np.float64)
        self.xs = np.ascontiguousarray(xy[:, 0])
        self.ys = np.ascontiguousarray(xy[:, 1])
        self.tris = np.ascontiguousarray(tris, dtype=np.int64)
        self.nbrs = np.ascontiguousarray(nbrs, dtype=np.int64)
        cdef const double[::1] xv = self.xs
        cdef const double[::1] yv = self.ys
        cdef const i64[:, ::1] tv = self.tris
        cdef const i64[:, ::1] nv = self.nbrs
        self.g.X = &xv[0]
        self.g.Y = &yv[0]
        self.g.T = &tv[0, 0]
        self.g.Nb = &nv[0, 0]
        self.g.n = xy.shape[0]


def locate_many(xy, tris, nbrs, q):
    cdef _Planar P = _Planar(xy, tris, nbrs)
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef i64 nq = qv.shape[0], i, t, hint = 0
    out = np.empty(nq, dtype=np.int64)
    cdef i64[::1] ov = out
    for i in range(nq):
        t = walk(&P.g, qv[i, 0], qv[i, 1], hint)
        if t >= 0:
            hint = t
            t = tiebreak(&P.g, t, qv[i, 0], qv[i, 1])
        ov[i] = t
    return out


def sibson(xy, tris, nbrs, double qx, double qy, i64 hint=0):
    cdef _Planar P = _Planar(xy, tris, nbrs)
    cdef _SibsonScratch sc = _SibsonScratch(P.tris.shape[0], P.g.n)
    if hint < 0:
        hint = 0
    cdef i64 t = walk(&P.g, qx, qy, hint)
    if t < 0:
        raise ValueError("outside hull")
    sibson_at(&P.g, sc, qx, qy, t)
    idx = np.array([sc.out_idx[i] for i in range(sc.out_idx.size())], dtype=np.int64)
    w = np.array([sc.out_w[i] for i in range(sc.out_w.size())], dtype=np.float64)
    return idx, w


def natural_grid(xy, z, tris, nbrs, q):
    cdef _Planar P = _Planar(xy, tris, nbrs)
    cdef _SibsonScratch sc = _SibsonScratch(P.tris.shape[0], P.g.n)
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef i64 nq = qv.shape[0], i, t, hint = 0
    cdef size_t j
    cdef double acc, z0
    out = np.full(nq, np.nan)
    cdef double[::1] ov = out
    for i in range(nq):
        t = walk(&P.g, qv[i, 0], qv[i, 1], hint)
        if t < 0:
            continue
        hint = t
        sibson_at(&P.g, sc, qv[i, 0], qv[i, 1], t)
        # anchored at the first contributor so a constant field comes back exactly
        z0 = zv[sc.out_idx[0]]
        acc = 0.0
        for j in range(sc.out_idx.size()):
            acc += sc.out_w[j] * (zv[sc.out_idx[j]] - z0)
        ov[i] = z0 + acc
    return out


def tin_grid(xy, z, tris, nbrs, q):
    cdef _Planar P = _Planar(xy, tris, nbrs)
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef i64 nq = qv.shape[0], i, t, hint = 0, a, b, c, k, v
    cdef double qx, qy, ax, ay, bx, by, cx, cy, area, lb, lc
    cdef bint hit
    out = np.full(nq, np.nan)
    cdef double[::1] ov = out
    for i in range(nq):
        qx = qv[i, 0]
        qy = qv[i, 1]
        t = walk(&P.g, qx, qy, hint)
        if t < 0:
            continue
        hint = t
        t = tiebreak(&P.g, t, qx, qy)
        hit = False
        for k in range(3):
            v = P.g.T[3 * t + k]
            if hypot(P.g.X[v] - qx, P.g.Y[v] - qy) < COINCIDENT_TOL:
                ov[i] = zv[v]
                hit = True
                break
        if hit:
            continue
        a = P.g.T[3 * t]
        b = P.g.T[3 * t + 1]
        c = P.g.T[3 * t + 2]
        ax = P.g.X[a]; ay = P.g.Y[a]
        bx = P.g.X[b]; by = P.g.Y[b]
        cx = P.g.X[c]; cy = P.g.Y[c]
        area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        lb = ((cx - qx) * (ay - qy) - (cy - qy) * (ax - qx)) / area
        lc = ((ax - qx) * (by - qy) - (ay - qy) * (bx - qx)) / area
        ov[i] = zv[a] + lb * (zv[b] - zv[a]) + lc * (zv[c] - zv[a])
    return out


def nearest_grid(xy, z, q, bin_start, bin_items, double x0, double y0, double binsize,
                 i64 nbx, i64 nby):
    xy = np.asarray(xy, dtype=np.float64)
    cdef const double[::1] X = np.ascontiguousarray(xy[:, 0])
    cdef const double[::1] Y = np.ascontiguousarray(xy[:, 1])
    cdef const double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef const double[:, ::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef const i64[::1] starts = np.ascontiguousarray(bin_start, dtype=np.int64)
    cdef const i64[::1] items = np.ascontiguousarray(bin_items, dtype=np.int64)
    cdef i64 nq = qv.shape[0], i, bx, by, r, jx, jy, b, kk, p, best_i, step
    cdef double qx, qy, best_d, dx, dy, d
    out = np.empty(nq)
    cdef double[::1] ov = out
    for i in range(nq):
        qx = qv[i, 0]
        qy = qv[i, 1]
        bx = <i64>((qx - x0) / binsize)
        by = <i64>((qy - y0) / binsize)
        if qx < x0:
            bx = 0
        if qy < y0:
            by = 0
        bx = min(max(bx, 0), nbx - 1)
        by = min(max(by, 0), nby - 1)
        best_d = INFINITY
        best_i = -1
        r = 0
        while True:
            for jy in range(by - r, by + r + 1):
                if jy < 0 or jy >= nby:
                    continue
                step = 1 if (jy == by - r or jy == by + r) else 2 * r
                if step <= 0:
                    step = 1
                jx = bx - r
                while jx <= bx + r:
                    if 0 <= jx < nbx:
                        b = jy * nbx + jx
                        for kk in range(starts[b], starts[b + 1]):
                            p = items[kk]
                            dx = X[p] - qx
                            dy = Y[p] - qy
                            d = dx * dx + dy * dy
                            if d < best_d or (d == best_d and p < best_i):
                                best_d = d
                                best_i = p
                    jx += step
            if best_i >= 0 and best_d <= (r * binsize) * (r * binsize):
                break
            if r > nbx + nby:
                break
            r += 1
        ov[i] = zv[best_i]
    return out
