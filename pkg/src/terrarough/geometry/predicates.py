"""Orientation and in-circle predicates.

The float evaluations are guarded by Shewchuk's static error bounds; when a
result falls inside the bound the sign is recomputed exactly with rational
arithmetic. Every IEEE double converts to a ``Fraction`` without loss, so the
exact path is genuinely exact.

In-circle ties (four exactly co-circular sites) are resolved by symbolic
perturbation: each site's lifted coordinate ``x**2 + y**2`` is raised by an
infinitesimal that is larger for lower site indices. The perturbed sign is
that of the first non-vanishing cofactor, taken in ascending index order.
The result is a unique triangulation regardless of insertion order.
"""

from __future__ import annotations

from fractions import Fraction

_EPS = 2.0 ** -53
CCW_ERRBOUND_A = (3.0 + 16.0 * _EPS) * _EPS
ICC_ERRBOUND_A = (10.0 + 96.0 * _EPS) * _EPS


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = map(Fraction, (ax, ay, bx, by, cx, cy, dx, dy))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    return _sign(det)


def orient2d(ax, ay, bx, by, cx, cy) -> int:
    """+1 if a, b, c turn counter-clockwise, -1 if clockwise, 0 if collinear."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    errbound = CCW_ERRBOUND_A * (abs(detleft) + abs(detright))
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def incircle(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """+1 if d lies inside the circle through ccw a, b, c; -1 outside; 0 on it."""
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    cdxady = cdx * ady
    adxcdy = adx * cdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady)
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    errbound = ICC_ERRBOUND_A * permanent
    if det > errbound:
        return 1
    if -det > errbound:
        return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def incircle_tiebreak(pts, ids) -> int:
    """Perturbed sign for an exactly co-circular quadruple.

    ``pts`` holds the four (x, y) pairs in (a, b, c, d) order and ``ids`` their
    site indices. The derivative of the lifted 4x4 determinant with respect
    to the lift of point k is ``(-1)**k * orient(other three, in order)``.
    """
    for k in sorted(range(4), key=lambda i: ids[i]):
        rest = [pts[i] for i in range(4) if i != k]
        o = orient2d_exact(rest[0][0], rest[0][1], rest[1][0], rest[1][1], rest[2][0], rest[2][1])
        if o != 0:
            return o if k % 2 == 0 else -o
    return 0


def incircle_sos(ax, ay, bx, by, cx, cy, dx, dy, ia, ib, ic, id_) -> int:
    s = incircle(ax, ay, bx, by, cx, cy, dx, dy)
    if s != 0:
        return s
    return incircle_tiebreak(((ax, ay), (bx, by), (cx, cy), (dx, dy)), (ia, ib, ic, id_))
