"""Exact planar convex polygons over a real number field.

Points are pairs of field elements and polygons are counter-clockwise
vertex lists without repeated or collinear vertices.  Every predicate is
decided exactly; floats are used only as a filter before the exact test.
"""

from __future__ import annotations

from .algebra import FieldElement

__all__ = [
    "cross",
    "sub",
    "add",
    "scale",
    "dot",
    "orient",
    "convex_hull",
    "area2",
    "area",
    "clip",
    "intersect",
    "difference",
    "translate",
    "locate",
    "centroid",
    "same_polygon",
    "interiors_overlap",
    "edge_halfplanes",
    "to_float",
]


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def scale(p, c):
    return (p[0] * c, p[1] * c)


def dot(p, q):
    return p[0] * q[0] + p[1] * q[1]


def cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _sign(x) -> int:
    if isinstance(x, FieldElement):
        return x.sign()
    return (x > 0) - (x < 0)


def orient(o, a, b) -> int:
    """+1 if o, a, b turn left, -1 if right, 0 if collinear."""
    return _sign(cross(sub(a, o), sub(b, o)))


def to_float(poly):
    return [(float(x), float(y)) for x, y in poly]


def convex_hull(points) -> list:
    """Counter-clockwise hull (monotone chain), collinear points dropped."""
    pts = sorted(set(points), key=lambda p: (float(p[0]), float(p[1])))
    # the float key is only a presort; fix ties exactly
    pts = _exact_sort(pts)
    if len(pts) <= 2:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def _exact_sort(pts):
    from functools import cmp_to_key

    def cmp(p, q):
        s = _sign(p[0] - q[0])
        return s if s else _sign(p[1] - q[1])

    return sorted(pts, key=cmp_to_key(cmp))


def area2(poly):
    """Twice the signed area."""
    n = len(poly)
    if n < 3:
        return 0
    acc = cross(poly[-1], poly[0])
    for k in range(n - 1):
        acc = acc + cross(poly[k], poly[k + 1])
    return acc


def area(poly):
    return area2(poly) / 2


def edge_halfplanes(poly):
    """Half-planes ``(normal, offset)`` with ``normal . y <= offset`` describing ``poly``."""
    out = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        d = sub(q, p)
        normal = (d[1], -d[0])  # outward for a ccw polygon
        out.append((normal, dot(normal, p)))
    return out


def clip(poly, normal, offset, keep: int = -1):
    """Part of ``poly`` with ``normal . y <= offset`` (keep=-1) or ``>=`` (keep=+1)."""
    if not poly:
        return []
    vals = [dot(normal, p) - offset for p in poly]
    signs = [_sign(v) * keep for v in vals]  # >= 0 means kept
    if all(s >= 0 for s in signs):
        return list(poly)
    if all(s <= 0 for s in signs):
        return []
    out = []
    n = len(poly)
    for k in range(n):
        j = (k + 1) % n
        p, sp, vp = poly[k], signs[k], vals[k]
        q, sq, vq = poly[j], signs[j], vals[j]
        if sp >= 0:
            out.append(p)
        if sp * sq < 0:
            t = vp / (vp - vq)
            out.append(add(p, scale(sub(q, p), t)))
    return _cleanup(out)


def _cleanup(poly):
    """Remove duplicate and collinear vertices; return [] when degenerate."""
    pts = []
    for p in poly:
        if not pts or p != pts[-1]:
            pts.append(p)
    while len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        for k in range(len(pts)):
            if orient(pts[k - 1], pts[k], pts[(k + 1) % len(pts)]) == 0:
                pts.pop(k)
                changed = True
                break
    return pts if len(pts) >= 3 else []


def intersect(P, Q):
    """Intersection of two convex polygons."""
    if len(P) < 3 or len(Q) < 3:
        return []
    out = list(P)
    for normal, offset in edge_halfplanes(Q):
        out = clip(out, normal, offset)
        if not out:
            return []
    return out


def difference(P, Q) -> list:
    """``P`` minus the interior of convex ``Q`` as a list of convex pieces."""
    pieces = []
    rest = list(P)
    for normal, offset in edge_halfplanes(Q):
        outside = clip(rest, normal, offset, keep=+1)
        if outside:
            pieces.append(outside)
        rest = clip(rest, normal, offset)
        if not rest:
            break
    return pieces


def translate(poly, v):
    return [add(p, v) for p in poly]


def locate(poly, z) -> int:
    """1 if ``z`` is interior, 0 on the boundary, -1 outside."""
    if len(poly) < 3:
        return -1
    worst = 1
    n = len(poly)
    for k in range(n):
        s = orient(poly[k], poly[(k + 1) % n], z)
        if s < 0:
            return -1
        worst = min(worst, s)
    return worst


def centroid(poly):
    """Vertex average: an interior point of a nondegenerate convex polygon."""
    n = len(poly)
    sx = poly[0][0]
    sy = poly[0][1]
    for p in poly[1:]:
        sx = sx + p[0]
        sy = sy + p[1]
    return (sx / n, sy / n)


def same_polygon(P, Q) -> bool:
    """Equality up to a cyclic shift of the vertex list."""
    if len(P) != len(Q):
        return False
    if not P:
        return True
    try:
        k = Q.index(P[0])
    except ValueError:
        return False
    return all(P[t] == Q[(t + k) % len(Q)] for t in range(len(P)))


def _axes(P):
    n = len(P)
    for k in range(n):
        d = sub(P[(k + 1) % n], P[k])
        yield (d[1], -d[0])


def interiors_overlap(P, Q, *, fP=None, fQ=None) -> bool:
    """Separating-axis test: do two convex polygons share interior points?

    Float projections decide whenever the gap or overlap along every axis
    is clear of 1e-9; the remaining cases are settled exactly.
    """
    fP = fP or to_float(P)
    fQ = fQ or to_float(Q)
    unsure = []
    for poly, fpoly in ((P, fP), (Q, fQ)):
        n = len(poly)
        for k in range(n):
            a, b = fpoly[k], fpoly[(k + 1) % n]
            ax, ay = b[1] - a[1], a[0] - b[0]
            pa = [ax * x + ay * y for x, y in fP]
            qa = [ax * x + ay * y for x, y in fQ]
            gap = max(min(qa) - max(pa), min(pa) - max(qa))
            scale_ = 1.0 + max(abs(v) for v in pa + qa)
            if gap > 1e-9 * scale_:
                return False
            if gap > -1e-9 * scale_:
                unsure.append((poly, k))
    for poly, k in unsure:
        axis = next(a for j, a in enumerate(_axes(poly)) if j == k)
        pa = [dot(axis, p) for p in P]
        qa = [dot(axis, q) for q in Q]
        if max(pa, key=_Key) <= min(qa, key=_Key) or max(qa, key=_Key) <= min(pa, key=_Key):
            return False
    return True


class _Key:
    """Exact ordering key for field elements."""

    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return _sign(self.v - other.v) < 0
