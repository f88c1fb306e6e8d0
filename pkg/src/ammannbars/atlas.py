"""Windows and pattern regions in internal space, and the r-atlases built on them.

A lattice point ``u`` is a vertex of the canonical tiling selected by the
internal point ``z`` iff ``z + ip(u)`` lies in the window ``W = ip([0,1]^n)``,
where ``ip`` is a linear map with kernel the slope.  Patterns therefore
correspond to intersections of translated windows, and the r-atlas is a
partition of the window into the cells where the r-map around a vertex
stays the same.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import product

from gmpy2 import mpq

from .algebra import FieldMatrix
from .geometry import (
    area,
    convex_hull,
    difference,
    intersect,
    locate,
    translate,
    to_float,
)
from .slope import Slope

__all__ = [
    "DegenerateWindow",
    "NonTermination",
    "Window",
    "Region",
    "RMap",
    "AtlasEntry",
    "internal_projection",
    "window",
    "region",
    "point_membership",
    "rmap_at",
    "close_rmap",
    "atlas",
    "cell_of",
]


class DegenerateWindow(ValueError):
    pass


class NonTermination(RuntimeError):
    pass


def internal_projection(E: Slope) -> FieldMatrix:
    """Rows spanning the orthogonal complement of the slope (exact kernel, unnormalized)."""
    K = E.generators.right_kernel()
    if K.nrows != 2:
        raise DegenerateWindow("only codimension-2 slopes have polygonal windows")
    return K


@dataclass
class Window:
    polygon: list
    internal_projection: FieldMatrix
    slope: Slope | None = None

    def __post_init__(self):
        self._cache: dict = {}

    @property
    def n(self) -> int:
        return self.internal_projection.ncols

    def image(self, u):
        """``ip(u)`` for an integer vector, cached."""
        u = tuple(u)
        v = self._cache.get(u)
        if v is None:
            v = self._cache[u] = tuple(self.internal_projection.apply(u))
        return v

    def translate_by(self, u):
        """The polygon ``W - ip(u)``."""
        x, y = self.image(u)
        return translate(self.polygon, (-x, -y))

    def area(self):
        return area(self.polygon)

    def float_bbox(self):
        fx = [p[0] for p in self.float_polygon()]
        fy = [p[1] for p in self.float_polygon()]
        return min(fx), max(fx), min(fy), max(fy)

    def float_polygon(self):
        if "fp" not in self._cache:
            self._cache["fp"] = to_float(self.polygon)
        return self._cache["fp"]

    def float_image(self, u):
        F = self._cache.get("F")
        if F is None:
            F = self._cache["F"] = [[float(x) for x in r] for r in self.internal_projection.rows]
        return (sum(a * x for a, x in zip(F[0], u)), sum(a * x for a, x in zip(F[1], u)))

    def contains_vertex(self, z, u) -> int:
        """Locate ``z + ip(u)`` in W (1 inside, 0 boundary, -1 outside) with a float prefilter."""
        fz = (float(z[0]), float(z[1]))
        fu = self.float_image(u)
        p = (fz[0] + fu[0], fz[1] + fu[1])
        fp = self.float_polygon()
        margin = self._margins()
        n = len(fp)
        inside = True
        for k in range(n):
            a, b = fp[k], fp[(k + 1) % n]
            s = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if s < -margin[k]:
                return -1
            if s <= margin[k]:
                inside = False
        if inside:
            return 1
        x, y = self.image(u)
        return locate(self.polygon, (z[0] + x, z[1] + y))

    def _margins(self):
        if "m" not in self._cache:
            fp = self.float_polygon()
            n = len(fp)
            self._cache["m"] = [1e-9 * (1 + math.hypot(fp[(k + 1) % n][0] - fp[k][0],
                                                        fp[(k + 1) % n][1] - fp[k][1]))
                                for k in range(n)]
        return self._cache["m"]


def window(E: Slope) -> Window:
    """Convex hull of the projected unit-cube vertices."""
    ip = internal_projection(E)
    pts = [tuple(ip.apply(eps)) for eps in product((0, 1), repeat=E.n)]
    hull = convex_hull(pts)
    if len(hull) < 3:
        raise DegenerateWindow("window is a segment or a point")
    return Window(hull, ip, E)


@dataclass
class Region:
    """Exact region of a pattern: ``polygon`` is the convex intersection of the
    translates of its present vertices; ``pieces`` additionally removes the
    translates of vertices known to be absent (equal to ``[polygon]`` when none
    cuts it)."""

    polygon: list
    pattern: frozenset
    pieces: list = dc_field(default_factory=list)

    def is_empty(self) -> bool:
        return not self.polygon

    def area(self):
        if self.pieces:
            return sum((area(p) for p in self.pieces[1:]), area(self.pieces[0]))
        return area(self.polygon) if self.polygon else 0


def region(W: Window, ip=None, P=()) -> Region:
    """``intersection over x in P of W - ip(x)``; ``ip`` defaults to the window's own."""
    if ip is not None and ip is not W.internal_projection:
        W = Window(W.polygon, ip, W.slope)
    pattern = frozenset(tuple(x) for x in P)
    if not pattern:
        raise ValueError("region of an empty pattern")
    first, *rest = sorted(pattern)
    poly = W.translate_by(first)
    for x in rest:
        poly = intersect(poly, W.translate_by(x))
        if not poly:
            break
    return Region(poly, pattern, [poly] if poly else [])


def point_membership(poly, z) -> str:
    """``'inside'``, ``'boundary'`` or ``'outside'`` (exact)."""
    poly = getattr(poly, "polygon", poly)
    return {1: "inside", 0: "boundary", -1: "outside"}[locate(poly, z)]


# -- r-maps ---------------------------------------------------------------------------

@dataclass
class RMap:
    """Lattice points around the origin vertex selected by one internal point.

    ``cells`` holds the present vertices found by the search, ``absent`` the
    tested points that are not vertices, and ``added`` the vertices supplied
    by closure.
    """

    cells: frozenset
    absent: frozenset
    radius: int
    metric: str = "euclid"
    added: frozenset = frozenset()
    closed: bool = False

    @property
    def vertices(self) -> frozenset:
        return self.cells | self.added

    def tiles(self):
        """Faces ``(i, j, base)`` with all four corners among the vertices."""
        V = self.vertices
        out = []
        for v in V:
            n = len(v)
            for i in range(n):
                vi = _bump(v, i)
                if vi not in V:
                    continue
                for j in range(i + 1, n):
                    if _bump(v, j) in V and _bump(vi, j) in V:
                        out.append(((i, j), v))
        return sorted(out)

    def key(self):
        return (self.cells, self.absent)


def _bump(v, i, by=1):
    v = list(v)
    v[i] += by
    return tuple(v)


def _ball(n: int, r: int):
    rng = range(-r, r + 1)
    return [u for u in product(rng, repeat=n) if sum(x * x for x in u) <= r * r]


def rmap_at(W: Window, z, r: int, metric: str = "euclid", *, candidates=None) -> RMap:
    """The r-map selected by ``z`` (euclidean ball or graph distance in the tiling)."""
    n = W.n
    origin = (0,) * n
    if W.contains_vertex(z, origin) <= 0:
        raise ValueError("z does not select the origin as a generic vertex")
    present, absent = {origin}, set()
    if metric == "euclid":
        cands = candidates if candidates is not None else _ball(n, r)
        for u in cands:
            if u == origin:
                continue
            s = W.contains_vertex(z, u)
            if s == 0:
                raise ValueError("z lies on a translate boundary")
            (present if s > 0 else absent).add(u)
    elif metric == "graph":
        dist = {origin: 0}
        todo = deque([origin])
        while todo:
            v = todo.popleft()
            if dist[v] == r:
                continue
            for i in range(n):
                for sgn in (1, -1):
                    w = _bump(v, i, sgn)
                    if w in dist or w in absent:
                        continue
                    s = W.contains_vertex(z, w)
                    if s == 0:
                        raise ValueError("z lies on a translate boundary")
                    if s > 0:
                        dist[w] = dist[v] + 1
                        present.add(w)
                        todo.append(w)
                    else:
                        absent.add(w)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    return RMap(frozenset(present), frozenset(absent), r, metric)


def _known_star(M: RMap):
    """Vertices whose every neighbour has been tested."""
    V = M.cells
    tested = M.cells | M.absent
    out = []
    for v in V:
        n = len(v)
        if all(_bump(v, i, s) in tested for i in range(n) for s in (1, -1)):
            out.append(v)
    return out


def close_rmap(M: RMap, A=None, *, slope: Slope | None = None) -> RMap:
    """Add the tiles forced around vertices whose edges are all known.

    Around such a vertex, two angularly consecutive edges always bound a
    tile (a notch that admits a single parallelogram); the missing fourth
    corner is added.  ``A`` is any valid drawing matrix (only edge angles
    are used).  Idempotent.
    """
    if A is None:
        from .projection import orthogonal_projection

        A = orthogonal_projection(slope).matrix
    A = getattr(A, "matrix", A)
    n = A.ncols
    fcols = [(float(A[0, i]), float(A[1, i])) for i in range(n)]
    V = set(M.vertices)
    added = set(M.added)
    for v in _known_star(M):
        edges = []
        for i in range(n):
            for s in (1, -1):
                if _bump(v, i, s) in V:
                    edges.append((math.atan2(s * fcols[i][1], s * fcols[i][0]), i, s))
        edges.sort()
        for k in range(len(edges)):
            a0, i, si = edges[k]
            a1, j, sj = edges[(k + 1) % len(edges)]
            gap = (a1 - a0) % (2 * math.pi)
            if len(edges) < 2 or gap >= math.pi or i == j:
                continue
            w = _bump(_bump(v, i, si), j, sj)
            if w not in V:
                V.add(w)
                added.add(w)
    return RMap(M.cells, M.absent, M.radius, M.metric, frozenset(added), True)


def cell_of(W: Window, present, absent) -> list:
    """Exact cell: intersection of present translates minus absent translates."""
    poly = list(W.polygon)
    for u in sorted(present):
        poly = intersect(poly, W.translate_by(u))
        if not poly:
            return []
    pieces = [poly]
    for u in sorted(absent):
        T = W.translate_by(u)
        fT = _fbox(T)
        nxt = []
        for piece in pieces:
            if _disjoint(_fbox(piece), fT):
                nxt.append(piece)
            else:
                nxt.extend(difference(piece, T))
        pieces = nxt
        if not pieces:
            break
    return pieces


def _fbox(poly):
    fx = [float(p[0]) for p in poly]
    fy = [float(p[1]) for p in poly]
    return min(fx), max(fx), min(fy), max(fy)


def _disjoint(a, b, eps=1e-9):
    return a[1] < b[0] - eps or b[1] < a[0] - eps or a[3] < b[2] - eps or b[3] < a[2] - eps


@dataclass
class AtlasEntry:
    map: RMap
    region: Region
    sample: tuple


def _interior_point(poly, rng: random.Random):
    """Random strictly positive rational convex combination of the vertices."""
    weights = [mpq(rng.randrange(1, 1000)) for _ in poly]
    tot = sum(weights)
    x = sum((p[0] * w for p, w in zip(poly, weights)), poly[0][0] * 0)
    y = sum((p[1] * w for p, w in zip(poly, weights)), poly[0][1] * 0)
    return (x / tot, y / tot)


def atlas(E: Slope, r: int, *, metric: str = "euclid", seed: int = 0, close: bool = True,
          A=None, max_iter: int = 100000) -> list[AtlasEntry]:
    """All r-maps of the canonical tilings of slope E with their regions.

    The regions are pairwise interior-disjoint and their areas sum to the
    window area exactly.
    """
    W = window(E)
    rng = random.Random(f"atlas:{seed}")
    n = E.n
    cands = None
    if metric == "euclid":
        # keep ball points whose translate can meet W at all
        wb = W.float_bbox()
        span = (wb[1] - wb[0], wb[3] - wb[2])
        cands = []
        for u in _ball(n, r):
            fx, fy = W.float_image(u)
            if abs(fx) <= span[0] + 1e-9 and abs(fy) <= span[1] + 1e-9:
                cands.append(u)
    if close and A is None:
        from .projection import orthogonal_projection

        A = orthogonal_projection(E).matrix
    uncovered = [list(W.polygon)]
    total = W.area()
    covered = total * 0
    out = []
    for _ in range(max_iter):
        if not uncovered:
            break
        uncovered.sort(key=lambda p: -float(area(p)))
        piece = uncovered[0] if rng.random() < 0.5 else uncovered[rng.randrange(len(uncovered))]
        z = _interior_point(piece, rng)
        try:
            M = rmap_at(W, z, r, metric, candidates=cands)
        except ValueError:
            continue
        if close:
            M = close_rmap(M, A)
        pieces = cell_of(W, M.cells, M.absent)
        hull = region(W, None, M.vertices)
        for w in M.added:
            # closure must only add forced vertices: the cell lies in W - ip(w)
            T = W.translate_by(w)
            if any(area(intersect(p, T)) != area(p) for p in pieces):
                raise AssertionError(f"closure added an unforced vertex {w}")
        reg = Region(hull.polygon, M.vertices, pieces)
        new_cov = reg.area()
        if new_cov == 0:
            raise NonTermination("sampled point produced an empty cell")
        covered = covered + new_cov
        out.append(AtlasEntry(M, reg, z))
        nxt = []
        for u in uncovered:
            rest = [u]
            for p in pieces:
                fp = _fbox(p)
                tmp = []
                for q in rest:
                    if _disjoint(_fbox(q), fp):
                        tmp.append(q)
                    else:
                        tmp.extend(difference(q, p))
                rest = tmp
            nxt.extend(rest)
        uncovered = nxt
    else:
        raise NonTermination("atlas iteration cap reached")
    if covered != total:
        raise NonTermination("regions do not add up to the window area")
    return out
