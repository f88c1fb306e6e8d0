"""Patch-scale checks: line continuity, shadow periods, planarity, Penrose identities."""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from gmpy2 import mpq

from .algebra import FieldMatrix
from .atlas import window
from .geometry import area, intersect
from .ammann import DecoratedTile, LineFamily, Tileset
from .multigrid import Patch, Tile
from .slope import Slope, floor_ceil, lifted_subperiods, penrose, shadow_map

__all__ = [
    "ContinuityReport",
    "ShadowReport",
    "ThicknessEstimate",
    "WalkReport",
    "check_line_continuity",
    "check_shadow_period",
    "check_planarity",
    "flip_hexagon",
    "configuration_walk",
    "penrose_identity_suite",
]


# -- line continuity --------------------------------------------------------------------------

@dataclass
class ContinuityReport:
    ok: bool
    edges_checked: int = 0
    witness: tuple | None = None


def _edge_points(tile: Tile, deco: DecoratedTile):
    """Boundary points of the decoration, keyed by global edge ``(start, axis)``.

    Corner touches are left out: continuity there is through a vertex, not an edge.
    """
    out: dict = {}
    for direction, corner, axis, t in deco.edge_points():
        if t == 0 or t == 1:
            continue
        i, j = tile.type
        start = list(tile.pos)
        start[i] += corner[0]
        start[j] += corner[1]
        out.setdefault((tuple(start), axis), set()).add((direction, t))
    return out


def check_line_continuity(P: Patch, decorations: dict) -> ContinuityReport:
    """Every segment end on an edge shared by two decorated tiles must match.

    ``decorations`` maps tiles of ``P`` to their :class:`DecoratedTile`;
    undecorated tiles are ignored.
    """
    per_edge: dict = {}
    for t, d in decorations.items():
        for edge, pts in _edge_points(t, d).items():
            per_edge.setdefault(edge, []).append((t, pts))
    # edges of each decorated tile, to detect shared edges carrying no point
    owners: dict = {}
    for t in decorations:
        i, j = t.type
        b = t.pos
        for start, axis in ((b, i), (b, j), (_bump(b, j), i), (_bump(b, i), j)):
            owners.setdefault((start, axis), []).append(t)
    checked = 0
    for edge, tiles in owners.items():
        if len(tiles) != 2:
            continue
        checked += 1
        a, b = tiles
        pa = _edge_points(a, decorations[a]).get(edge, set())
        pb = _edge_points(b, decorations[b]).get(edge, set())
        if pa != pb:
            return ContinuityReport(False, checked, (edge, a, b))
    return ContinuityReport(True, checked)


def _bump(v, i, by=1):
    v = list(v)
    v[i] += by
    return tuple(v)


# -- shadows ----------------------------------------------------------------------------------

@dataclass
class ShadowReport:
    direction: int
    candidate_period: tuple
    verified_translates: int
    margin: int
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verified_translates > 0 and not self.failures


def check_shadow_period(P: Patch, i: int, q, margin: int = 2, *, decorations: dict | None = None) -> ShadowReport:
    """Translate the i-shadow of ``P`` by the integer vector ``q`` and compare.

    A tile of type (a, b) belongs to the dual patch exactly when its a and b
    coordinates lie in [-k, k]; translates whose coordinates stay ``margin``
    inside that range must therefore exist.  With ``decorations`` the
    direction-i decoration of both tiles must agree as well.
    """
    k = P.k
    n = P.n
    keep = [m for m in range(n) if m != i]
    q = tuple(int(x) for x in q)
    index: dict = {}
    for t in P.tiles:
        if i in t.type:
            continue
        index[(t.type, shadow_map(t.pos, i))] = t
    verified = 0
    failures = []
    lim = k - margin
    for (tt, w), t in index.items():
        target = tuple(a + b for a, b in zip(w, q))
        coords = dict(zip(keep, target))
        src = dict(zip(keep, w))
        if not all(-lim <= coords[m] <= lim and -lim <= src[m] <= lim for m in tt):
            continue
        other = index.get((tt, target))
        if other is None:
            failures.append((t, "missing translate"))
            continue
        if decorations is not None:
            da, db = decorations.get(t), decorations.get(other)
            if da is None or db is None:
                continue
            if da.restricted(i) != db.restricted(i):
                failures.append((t, "decoration differs"))
                continue
        verified += 1
    return ShadowReport(i, q, verified, margin, failures[:10])


# -- planarity --------------------------------------------------------------------------------

@dataclass
class ThicknessEstimate:
    """Tube width of a lifted vertex set.

    ``min_offset`` / ``max_offset`` hold, per window facet normal, the exact
    extreme values of the internal images.  ``thickness`` is 1 exactly when
    the set is certified to fit in a unit tube, otherwise ``max(1, lp)``
    with ``lp`` the float optimum (a finite patch can fit in a thinner tube,
    but a tiling cannot).
    """

    min_offset: list
    max_offset: list
    thickness: float
    lp_thickness: float
    strongly_planar: bool | None  # exact: True certified, False refuted, None undecided
    certificate: tuple | None = None
    refutation: tuple | None = None


def _vertex_set(P):
    if isinstance(P, Patch):
        return P.vertices()
    return set(map(tuple, P))


def _zonotope_normals(ip: FieldMatrix):
    """Facet normals (both signs) of the zonotope ip([0,1]^n) with support values."""
    m, n = ip.nrows, ip.ncols
    cols = [ip.col(i) for i in range(n)]
    zero = ip.field.zero()
    normals = []
    seen = set()
    for S in combinations(range(n), m - 1):
        if m == 1:
            nrm = (ip.field.one(),)
        else:
            sub = FieldMatrix([[cols[i][r] for i in S] for r in range(m)], ip.field)
            # cofactor expansion: nrm . y = det[sub | y]
            nrm = tuple((-1) ** (r + m - 1) * sub.submatrix([q for q in range(m) if q != r], range(m - 1)).det()
                        for r in range(m))
        if all(x.is_zero() for x in nrm):
            continue
        key = tuple(round(float(x), 9) for x in nrm)
        if key in seen:
            continue
        seen.add(key)
        for sgn in (1, -1):
            v = tuple(sgn * x for x in nrm)
            dots = [sum((a * b for a, b in zip(v, c)), zero) for c in cols]
            h = sum((x for x in dots if x.sign() > 0), zero)
            normals.append((v, h))
    return normals


def check_planarity(P, E: Slope) -> ThicknessEstimate:
    """Thickness of a lifted vertex set: the least t with all vertices in E + c + [0, t]^n.

    Works in internal space, where the tube becomes a translate of the
    zonotope t * ip([0,1]^n).  ``thickness`` comes from a float linear
    program; strong planarity (t = 1) is decided exactly when possible:
    certified by an explicit translate (the multigrid shift for dual
    patches, else the rounded LP optimum), refuted when the vertex set is
    wider than the window along some facet normal.
    """
    from scipy.optimize import linprog

    V = sorted(_vertex_set(P))
    ip = E.generators.right_kernel()
    normals = _zonotope_normals(ip)
    F = ip.to_floats()
    fimg = [tuple(sum(a * x for a, x in zip(row, v)) for row in F) for v in V]
    tops = []
    for nrm, _ in normals:
        fn = [float(x) for x in nrm]
        vals = [sum(a * b for a, b in zip(fn, y)) for y in fimg]
        top = max(vals)
        tol = 1e-9 * (1 + abs(top))
        near = [V[t] for t, val in enumerate(vals) if val >= top - tol]
        tops.append(max((sum((a * b for a, b in zip(nrm, ip.apply(v))), ip.field.zero()) for v in near),
                        key=_ExactKey))
    # float LP: minimise t subject to n.c + t*h >= max_v n.ip(v)
    A_ub = [[-float(x) for x in nrm] + [-float(h)] for nrm, h in normals]
    b_ub = [-float(t) for t in tops]
    m = ip.nrows
    res = linprog([0] * m + [1], A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * m + [(0, None)])
    lp = float(res.x[-1]) if res.success else math.inf
    mins = [-tops[idx + 1] for idx in range(0, len(normals), 2)]
    maxs = [tops[idx] for idx in range(0, len(normals), 2)]

    def report(verdict, **kw):
        t = 1.0 if verdict else max(1.0, lp)
        return ThicknessEstimate(mins, maxs, t, lp, verdict, **kw)

    def certifies(c):
        return all((sum((a * b for a, b in zip(nrm, c)), ip.field.zero()) + h - top).sign() >= 0
                   for (nrm, h), top in zip(normals, tops))

    candidates = []
    grid = getattr(P, "grid", None)
    if grid is not None and grid.grid_matrix == E.generators:
        candidates.append(ip.apply(grid.shift))
    if res.success:
        candidates.append(tuple(ip.field(mpq(Fraction(x).limit_denominator(10 ** 9))) for x in res.x[:-1]))
    for c in candidates:
        if certifies(c):
            return report(True, certificate=tuple(c))
    # width along opposite normals larger than the window's width
    for idx in range(0, len(normals), 2):
        (n1, h1), (n2, h2) = normals[idx], normals[idx + 1]
        if (tops[idx] + tops[idx + 1] - h1 - h2).sign() > 0:
            return report(False, refutation=(n1, tops[idx], -tops[idx + 1], h1 + h2))
    return report(None)


class _ExactKey:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return (self.x - other.x).sign() < 0


def flip_hexagon(P: Patch, *, interior: int = 2):
    """Apply one elementary flip at a degree-3 vertex; returns (vertex set, old, new vertex).

    The flippable vertex nearest the centre of the patch (in lifted
    coordinates) is used.
    """
    V = P.vertices()
    k = P.k if P.k is not None else 10 ** 9
    n = P.n
    tiles = set((t.type, t.pos) for t in P.tiles)
    for v in sorted(V, key=lambda u: (sum(map(abs, u)), u)):
        if not all(-k + interior <= x <= k - interior for x in v):
            continue
        nbrs = [(i, s) for i in range(n) for s in (1, -1) if _bump(v, i, s) in V]
        if len(nbrs) != 3 or len({i for i, _ in nbrs}) != 3:
            continue
        ok = True
        for (i, si), (j, sj) in combinations(nbrs, 2):
            a, b = (i, si), (j, sj)
            if a[0] > b[0]:
                a, b = b, a
            base = list(v)
            if a[1] < 0:
                base[a[0]] -= 1
            if b[1] < 0:
                base[b[0]] -= 1
            if ((a[0], b[0]), tuple(base)) not in tiles:
                ok = False
        if not ok:
            continue
        w = list(v)
        for i, s in nbrs:
            w[i] += s
        w = tuple(w)
        if w in V:
            continue
        return (V - {v}) | {w}, v, w
    raise ValueError("no flippable hexagon in the patch")


# -- configuration walk -----------------------------------------------------------------------

@dataclass
class WalkReport:
    direction: int
    vectors: set
    paths: int
    expected: tuple
    dead_ends: int = 0
    truncated: int = 0

    @property
    def ok(self) -> bool:
        return self.paths > 0 and self.truncated == 0 and self.vectors <= {self.expected}


def _tile_point(t_type, base, lam, mu):
    """Boundary point as (integer corner, axis, t) in global lifted coordinates."""
    i, j = t_type
    c = list(base)
    if lam == 0 or lam == 1:
        c[i] += 0 if lam == 0 else 1
        if mu == 0 or mu == 1:
            c[j] += 0 if mu == 0 else 1
            return (tuple(c), None, 0)
        return (tuple(c), j, mu)
    c[j] += 0 if mu == 0 else 1
    return (tuple(c), i, lam)


def configuration_walk(tileset: Tileset, family: LineFamily, i: int, *, max_depth: int = 60) -> WalkReport:
    """Follow direction-i lines across tiles of the tileset from vertex to vertex.

    Every tile placement allowed by matching all segment ends on the shared
    edge is explored.  Each path starts at a tile corner where a direction-i
    segment enters the tile and stops at the next vertex on the line; the
    i-shadow of the displacement (oriented along the projected subperiod)
    is recorded.  A branch is dropped as soon as the lifted corners met so
    far have an empty region in the window, i.e. can never occur together.
    """
    E = tileset.slope
    W = window(E)

    def narrow(poly, tile_type, base):
        for c in Tile(tile_type, base).corners():
            poly = intersect(poly, W.translate_by(c))
            if not poly or area(poly) == 0:
                return None
        return poly

    n = family.n
    sp = {s.dropped[0]: s for s in lifted_subperiods(E) if len(s.dropped) == 1}[i]
    expected = tuple(sp.shadow)
    A = family.A
    Pi = family.directions[i]
    cols = [A.col(m) for m in range(n)]

    def cross(p, q):
        return p[0] * q[1] - p[1] * q[0]

    def edge_signature(deco, t_type, base, corner, axis):
        pts = set()
        for seg in deco.segments:
            for lam, mu in (seg.start, seg.end):
                c, ax, t = _tile_point(t_type, base, lam, mu)
                if ax == axis and c == corner and t != 0:
                    pts.add((seg.direction, t))
        return pts

    by_type: dict = {}
    for d in tileset.tiles:
        by_type.setdefault(d.type, []).append(d)

    vectors, paths, dead, trunc = set(), 0, 0, 0
    starts = []
    for d in tileset.tiles:
        for seg in d.segments:
            if seg.direction != i:
                continue
            for a_, b_ in ((seg.start, seg.end), (seg.end, seg.start)):
                c, ax, _ = _tile_point(d.type, (0,) * n, *a_)
                if ax is None:
                    starts.append((d, seg, a_, b_, c))
    for d, seg, a_, b_, v0 in starts:
        stack = [(d, (0,) * n, b_, 0, narrow(W.polygon, d.type, (0,) * n))]
        # orientation of travel relative to the projected subperiod
        p0 = A.apply(v0)
        while stack:
            deco, base, exit_pt, depth, reg = stack.pop()
            if reg is None:
                continue
            c, ax, t = _tile_point(deco.type, base, *exit_pt)
            if ax is None:
                w = c
                disp = tuple(x - y for x, y in zip(w, v0))
                moved = A.apply(disp)
                sgn = (moved[0] * Pi[0] + moved[1] * Pi[1]).sign()
                sh = tuple(sgn * x for x in shadow_map(disp, i))
                vectors.add(sh)
                paths += 1
                continue
            if depth >= max_depth:
                trunc += 1
                continue
            # side of the current tile relative to the edge
            ti, tj = deco.type
            other = tj if ax == ti else ti
            inward = 1 if c[other] == base[other] else -1
            side = cross(cols[ax], tuple(inward * x for x in cols[other])).sign()
            here = edge_signature(deco, deco.type, base, c, ax)
            found = False
            for cdir in range(n):
                if cdir == ax:
                    continue
                for sgm in (1, -1):
                    if cdir == other and sgm == inward:
                        continue
                    if cross(cols[ax], tuple(sgm * x for x in cols[cdir])).sign() != -side:
                        continue
                    ntype = tuple(sorted((ax, cdir)))
                    nbase = list(c)
                    if sgm < 0:
                        nbase[cdir] -= 1
                    nbase = tuple(nbase)
                    for nd in by_type.get(ntype, ()):
                        if edge_signature(nd, ntype, nbase, c, ax) != here:
                            continue
                        for s2 in nd.segments:
                            if s2.direction != i:
                                continue
                            for a2, b2 in ((s2.start, s2.end), (s2.end, s2.start)):
                                if _tile_point(ntype, nbase, *a2) == (c, ax, t):
                                    stack.append((nd, nbase, b2, depth + 1, narrow(reg, ntype, nbase)))
                                    found = True
            if not found:
                dead += 1
    return WalkReport(i, vectors, paths, expected, dead, trunc)


# -- Penrose identities -----------------------------------------------------------------------

def penrose_identity_suite() -> dict:
    """Exact checks of the projected-subperiod identities of the Penrose slope."""
    E = penrose()
    K = E.field
    phi = K.gen
    U = E.generators
    gram = U @ U.T
    proj = U.T @ _inverse2(gram) @ U  # orthogonal projector of R^5 onto E

    def pi(v):
        return proj.apply(v)

    def dot(x, y):
        return sum((a * b for a, b in zip(x, y)), K.zero())

    def e(k):
        return tuple(int(t == k % 5) for t in range(5))

    def vadd(x, y):
        return tuple(a + b for a, b in zip(x, y))

    checks = []
    subs = lifted_subperiods(E)
    for sp in subs:
        p = sp.lifted
        lo, hi = floor_ceil(p)
        a, b, c = pi(lo), pi(p), pi(hi)
        col = all((dot(x, x) * dot(y, y) - dot(x, y) ** 2).is_zero() for x, y in ((a, b), (b, c), (a, c)))
        checks.append(("collinear", sp.label, col))
        i, j = sp.dropped
        orth = dot(b, vadd(pi(e(i)), pi(e(j)))).is_zero()
        checks.append(("orthogonal", sp.label, orth))
        ra, rc = dot(a, a), dot(c, c)
        ratio = rc / ra
        checks.append(("phi_ratio", sp.label, ratio == phi ** 2 or ratio == phi ** -2))
    for i in range(5):
        lhs = pi(vadd(e(i), e(i + 1)))
        rhs = tuple(-phi * x for x in pi(e(i - 2)))
        checks.append(("sum_identity", str(i), lhs == rhs))
    # worked example: the three projections of p14 are (phi + a)(pi(e1) - pi(e4))
    p14 = next(s for s in subs if s.dropped == (1, 4))
    lo, hi = floor_ceil(p14)
    d = tuple(x - y for x, y in zip(pi(e(1)), pi(e(4))))
    ok = (lo == (0, 1, 1, -1, -1) and hi == (0, 2, 1, -1, -2)
          and all(pi(v) == tuple((phi + t) * x for x in d)
                  for v, t in ((lo, 0), (p14.lifted, phi - 1), (hi, 1))))
    checks.append(("p14_example", "14", ok))
    # spacings: with tile side phi, the shorter integer version of p_{i,i+1} has length L
    side2 = dot(pi(e(0)), pi(e(0)))
    S = 2 * math.sin(2 * math.pi / 5)
    phif = float(phi)
    L = phif * S
    for sp in subs:
        i, j = sp.dropped
        if (j - i) % 5 not in (1, 4):
            continue
        lo, hi = floor_ceil(sp.lifted)
        n_lo, n_hi = dot(pi(lo), pi(lo)), dot(pi(hi), pi(hi))
        short2, long2 = sorted((n_lo, n_hi), key=float)
        scale2 = phi ** 2 / side2
        short = math.sqrt(float(short2 * scale2))
        long_ = math.sqrt(float(long2 * scale2))
        num = abs(short - L) < 1e-9 and abs(long_ - (S + L)) < 1e-9
        exact = long2 == short2 * phi ** 2
        checks.append(("spacing", sp.label, num and exact))
    passed = all(ok for _, _, ok in checks)
    return {"passed": passed, "checks": checks, "S": S, "L": L}


def _inverse2(M: FieldMatrix) -> FieldMatrix:
    (a, b), (c, d) = M.rows
    det = a * d - b * c
    return FieldMatrix([[d / det, -b / det], [-c / det, a / det]], M.field)
