"""Ammann-bar decorations from lines through every vertex of a tiling.

With a fine projection, the line through each vertex in the direction of a
projected subperiod is drawn; the pieces of these lines inside a tile are
its decoration.  The set of decorated tiles is finite and is computed
exactly: for every tile type, the region of internal space where the tile
occurs is cut into cells on which the set of crossing lines is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cmp_to_key
from itertools import combinations, product

from gmpy2 import mpq

from .algebra import FieldElement, FieldMatrix
from .atlas import Window, window
from .geometry import area, difference, intersect
from .multigrid import Patch, Tile
from .slope import Slope, floor_ceil, lifted_subperiods

__all__ = [
    "NotCharacterized",
    "NoFineProjection",
    "AmmannSegment",
    "DecoratedTile",
    "Tileset",
    "LineFamily",
    "decoration_radius",
    "decorated_tile",
    "decorated_tileset",
    "decorations_from_patch",
    "decorate_patch",
    "interval_census",
    "render_tileset",
]


class NotCharacterized(ValueError):
    pass


class NoFineProjection(ValueError):
    pass


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _cmp(x, y):
    return (x - y).sign() if isinstance(x - y, FieldElement) else (x > y) - (x < y)


_exact_key = cmp_to_key(_cmp)


@dataclass(frozen=True)
class AmmannSegment:
    """A line piece inside a tile; endpoints in tile coordinates (lam, mu)."""

    direction: int
    start: tuple
    end: tuple

    def as_strings(self):
        return {"direction": self.direction,
                "start": [str(x) for x in self.start],
                "end": [str(x) for x in self.end],
                "float": [[float(x) for x in self.start], [float(x) for x in self.end]]}


@dataclass(frozen=True)
class DecoratedTile:
    """Tile type plus, per direction, the sorted offsets of the crossing lines.

    Offsets are exact, so equal keys mean equal decorations.
    """

    type: tuple[int, int]
    offsets: tuple  # ((direction, (offset, ...)), ...)
    segments: tuple = dc_field(default=(), compare=False, hash=False)

    def key(self):
        return (self.type, self.offsets)

    def direction(self, m: int) -> tuple:
        for d, offs in self.offsets:
            if d == m:
                return offs
        return ()

    def restricted(self, m: int) -> tuple:
        return (self.type, self.direction(m))

    def edge_points(self, m: int | None = None):
        """Segment endpoints on the boundary as ``(direction, corner, axis, t)``.

        A boundary point is ``corner + t * e_axis`` in lifted tile coordinates.
        """
        i, j = self.type
        out = []
        for s in self.segments:
            if m is not None and s.direction != m:
                continue
            for lam, mu in (s.start, s.end):
                out.append((s.direction,) + _boundary_param(i, j, lam, mu))
        return out


def _boundary_param(i, j, lam, mu):
    """Describe (lam, mu) on the unit square boundary as (corner, axis, t)."""
    if lam == 0 or lam == 1:
        return ((0 if lam == 0 else 1, 0), j, mu)
    return ((0, 0 if mu == 0 else 1), i, lam)


@dataclass
class LineFamily:
    """Projected subperiod directions and the offsets of lines through vertices."""

    A: FieldMatrix
    directions: list  # exact A p_m
    floors: list
    ceils: list

    @classmethod
    def build(cls, E: Slope, A, subperiods=None) -> "LineFamily":
        A = getattr(A, "matrix", A)
        if subperiods is None:
            subperiods = lifted_subperiods(E)
        by_index = {sp.dropped[0]: sp for sp in subperiods if len(sp.dropped) == 1}
        if sorted(by_index) != list(range(E.n)):
            raise NotCharacterized("one subperiod per direction is required")
        dirs, fl, ce = [], [], []
        for m in range(E.n):
            p = by_index[m].lifted
            dirs.append(tuple(A.apply(p)))
            lo, hi = floor_ceil(p)
            fl.append(lo)
            ce.append(hi)
        return cls(A, dirs, fl, ce)

    @property
    def n(self) -> int:
        return self.A.ncols

    def col(self, i):
        return self.A.col(i)

    def offset(self, m: int, u) -> FieldElement:
        """cross(A p_m, A u): constant along a direction-m line."""
        return _cross(self.directions[m], self.A.apply(u))

    def coefficients(self, tile_type):
        """(alpha_m, beta_m): the offset of the tile point lam e_i + mu e_j is lam*alpha + mu*beta."""
        i, j = tile_type
        return [(_cross(P, self.col(i)), _cross(P, self.col(j))) for P in self.directions]

    def norm_sq(self, v):
        x, y = self.A.apply(v)
        return x * x + y * y


def _rational_sqrt_bound(x) -> mpq:
    """Smallest-ish rational q >= sqrt(x), verified exactly."""
    f = math.sqrt(max(float(x), 0.0))
    q = mpq(math.ceil(f * 10 ** 6 + 1), 10 ** 6)
    while q * q < x:
        q += mpq(1, 10 ** 6)
    return q


def decoration_radius(E: Slope, A, subperiods=None) -> mpq:
    """Rational upper bound of max_i sqrt(d1(i)^2 + d2(i)^2 / 4).

    d1(i) is the longest projected unit vector other than e_i and d2(i)
    the longer of the projected floor and ceil of the i-th subperiod.
    """
    fam = LineFamily.build(E, A, subperiods)
    best = None
    for i in range(E.n):
        d1 = max((fam.norm_sq(_unit(E.n, j)) for j in range(E.n) if j != i), key=_exact_key)
        d2 = max(fam.norm_sq(fam.floors[i]), fam.norm_sq(fam.ceils[i]), key=_exact_key)
        val = d1 + d2 / 4
        if best is None or val > best:
            best = val
    return _rational_sqrt_bound(best)


def _unit(n, i):
    return tuple(int(k == i) for k in range(n))


def _line_range(coef):
    al, be = coef
    vals = [al * 0, al, be, al + be]
    return min(vals, key=_exact_key), max(vals, key=_exact_key)


def _segment(coef, ell):
    """Endpoints of {lam*alpha + mu*beta = ell} inside the unit square."""
    al, be = coef
    pts = []
    zero, one = ell * 0, ell * 0 + 1
    if not be.is_zero():
        for lam in (zero, one):
            mu = (ell - lam * al) / be
            if mu.sign() >= 0 and (mu - 1).sign() <= 0:
                pts.append((lam, mu))
    if not al.is_zero():
        for mu in (zero, one):
            lam = (ell - mu * be) / al
            if lam.sign() >= 0 and (lam - 1).sign() <= 0:
                pts.append((lam, mu))
    uniq = []
    for p in pts:
        if p not in uniq:
            uniq.append(p)
    uniq.sort(key=lambda p: (float(p[0]), float(p[1])))
    if len(uniq) != 2:
        raise ValueError("line does not cross the tile interior")
    return tuple(uniq)


def _make_tile(tile_type, offsets_by_dir, coefs) -> DecoratedTile:
    offs = []
    segs = []
    for m in sorted(offsets_by_dir):
        vals = tuple(sorted(set(offsets_by_dir[m]), key=_exact_key))
        if not vals:
            continue
        offs.append((m, vals))
        for ell in vals:
            a, b = _segment(coefs[m], ell)
            segs.append(AmmannSegment(m, a, b))
    return DecoratedTile(tuple(tile_type), tuple(offs), tuple(segs))


def decorated_tile(vertices, tile_type, family: LineFamily, base=None) -> DecoratedTile:
    """Decorate the tile ``base + [0,1] e_i + [0,1] e_j`` with the lines through ``vertices``.

    Lines that only touch the tile (at a corner or along an edge) are dropped.
    """
    n = family.n
    base = tuple(base) if base is not None else (0,) * n
    coefs = family.coefficients(tile_type)
    ranges = [_line_range(c) for c in coefs]
    by_dir: dict = {}
    for v in vertices:
        u = tuple(x - b for x, b in zip(v, base))
        for m in range(n):
            ell = family.offset(m, u)
            lo, hi = ranges[m]
            if (ell - lo).sign() > 0 and (hi - ell).sign() > 0:
                by_dir.setdefault(m, []).append(ell)
    return _make_tile(tile_type, by_dir, coefs)


@dataclass
class Tileset:
    tiles: list
    slope: Slope | None = None
    projection: FieldMatrix | None = None
    intervals: dict = dc_field(default_factory=dict)
    radius: mpq | None = None
    cells: int = 0

    def keys(self) -> set:
        return {t.key() for t in self.tiles}

    def __len__(self):
        return len(self.tiles)

    def by_type(self) -> dict:
        out: dict = {}
        for t in self.tiles:
            out[t.type] = out.get(t.type, 0) + 1
        return dict(sorted(out.items()))


# -- exact enumeration ----------------------------------------------------------------------

def _tile_region(W: Window, tile_type):
    i, j = tile_type
    n = W.n
    poly = list(W.polygon)
    for u in (_unit(n, i), _unit(n, j), tuple(int(k in (i, j)) for k in range(n))):
        poly = intersect(poly, W.translate_by(u))
    return poly


def _candidates(W: Window, fam: LineFamily, tile_type, R: float, tile_region):
    """Lattice points whose line crosses the tile, within distance R of its centre,
    and whose window translate meets the tile region."""
    n = fam.n
    i, j = tile_type
    FA = [[float(x) for x in r] for r in fam.A.rows]
    FK = [[float(x) for x in r] for r in W.internal_projection.rows]
    import numpy as np

    Mx = np.array(FA + FK)
    Minv = np.linalg.inv(Mx)
    ci = [(FA[0][i] + FA[0][j]) / 2, (FA[1][i] + FA[1][j]) / 2]
    reg = [(float(x), float(y)) for x, y in tile_region]
    wp = W.float_polygon()
    # internal image of a candidate lies in tile_region - W
    dx = [p[0] - q[0] for p in reg for q in wp]
    dy = [p[1] - q[1] for p in reg for q in wp]
    lo = np.array([ci[0] - R, ci[1] - R, min(dx), min(dy)])
    hi = np.array([ci[0] + R, ci[1] + R, max(dx), max(dy)])
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    centre = Minv @ mid
    spread = np.abs(Minv) @ half
    ranges = [range(math.floor(c - s - 1e-9), math.ceil(c + s + 1e-9) + 1) for c, s in zip(centre, spread)]
    coefs = fam.coefficients(tile_type)
    lranges = [_line_range(c) for c in coefs]
    flr = [(float(a), float(b)) for a, b in lranges]
    fdirs = [(float(P[0]), float(P[1])) for P in fam.directions]
    rbox = (min(p[0] for p in reg), max(p[0] for p in reg), min(p[1] for p in reg), max(p[1] for p in reg))
    out = []
    for u in product(*ranges):
        y = (sum(a * x for a, x in zip(FA[0], u)), sum(a * x for a, x in zip(FA[1], u)))
        if math.hypot(y[0] - ci[0], y[1] - ci[1]) > R:
            continue
        hits = []
        for m in range(n):
            ell = fdirs[m][0] * y[1] - fdirs[m][1] * y[0]
            if flr[m][0] - 1e-9 < ell < flr[m][1] + 1e-9:
                hits.append(m)
        if not hits:
            continue
        w = W.float_image(u)
        if (rbox[1] < min(p[0] for p in wp) - w[0] - 1e-9 or rbox[0] > max(p[0] for p in wp) - w[0] + 1e-9
                or rbox[3] < min(p[1] for p in wp) - w[1] - 1e-9 or rbox[2] > max(p[1] for p in wp) - w[1] + 1e-9):
            continue
        # exact confirmation
        T = W.translate_by(u)
        if not intersect(tile_region, T):
            continue
        lines = []
        for m in hits:
            ell = fam.offset(m, u)
            a, b = lranges[m]
            if (ell - a).sign() > 0 and (b - ell).sign() > 0:
                lines.append((m, ell))
        if lines:
            out.append((u, lines))
    return out


def _fbox(poly):
    fx = [float(p[0]) for p in poly]
    fy = [float(p[1]) for p in poly]
    return min(fx), max(fx), min(fy), max(fy)


def _disjoint(a, b, eps=1e-9):
    return a[1] < b[0] - eps or b[1] < a[0] - eps or a[3] < b[2] - eps or b[3] < a[2] - eps


def _split(pieces, T):
    """Split convex pieces by convex T: (inside parts, outside parts)."""
    fT = _fbox(T)
    ins, outs = [], []
    for q in pieces:
        if _disjoint(_fbox(q), fT):
            outs.append(q)
            continue
        I = intersect(q, T)
        if I:
            ins.append(I)
            outs.extend(difference(q, T))
        else:
            outs.append(q)
    return ins, outs


def _enumerate_cells(W: Window, region_poly, lines):
    """Cells of the tile region on which the set of present lines is constant.

    ``lines`` maps a line key to the lattice points lying on it; a line is
    present at z iff one of its points u has z in W - ip(u).
    """
    keys = sorted(lines, key=lambda k: (k[0], float(k[1])))
    translates = {k: [W.translate_by(u) for u in lines[k]] for k in keys}
    results = []
    stack = [([region_poly], 0, ())]
    while stack:
        pieces, idx, present = stack.pop()
        if idx == len(keys):
            results.append((pieces, present))
            continue
        k = keys[idx]
        rest = pieces
        inside = []
        for T in translates[k]:
            ins, rest = _split(rest, T)
            inside.extend(ins)
            if not rest:
                break
        if inside:
            stack.append((inside, idx + 1, present + (k,)))
        if rest:
            stack.append((rest, idx + 1, present))
    return results


def decorated_tileset(E: Slope, A, radius=None, *, subperiods=None, extra: float = 0.0,
                      check_area: bool = True) -> Tileset:
    """All decorated tiles of the tilings of slope E drawn with the fine projection A.

    ``radius`` bounds the distance from a tile's centre to the vertices whose
    lines are taken into account (default: tile diameter plus half the longest
    projected floor/ceil subperiod, plus ``extra``).
    """
    from .projection import is_fine

    A = getattr(A, "matrix", A)
    if subperiods is None:
        subperiods = lifted_subperiods(E)
    if len(subperiods) < E.n:
        raise NotCharacterized("slope lacks one subperiod per direction")
    if not is_fine(A, E, subperiods):
        raise NoFineProjection("projection is not fine for this slope")
    fam = LineFamily.build(E, A, subperiods)
    W = window(E)
    n = E.n
    d2 = max(math.sqrt(float(fam.norm_sq(v))) for v in fam.floors + fam.ceils)
    tiles = []
    total_cells = 0
    for tile_type in combinations(range(n), 2):
        i, j = tile_type
        diam = max(math.sqrt(float(fam.norm_sq(tuple(int(k == i) + s * int(k == j) for k in range(n)))))
                   for s in (1, -1))
        R = float(radius) if radius is not None else diam + d2 / 2
        R += extra
        reg = _tile_region(W, tile_type)
        if not reg:
            continue
        cands = _candidates(W, fam, tile_type, R, reg)
        lines: dict = {}
        for u, ls in cands:
            for m, ell in ls:
                lines.setdefault((m, ell), []).append(u)
        cells = _enumerate_cells(W, reg, lines)
        total_cells += len(cells)
        if check_area:
            tot = sum((area(p) for pieces, _ in cells for p in pieces), area(reg) * 0)
            if tot != area(reg):
                raise AssertionError(f"cells of tile {tile_type} do not cover its region")
        coefs = fam.coefficients(tile_type)
        seen = {}
        for _, present in cells:
            by_dir: dict = {}
            for m, ell in present:
                by_dir.setdefault(m, []).append(ell)
            t = _make_tile(tile_type, by_dir, coefs)
            seen.setdefault(t.key(), t)
        tiles.extend(seen[k] for k in sorted(seen, key=_tile_sort_key))
    ts = Tileset(tiles, E, A, radius=radius, cells=total_cells)
    return ts


def _tile_sort_key(key):
    tile_type, offs = key
    return (tile_type, [(m, [float(x) for x in vals]) for m, vals in offs])


def decorations_from_patch(P: Patch, family: LineFamily, radius: float, *, margin: int = 2):
    """Distinct decorated tiles of a patch: key -> (decorated tile, first tile seen)."""
    out = {}
    for t, dt in decorate_patch(P, family, radius, margin=margin).items():
        out.setdefault(dt.key(), (dt, t))
    return out


def decorate_patch(P: Patch, family: LineFamily, radius: float, *, margin: int = 2) -> dict:
    """Decoration of every tile of a multigrid patch away from its border.

    A tile is used when every lattice point within ``radius`` of its centre
    that the patch could contain lies well inside the generated grid range.
    """
    V = P.vertices()
    F = [[float(x) for x in r] for r in family.A.rows]
    pts = {v: (sum(a * x for a, x in zip(F[0], v)), sum(a * x for a, x in zip(F[1], v))) for v in V}
    k = P.k
    inner = [v for v in V if all(-k + margin <= x <= k - margin for x in v)]
    if not inner:
        return {}
    ix = [pts[v][0] for v in inner]
    iy = [pts[v][1] for v in inner]
    # grid-range box of fully generated vertices in the drawing, shrunk by the radius
    box = (min(ix) + radius, max(ix) - radius, min(iy) + radius, max(iy) - radius)
    cell = max(radius, 1.0)
    buckets: dict = {}
    for v, (x, y) in pts.items():
        buckets.setdefault((int(x // cell), int(y // cell)), []).append(v)
    inner_set = set(inner)
    out = {}
    for t in P.tiles:
        i, j = t.type
        c = pts[t.pos]
        cx = c[0] + (F[0][i] + F[0][j]) / 2
        cy = c[1] + (F[1][i] + F[1][j]) / 2
        if not (box[0] <= cx <= box[1] and box[2] <= cy <= box[3]):
            continue
        near = []
        ok = True
        gx, gy = int(cx // cell), int(cy // cell)
        for bx in range(gx - 1, gx + 2):
            for by in range(gy - 1, gy + 2):
                for v in buckets.get((bx, by), ()):
                    x, y = pts[v]
                    if math.hypot(x - cx, y - cy) <= radius:
                        if v not in inner_set:
                            ok = False
                        near.append(v)
        if not ok:
            continue
        out[t] = decorated_tile(near, t.type, family, t.pos)
    return out


def interval_census(P: Patch, family: LineFamily, m: int, *, disc: float | None = None):
    """Distinct gaps between consecutive direction-m lines crossing a central disc.

    Returns exact offset gaps (cross-product units) sorted by size, together
    with their perpendicular widths as floats.
    """
    V = sorted(P.vertices())
    F = [[float(x) for x in r] for r in family.A.rows]
    pts = {v: (sum(a * x for a, x in zip(F[0], v)), sum(a * x for a, x in zip(F[1], v))) for v in V}
    k = P.k or 0
    inner = [v for v in V if all(-k + 2 <= x <= k - 2 for x in v)]
    cx = sum(pts[v][0] for v in inner) / len(inner)
    cy = sum(pts[v][1] for v in inner) / len(inner)
    reach = min(math.hypot(pts[v][0] - cx, pts[v][1] - cy) for v in V if v not in set(inner)) if len(inner) < len(V) else 1e9
    d2 = max(math.sqrt(float(family.norm_sq(w))) for w in (family.floors[m], family.ceils[m]))
    rho = disc if disc is not None else max(reach - d2, 0.0)
    Pm = family.directions[m]
    fP = (float(Pm[0]), float(Pm[1]))
    norm = math.hypot(*fP)
    c_off = fP[0] * cy - fP[1] * cx
    lo, hi = c_off - rho * norm, c_off + rho * norm
    offs = {}
    for v in V:
        x, y = pts[v]
        if math.hypot(x - cx, y - cy) > rho + d2:
            continue
        f = fP[0] * y - fP[1] * x
        if lo <= f <= hi:
            ell = family.offset(m, v)
            offs[ell] = f
    vals = sorted(offs, key=_exact_key)
    gaps = set(b - a for a, b in zip(vals, vals[1:]))
    gaps = sorted(gaps, key=_exact_key)
    return [(g, float(g) / norm) for g in gaps]


# -- rendering ------------------------------------------------------------------------------

from .render import LINE_COLORS as _COLORS, TILE_FILLS as _FILLS  # noqa: E402


def render_tileset(T: Tileset, *, cols: int = 6, cell: float = 110.0) -> str:
    """SVG sheet with one cell per decorated tile."""
    rows = max(1, math.ceil(len(T.tiles) / cols))
    w, h = cols * cell, rows * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
           f'viewBox="0 0 {w:.0f} {h:.0f}">']
    if T.tiles and T.projection is not None:
        A = [[float(x) for x in r] for r in T.projection.rows]
        n = len(A[0])
        longest = max(math.hypot(A[0][m], A[1][m]) for m in range(n))
        s = 0.38 * cell / longest
        type_index = {t: k for k, t in enumerate(combinations(range(n), 2))}
        for k, t in enumerate(T.tiles):
            i, j = t.type
            ox = (k % cols + 0.5) * cell
            oy = (k // cols + 0.5) * cell
            vi = (A[0][i], A[1][i])
            vj = (A[0][j], A[1][j])

            def at(lam, mu):
                x = (lam - 0.5) * vi[0] + (mu - 0.5) * vj[0]
                y = (lam - 0.5) * vi[1] + (mu - 0.5) * vj[1]
                return ox + s * x, oy - s * y

            corners = [at(0, 0), at(1, 0), at(1, 1), at(0, 1)]
            pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in corners)
            fill = _FILLS[type_index[t.type] % len(_FILLS)]
            out.append(f'<polygon points="{pts}" fill="{fill}" stroke="#333" stroke-width="0.8"/>')
            for seg in t.segments:
                (x0, y0), (x1, y1) = at(*map(float, seg.start)), at(*map(float, seg.end))
                out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" '
                           f'stroke="{_COLORS[seg.direction % len(_COLORS)]}" stroke-width="1.6"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
