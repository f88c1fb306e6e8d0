"""De Bruijn multigrids and their dual tilings, with lifts and shadows.

Grid ``m`` is the family of lines ``<x, g_m> + s_m = k`` (k integer) in the
parameter plane, where ``g_m`` is the m-th column of the generator matrix
and ``s`` a rational shift.  Every crossing of a line of grid ``i`` with a
line of grid ``j`` is dual to a parallelogram of type ``(i, j)`` whose base
vertex counts, for every other grid, the lines lying below the crossing.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from gmpy2 import mpq

from .algebra import FieldElement, FieldMatrix
from .slope import Slope

__all__ = [
    "NonGenericShift",
    "InconsistentLift",
    "Tile",
    "Multigrid",
    "Patch",
    "shift_from_seed",
    "generators_to_grid",
    "dual",
    "lift",
    "shadow_patch",
    "generate_patch",
    "unit",
]

MAX_RESHIFTS = 32


class NonGenericShift(ValueError):
    pass


class InconsistentLift(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Tile:
    type: tuple[int, int]
    pos: tuple[int, ...]

    def corners(self) -> list[tuple[int, ...]]:
        """Lifted corners in boundary order: base, +e_i, +e_i+e_j, +e_j."""
        i, j = self.type
        b = self.pos
        return [b, _bump(b, i), _bump(_bump(b, i), j), _bump(b, j)]


def unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def _bump(v, i, by=1):
    v = list(v)
    v[i] += by
    return tuple(v)


@dataclass(frozen=True)
class Multigrid:
    grid_matrix: FieldMatrix
    shift: tuple
    seed: int | None = None

    @property
    def n(self) -> int:
        return self.grid_matrix.ncols

    def column(self, m: int):
        return self.grid_matrix.col(m)


def shift_from_seed(n: int, seed: int, attempt: int = 0) -> tuple:
    """Rational shift with denominators 10007, reproducible from ``(seed, attempt)``."""
    rng = random.Random(f"shift:{seed}:{attempt}")
    return tuple(mpq(rng.randrange(1, 10007), 10007) for _ in range(n))


def generators_to_grid(E: Slope, A=None, *, seed: int = 0, shift=None) -> Multigrid:
    """Multigrid whose dual is the cut-and-project tiling of slope ``E``.

    The grids only depend on the slope; the projection ``A`` is used when
    the dual is drawn.  It is accepted here to mirror the usual pipeline.
    """
    if shift is not None:
        shift = tuple(mpq(s) if not isinstance(s, str) else mpq(s) for s in shift)
    else:
        shift = shift_from_seed(E.n, seed)
    return Multigrid(E.generators, shift, seed)


@dataclass
class Patch:
    """A finite set of lifted tiles together with the slope and the drawing matrix."""

    tiles: list[Tile]
    slope: Slope | None = None
    projection: FieldMatrix | None = None
    k: int | None = None
    grid: Multigrid | None = None
    dropped: tuple[int, ...] = ()
    _vertex_cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        if self.tiles:
            return len(self.tiles[0].pos)
        return self.slope.n - len(self.dropped) if self.slope else 0

    def vertices(self) -> set[tuple[int, ...]]:
        if "v" not in self._vertex_cache:
            self._vertex_cache["v"] = {c for t in self.tiles for c in t.corners()}
        return self._vertex_cache["v"]

    def edges(self) -> set[tuple[tuple[int, ...], int]]:
        """Edges as ``(lower endpoint, direction)``."""
        out = set()
        for t in self.tiles:
            i, j = t.type
            b = t.pos
            out.update({(b, i), (b, j), (_bump(b, i), j), (_bump(b, j), i)})
        return out

    def point(self, v):
        """Exact drawn position of a lifted vertex."""
        return self.projection.apply(v)

    def tile_polygon(self, t: Tile):
        pts = [tuple(self.point(c)) for c in t.corners()]
        i, j = t.type
        ai, aj = self.projection.col(i), self.projection.col(j)
        if (ai[0] * aj[1] - ai[1] * aj[0]).sign() < 0:
            pts.reverse()
        return pts

    def float_projection(self):
        return [[float(x) for x in row] for row in self.projection.rows]

    def float_point(self, v):
        F = self._vertex_cache.get("F")
        if F is None:
            F = self._vertex_cache["F"] = self.float_projection()
        return (sum(a * x for a, x in zip(F[0], v)), sum(a * x for a, x in zip(F[1], v)))

    def type_census(self) -> dict:
        out: dict = {}
        for t in self.tiles:
            out[t.type] = out.get(t.type, 0) + 1
        return dict(sorted(out.items()))

    def __len__(self):
        return len(self.tiles)


def _as_matrix(A):
    return getattr(A, "matrix", A)


def dual(G: Multigrid, k: int, projection=None, *, slope: Slope | None = None) -> Patch:
    """Dual patch of the lines ``-k..k`` of every grid.

    Raises :class:`NonGenericShift` when more than two lines meet.
    """
    n = G.n
    cols = [G.column(m) for m in range(n)]
    s = G.shift
    tiles = []
    for i, j in combinations(range(n), 2):
        gi, gj = cols[i], cols[j]
        det = gi[0] * gj[1] - gi[1] * gj[0]
        if det.is_zero():
            continue  # parallel grids (or an empty grid) never cross
        # x = inv * (k_i - s_i, k_j - s_j) with inv = [[gj1, -gi1], [-gj0, gi0]] / det
        inv = ((gj[1] / det, -gi[1] / det), (-gj[0] / det, gi[0] / det))
        others = [m for m in range(n) if m not in (i, j)]
        # X_m = <x, g_m> + s_m = c_m + k_i * al_m + k_j * be_m
        coef = {}
        for m in others:
            gm = cols[m]
            al = inv[0][0] * gm[0] + inv[1][0] * gm[1]
            be = inv[0][1] * gm[0] + inv[1][1] * gm[1]
            c = s[m] - al * s[i] - be * s[j]
            coef[m] = (c, al, be)
        for ki in range(-k, k + 1):
            for kj in range(-k, k + 1):
                pos = [0] * n
                pos[i], pos[j] = ki, kj
                for m in others:
                    c, al, be = coef[m]
                    X = c + al * ki + be * kj
                    if X.is_integer():
                        raise NonGenericShift(f"grids {i}, {j} and {m} are concurrent")
                    pos[m] = X.ceil()
                tiles.append(Tile((i, j), tuple(pos)))
    tiles.sort()
    return Patch(tiles, slope, _as_matrix(projection) if projection is not None else None, k, G)


def generate_patch(E: Slope, A, k: int, *, seed: int = 0, shift=None) -> Patch:
    """Dual patch with automatic re-shifting on non-generic draws."""
    A = _as_matrix(A)
    if shift is not None:
        return dual(generators_to_grid(E, shift=shift), k, A, slope=E)
    for attempt in range(MAX_RESHIFTS):
        G = Multigrid(E.generators, shift_from_seed(E.n, seed, attempt), seed)
        try:
            return dual(G, k, A, slope=E)
        except NonGenericShift:
            continue
    raise NonGenericShift(f"no generic shift after {MAX_RESHIFTS} draws")


def lift(P: Patch, anchor=None) -> dict:
    """Lift a drawn patch by walking its edges from an anchor vertex.

    Returns a map from drawn vertex positions to integer vectors (anchor at
    the origin).  Only the geometry of ``P`` is used: each edge is matched
    to the unique ``+-A e_i`` it equals.
    """
    if not P.tiles:
        return {}
    A = P.projection
    n = A.ncols
    dirs = {}
    for i in range(n):
        v = tuple(A.col(i))
        if v in dirs or tuple(-x for x in v) in dirs:
            raise InconsistentLift("two edge directions share a vector")
        dirs[v] = (i, 1)
        dirs[tuple(-x for x in v)] = (i, -1)
    adj: dict = {}
    for t in P.tiles:
        poly = [tuple(P.point(c)) for c in t.corners()]
        for a, b in zip(poly, poly[1:] + poly[:1]):
            d = (b[0] - a[0], b[1] - a[1])
            if d not in dirs:
                raise InconsistentLift("edge is not a projected unit vector")
            adj.setdefault(a, set()).add((b, dirs[d]))
            adj.setdefault(b, set()).add((a, (dirs[d][0], -dirs[d][1])))
    start = tuple(P.point(anchor)) if anchor is not None else tuple(P.point(P.tiles[0].pos))
    coords = {start: (0,) * n}
    todo = deque([start])
    while todo:
        a = todo.popleft()
        for b, (i, sgn) in adj[a]:
            want = _bump(coords[a], i, sgn)
            if b in coords:
                if coords[b] != want:
                    raise InconsistentLift("edge walk closes inconsistently")
            else:
                coords[b] = want
                todo.append(b)
    return coords


def shadow_patch(P: Patch, i) -> Patch:
    """The i-shadow: drop tiles using direction ``i`` and delete coordinate ``i``."""
    drop = (i,) if isinstance(i, int) else tuple(i)
    keep = [m for m in range(P.n) if m not in drop]
    index = {m: r for r, m in enumerate(keep)}
    tiles = []
    for t in P.tiles:
        if t.type[0] in drop or t.type[1] in drop:
            continue
        tiles.append(Tile((index[t.type[0]], index[t.type[1]]), tuple(t.pos[m] for m in keep)))
    proj = None
    if P.projection is not None:
        proj = P.projection.submatrix(range(P.projection.nrows), keep)
    tiles = sorted(set(tiles))
    return Patch(tiles, P.slope, proj, P.k, P.grid, tuple(P.dropped) + drop)
