"""Orthogonal and fine projections of a slope to the plane, with validity checks."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import (
    FieldMatrix,
    NoSolution,
    PositiveDimensional,
    det_poly,
    polynomial_ring,
    solve_multilinear_system,
)
from .algebra.polysys import Polynomial
from .geometry import interiors_overlap, to_float
from .multigrid import generate_patch
from .slope import Slope, lifted_subperiods

__all__ = [
    "Projection",
    "DegenerateProjection",
    "FineCandidate",
    "ValidityReport",
    "orthogonal_projection",
    "fine_projection",
    "fine_candidates",
    "is_valid_projection",
    "check_projection",
    "is_fine",
    "same_row_space",
]


class DegenerateProjection(ValueError):
    pass


@dataclass(frozen=True)
class Projection:
    matrix: FieldMatrix
    kind: str = "custom"

    def __post_init__(self):
        if self.matrix.nrows != 2 or self.matrix.rank() != 2:
            raise DegenerateProjection("a projection to the plane needs a rank-2 2 x n matrix")

    @property
    def n(self) -> int:
        return self.matrix.ncols

    def image(self, v):
        return self.matrix.apply(v)

    def column(self, i: int):
        return self.matrix.col(i)


def same_row_space(A: FieldMatrix, B: FieldMatrix) -> bool:
    A = getattr(A, "matrix", A)
    B = getattr(B, "matrix", B)
    return A.rank() == B.rank() == A.stack(B).rank()


def orthogonal_projection(E: Slope) -> Projection:
    """Orthogonal projection onto E written in an orthogonal (unnormalized) basis.

    Gram-Schmidt without normalization keeps the entries in the field; the
    missing scale factors do not affect validity.
    """
    u, v = E.generators.rows
    uu = sum((x * x for x in u), E.field.zero())
    uv = sum((x * y for x, y in zip(u, v)), E.field.zero())
    w = [y - x * (uv / uu) for x, y in zip(u, v)]
    return Projection(FieldMatrix([u, w], E.field), "orthogonal")


def _cross(p, q):
    return p[0] * q[1] - p[1] * q[0]


def _orientation_screen(A: FieldMatrix, E: Slope):
    """Orientation of every pair (A e_i, A e_j) against the slope's own.

    Returns ``None`` when consistent up to one global sign, otherwise the
    first offending pair.  Raises on a degenerate pair.
    """
    n = A.ncols
    ref = None
    for i, j in combinations(range(n), 2):
        s = _cross(A.col(i), A.col(j)).sign()
        if s == 0:
            raise DegenerateProjection(f"A e_{i} and A e_{j} are collinear")
        g = E.generators.submatrix(range(2), (i, j)).det().sign()
        if g == 0:
            continue
        if ref is None:
            ref = s * g
        elif s * g != ref:
            return (i, j)
    return None


@dataclass
class ValidityReport:
    valid: bool
    reason: str = ""
    witness: tuple | None = None
    tiles_checked: int = 0


def check_projection(A, E: Slope, k: int = 6, *, seed: int = 0) -> ValidityReport:
    """Orientation screen plus pairwise interior-disjointness on a k-patch."""
    A = getattr(A, "matrix", A)
    if A.rank() != 2:
        raise DegenerateProjection("projection matrix has rank < 2")
    bad = _orientation_screen(A, E)
    if bad is not None:
        return ValidityReport(False, "orientation", bad)
    P = generate_patch(E, A, k, seed=seed)
    F = P.float_projection()
    polys = []
    for t in P.tiles:
        cs = t.corners()
        fl = [(sum(a * x for a, x in zip(F[0], c)), sum(a * x for a, x in zip(F[1], c))) for c in cs]
        polys.append((t, fl))
    # bucket by bounding box
    size = max(max(abs(F[0][m]), abs(F[1][m])) for m in range(A.ncols)) * 2 + 1e-9
    buckets: dict = {}
    for idx, (t, fl) in enumerate(polys):
        xs = [p[0] for p in fl]
        ys = [p[1] for p in fl]
        for bx in range(int(min(xs) // size), int(max(xs) // size) + 1):
            for by in range(int(min(ys) // size), int(max(ys) // size) + 1):
                buckets.setdefault((bx, by), []).append(idx)
    exact: dict = {}

    def poly_of(idx):
        if idx not in exact:
            exact[idx] = P.tile_polygon(polys[idx][0])
        return exact[idx]

    seen = set()
    for members in buckets.values():
        for a, b in combinations(members, 2):
            key = (min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
            fa, fb = polys[a][1], polys[b][1]
            if (max(p[0] for p in fa) < min(p[0] for p in fb) - 1e-9
                    or max(p[0] for p in fb) < min(p[0] for p in fa) - 1e-9
                    or max(p[1] for p in fa) < min(p[1] for p in fb) - 1e-9
                    or max(p[1] for p in fb) < min(p[1] for p in fa) - 1e-9):
                continue
            Pa, Pb = poly_of(a), poly_of(b)
            if interiors_overlap(Pa, Pb, fP=to_float(Pa), fQ=to_float(Pb)):
                return ValidityReport(False, "overlap", (polys[a][0], polys[b][0]), len(polys))
    return ValidityReport(True, "", None, len(polys))


def is_valid_projection(A, E: Slope, k: int = 6, *, seed: int = 0) -> bool:
    return check_projection(A, E, k, seed=seed).valid


def is_fine(A, E: Slope, subperiods=None) -> bool:
    """Exact collinearity of A e_i with A p_i for every subperiod p_i (4 -> 2)."""
    A = getattr(A, "matrix", A)
    if subperiods is None:
        subperiods = lifted_subperiods(E)
    for sp in subperiods:
        (i,) = sp.dropped
        if not _cross(A.col(i), A.apply(sp.lifted)).is_zero():
            return False
    return True


@dataclass
class FineCandidate:
    lambdas: tuple
    matrix: FieldMatrix
    report: ValidityReport | None = None

    @property
    def valid(self) -> bool:
        return bool(self.report and self.report.valid)


def _collinearity_system(E: Slope, subperiods):
    """The 3 x 3 minors of M, whose i-th column is e_i - lambda_i p_i."""
    n = E.n
    X = polynomial_ring(n, E.field)
    by_index = {sp.dropped[0]: sp for sp in subperiods}
    cols = []
    for i in range(n):
        p = by_index[i].lifted
        cols.append([X[i] * (-p[r]) + (1 if r == i else 0) for r in range(n)])
    eqs = []
    for rows in combinations(range(n), 3):
        for cs in combinations(range(n), 3):
            e = det_poly([[cols[c][r] for c in cs] for r in rows])
            if isinstance(e, Polynomial) and not e.is_zero():
                eqs.append(e)
    return eqs


def fine_candidates(E: Slope, *, k: int = 6, seed: int = 0, check: bool = True):
    """Every rank-2 solution of the collinearity system, with validity reports.

    Returns ``(candidates, status)``; ``status`` explains an empty list.
    """
    if E.n != 4 or E.d != 2:
        return [], "fine projections are only searched for 4 -> 2 slopes"
    subperiods = lifted_subperiods(E)
    if sorted(sp.dropped for sp in subperiods) != [(i,) for i in range(4)]:
        return [], "missing subperiods"
    try:
        sol = solve_multilinear_system(_collinearity_system(E, subperiods), E.n)
    except PositiveDimensional:
        return [], "collinearity system is not zero-dimensional"
    except NoSolution:
        return [], "collinearity system has no solution"
    by_index = {sp.dropped[0]: sp for sp in subperiods}
    out = []
    for lam in sol.solutions:
        if any(x.is_zero() for x in lam):
            continue
        M = FieldMatrix([[(1 if r == i else 0) - lam[i] * by_index[i].lifted[r]
                          for i in range(4)] for r in range(4)], E.field)
        ker = M.left_kernel()
        if ker.nrows < 2:
            continue
        for pair in combinations(range(ker.nrows), 2):
            A = ker.submatrix(pair, range(4))
            if A.rank() != 2:
                continue
            cand = FineCandidate(tuple(lam), A)
            if check:
                try:
                    cand.report = check_projection(A, E, k, seed=seed)
                except DegenerateProjection as exc:
                    cand.report = ValidityReport(False, f"degenerate: {exc}")
            out.append(cand)
    if not out:
        return [], "no rank-2 solution"
    return out, "ok"


def fine_projection(E: Slope, *, k: int = 6, seed: int = 0) -> Projection | None:
    """First fine candidate that passes the validity check, or ``None``."""
    cands, _ = fine_candidates(E, k=k, seed=seed)
    for c in cands:
        if c.valid:
            return Projection(c.matrix, "fine")
    return None

