"""Slopes with their Grassmann coordinates and subperiods.

A slope is a d-plane of R^n spanned by generator rows with entries in a
number field.  Its subperiods are the vectors of the plane whose
coordinates outside a chosen set of n-d-1 "dropped" directions are
integers; they are found exactly from the Grassmann coordinates of the
plane and a rational left kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from itertools import combinations

from .algebra import (
    QQ,
    FieldElement,
    FieldMatrix,
    NumberField,
    NoSolution,
    Polynomial,
    PositiveDimensional,
    det_poly,
    polynomial_ring,
    solve_multilinear_system,
)

__all__ = [
    "Slope",
    "Subperiod",
    "Characterization",
    "DegenerateSlope",
    "NoLift",
    "AlreadyIntegral",
    "grassmann",
    "integer_subperiods",
    "lifted_subperiods",
    "is_characterized_by_subperiods",
    "floor_ceil",
    "shadow_map",
    "plucker_relations",
    "cyrenaic",
    "ammann_beenker",
    "penrose",
    "rauzy",
    "golden_octagonal",
    "axis_plane",
    "beenker",
]


class DegenerateSlope(ValueError):
    pass


class NoLift(ValueError):
    pass


class AlreadyIntegral(ValueError):
    pass


@dataclass(frozen=True)
class Slope:
    """A d-dimensional plane of R^n given by d generator rows."""

    generators: FieldMatrix
    field: NumberField
    name: str = ""
    totally_irrational: bool = True

    def __post_init__(self):
        if self.generators.rank() != self.d:
            raise DegenerateSlope(f"generators of {self.name or 'slope'} have rank < {self.d}")

    @classmethod
    def from_rows(cls, rows, field: NumberField, name: str = "", **kw) -> "Slope":
        return cls(FieldMatrix(rows, field), field, name, **kw)

    @property
    def n(self) -> int:
        return self.generators.ncols

    @property
    def d(self) -> int:
        return self.generators.nrows

    def contains(self, v) -> bool:
        """Exact membership of a vector in the plane."""
        return self.generators.stack(FieldMatrix([v], self.field)).rank() == self.d

    def orthogonal_complement(self) -> FieldMatrix:
        """Basis rows of the internal space (orthogonal complement of the plane)."""
        return self.generators.right_kernel()


@dataclass(frozen=True)
class Subperiod:
    """A subperiod: integer entries at ``positions``, optional exact lift.

    ``dropped`` are the directions removed by the shadow.  ``lifted`` is the
    full vector of the plane when known.  ``kernel_dim`` > 1 flags a shadow
    with several independent periods; such entries carry no integers.
    """

    dropped: tuple[int, ...]
    positions: tuple[int, ...]
    integer_entries: tuple[int, ...]
    n: int
    lifted: tuple | None = None
    kernel_dim: int = 1

    @property
    def label(self) -> str:
        return "".join(str(i) for i in self.dropped)

    @property
    def shadow(self) -> tuple[int, ...]:
        return self.integer_entries

    def integer_part(self) -> list:
        """Entries with ``None`` at the dropped (non-integer) positions."""
        out: list = [None] * self.n
        for p, v in zip(self.positions, self.integer_entries):
            out[p] = v
        return out

    def with_lift(self, lifted) -> "Subperiod":
        return Subperiod(self.dropped, self.positions, self.integer_entries, self.n,
                         tuple(lifted), self.kernel_dim)

    def __str__(self):
        if self.lifted is not None:
            body = ", ".join(str(v) for v in self.lifted)
        else:
            body = ", ".join("*" if v is None else str(v) for v in self.integer_part())
        return f"p_{self.label} = ({body})"


def grassmann(E: Slope) -> dict[tuple[int, ...], FieldElement]:
    """Grassmann coordinates: the d x d minors of the generator matrix."""
    if E.generators.rank() < E.d:
        raise DegenerateSlope("generator matrix is rank deficient")
    rows = range(E.d)
    return {cols: E.generators.submatrix(rows, cols).det()
            for cols in combinations(range(E.n), E.d)}


def plucker_relations(G: dict, n: int) -> list[FieldElement]:
    """Values of the three-term Plucker relations (d = 2); all vanish on a plane."""
    def g(i, j):
        if i == j:
            return None
        return G[(i, j)] if i < j else -G[(j, i)]

    out = []
    for i, j, k, l in combinations(range(n), 4):
        out.append(g(i, j) * g(k, l) - g(i, k) * g(j, l) + g(i, l) * g(j, k))
    return out


def _prime_integer_vector(row) -> tuple[int, ...]:
    den = math.lcm(*[int(q.denominator) for q in row])
    ints = [int(q * den) for q in row]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    first = next(v for v in ints if v)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def integer_subperiods(E: Slope, *, include_degenerate: bool = False) -> list[Subperiod]:
    """Integer entries of the subperiods of every type.

    For each set of ``d + 1`` kept positions, the cofactor expansion of the
    (d+1)-minor along the unknown column gives one field-valued coefficient
    per position; splitting each into its power-basis coordinates yields a
    rational matrix whose left kernel holds the integer entries.
    """
    G = grassmann(E)
    deg = E.field.degree
    out = []
    for positions in combinations(range(E.n), E.d + 1):
        dropped = tuple(i for i in range(E.n) if i not in positions)
        rows = []
        for k in range(E.d + 1):
            rest = positions[:k] + positions[k + 1:]
            coef = G[rest] if k % 2 else -G[rest]
            rows.append([QQ(c) for c in coef.c] + [QQ(0)] * (deg - len(coef.c)))
        ker = FieldMatrix(rows, QQ).left_kernel()
        kdim = ker.nrows
        if kdim == 0:
            continue
        if kdim == 1:
            vec = _prime_integer_vector([v.c[0] for v in ker.rows[0]])
            out.append(Subperiod(dropped, positions, vec, E.n))
        elif include_degenerate:
            out.append(Subperiod(dropped, positions, (), E.n, kernel_dim=kdim))
    return sorted(out, key=lambda sp: sp.dropped)


def _lift_one(E: Slope, sp: Subperiod) -> tuple:
    # solve sum_l alpha_l u_l restricted to the kept positions = integer entries
    U = E.generators
    aug = FieldMatrix([[U.rows[l][p] for l in range(E.d)] + [E.field(v)]
                       for p, v in zip(sp.positions, sp.integer_entries)], E.field)
    red, pivots = aug.rref()
    if E.d in pivots or len(pivots) < E.d:
        raise NoLift(f"no vector of the slope has integer entries {sp.integer_entries}")
    alphas = [red.rows[i][E.d] for i in range(E.d)]
    vec = tuple(sum((alphas[l] * U.rows[l][j] for l in range(E.d)), E.field.zero())
                for j in range(E.n))
    if not E.contains(vec):
        raise NoLift("lift left the plane")
    return vec


def lifted_subperiods(E: Slope, subperiods: list[Subperiod] | None = None) -> list[Subperiod]:
    """Subperiods with their non-integer entries, as vectors of the slope."""
    if subperiods is None:
        subperiods = integer_subperiods(E)
    return [sp.with_lift(_lift_one(E, sp)) for sp in subperiods if sp.kernel_dim == 1]


@dataclass
class Characterization:
    characterized: bool
    solutions: list = dc_field(default_factory=list)
    outside: int = 0
    n_unknowns: int = 0
    reason: str = ""

    @property
    def verdict(self) -> str:
        return "characterized" if self.characterized else "not_characterized"

    @property
    def count(self) -> int:
        return len(self.solutions) + self.outside


def subperiod_system(subperiods: list[Subperiod], n: int, d: int = 2):
    """Minor system of the subperiod matrix with one unknown per non-integer slot.

    Returns ``(equations, unknown_slots, columns)`` where ``unknown_slots``
    lists ``(subperiod index, coordinate)`` in variable order.
    """
    slots = [(c, j) for c, sp in enumerate(subperiods) for j in sp.dropped]
    X = polynomial_ring(len(slots))
    index = {s: k for k, s in enumerate(slots)}
    columns = []
    for c, sp in enumerate(subperiods):
        part = sp.integer_part()
        columns.append([X[index[(c, j)]] if part[j] is None else part[j] for j in range(n)])
    eqs = []
    for cols in combinations(range(len(columns)), d + 1):
        for rows in combinations(range(n), d + 1):
            eqs.append(det_poly([[_poly(columns[c][r], len(slots)) for c in cols] for r in rows]))
    return [e for e in eqs if isinstance(e, Polynomial) and not e.is_zero()], slots, columns


def _poly(v, nvars):
    return v if isinstance(v, Polynomial) else Polynomial.constant(v, nvars)


def _reduced_system(subperiods: list[Subperiod], n: int, d: int):
    """Eliminate all but two subperiods whose integer entries are independent.

    When two subperiods share two integer positions with a nonzero 2x2
    minor, the plane is their span; every other subperiod then only adds the
    vanishing of the 3 x 3 minor on its own integer positions.
    """
    for a, b in combinations(range(len(subperiods)), 2):
        A, B = subperiods[a], subperiods[b]
        pa, pb = A.integer_part(), B.integer_part()
        common = [j for j in range(n) if pa[j] is not None and pb[j] is not None]
        if any(pa[r] * pb[s] - pa[s] * pb[r] for r, s in combinations(common, 2)):
            break
    else:
        return None
    sub = [A, B]
    eqs, slots, columns = subperiod_system(sub, n, d)
    nv = len(slots)
    for c, sp in enumerate(subperiods):
        if c in (a, b):
            continue
        rows = sp.positions
        m = [[_poly(columns[0][r], nv), _poly(columns[1][r], nv), _poly(sp.integer_part()[r], nv)]
             for r in rows]
        e = det_poly(m)
        if isinstance(e, Polynomial) and not e.is_zero():
            eqs.append(e)
        elif not isinstance(e, Polynomial) and e != 0:
            eqs.append(_poly(e, nv))
    return eqs, slots, (a, b)


def is_characterized_by_subperiods(E: Slope, subperiods: list[Subperiod] | None = None,
                                   *, max_full_unknowns: int = 6) -> Characterization:
    """Decide whether finitely many planes share the subperiods of ``E``."""
    if subperiods is None:
        subperiods = integer_subperiods(E)
    subperiods = [sp for sp in subperiods if sp.kernel_dim == 1]
    n, d = E.n, E.d
    if len(subperiods) < d + 1:
        return Characterization(False, reason="too few subperiods")
    n_unknowns = sum(len(sp.dropped) for sp in subperiods)
    if n_unknowns <= max_full_unknowns:
        eqs, slots, _ = subperiod_system(subperiods, n, d)
    else:
        reduced = _reduced_system(subperiods, n, d)
        if reduced is None:
            eqs, slots, _ = subperiod_system(subperiods, n, d)
        else:
            eqs, slots, _ = reduced
    try:
        sol = solve_multilinear_system(eqs, len(slots))
    except PositiveDimensional as exc:
        return Characterization(False, n_unknowns=n_unknowns, reason=str(exc))
    except NoSolution as exc:
        return Characterization(False, n_unknowns=n_unknowns, reason=f"no solution: {exc}")
    return Characterization(True, sol.solutions, sol.outside, n_unknowns)


def floor_ceil(p: Subperiod | tuple) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Integer versions of a lifted subperiod.

    With one non-integer entry: ``(floor, ceil)``.  With two (5 -> 2 case):
    ``(floor-ceil, ceil-floor)``, i.e. floor at the first non-integer slot and
    ceil at the second, then the reverse.
    """
    vec = p.lifted if isinstance(p, Subperiod) else tuple(p)
    if vec is None:
        raise NoLift("subperiod has no lifted vector")
    slots = [j for j, v in enumerate(vec) if not _is_int(v)]
    if not slots:
        raise AlreadyIntegral("subperiod has no non-integer coordinate")
    base = [_as_int(v) if _is_int(v) else None for v in vec]
    lo, hi = list(base), list(base)
    for k, j in enumerate(slots):
        f, c = _floor(vec[j]), _ceil(vec[j])
        assert f < vec[j] < c
        if k % 2 == 0:
            lo[j], hi[j] = f, c
        else:
            lo[j], hi[j] = c, f
    return tuple(lo), tuple(hi)


def _is_int(v) -> bool:
    if isinstance(v, FieldElement):
        return v.is_integer()
    return float(v).is_integer() if not isinstance(v, int) else True


def _as_int(v) -> int:
    return int(v.c[0]) if isinstance(v, FieldElement) else int(v)


def _floor(v) -> int:
    return v.floor() if isinstance(v, FieldElement) else math.floor(v)


def _ceil(v) -> int:
    return v.ceil() if isinstance(v, FieldElement) else math.ceil(v)


def shadow_map(v, dropped) -> tuple:
    """Delete the coordinate(s) ``dropped`` from ``v``."""
    if isinstance(dropped, int):
        dropped = (dropped,)
    return tuple(x for j, x in enumerate(v) if j not in dropped)


# -- worked examples ------------------------------------------------------------------

def _quadratic(minpoly: str, lo, hi) -> NumberField:
    return NumberField(minpoly, (lo, hi))


def cyrenaic(sign: int = 1) -> Slope:
    """Slope spanned by (a, 0, 1, 1), (1, a - 1, -1, 1) with a = +-sqrt 3."""
    K = _quadratic("x^2 - 3", 1, 2) if sign > 0 else _quadratic("x^2 - 3", -2, -1)
    a = K.gen
    return Slope.from_rows([[a, 0, 1, 1], [1, a - 1, -1, 1]], K, "cyrenaic" if sign > 0 else "cyrenaic-")


def ammann_beenker() -> Slope:
    K = _quadratic("x^2 - 2", 1, 2)
    r = K.gen
    return Slope.from_rows([[r, 1, 0, -1], [0, 1, r, 1]], K, "ammann-beenker")


def beenker(s) -> Slope:
    """Beenker slope u = (1, 2/s, 1, 0), v = (0, 1, s, 1); ``s`` a field element or rational."""
    K = s.field if isinstance(s, FieldElement) else QQ
    s = s if isinstance(s, FieldElement) else QQ(s)
    return Slope.from_rows([[1, 2 / s, 1, 0], [0, 1, s, 1]], K, "beenker",
                           totally_irrational=not s.is_rational())


def penrose() -> Slope:
    K = _quadratic("x^2 - x - 1", 1, 2)
    phi = K.gen
    return Slope.from_rows([[phi, 0, -phi, -1, 1], [-1, 1, phi, 0, -phi]], K, "penrose")


def rauzy() -> Slope:
    K = NumberField("x^3 - x^2 - x - 1", (1, 2))
    al = K.gen
    return Slope.from_rows([[al - 1, -1, 0], [al * al - al - 1, 0, -1]], K, "rauzy")


def golden_octagonal() -> Slope:
    K = _quadratic("x^2 - x - 1", 1, 2)
    phi = K.gen
    return Slope.from_rows([[-1, 0, phi, phi], [0, 1, phi, 1]], K, "golden-octagonal")


def axis_plane(n: int = 4) -> Slope:
    rows = [[int(j == i) for j in range(n)] for i in range(2)]
    return Slope.from_rows(rows, QQ, "axis", totally_irrational=False)
