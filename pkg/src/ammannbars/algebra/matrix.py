"""Immutable matrices over a number field with exact elimination."""

from __future__ import annotations

from itertools import combinations

from .field import QQ, FieldElement, NumberField, as_rational

__all__ = ["FieldMatrix", "rank", "left_kernel", "right_kernel", "det", "common_field"]


def common_field(values) -> NumberField:
    field = QQ
    for v in values:
        if isinstance(v, FieldElement) and v.field != QQ:
            if field != QQ and v.field != field:
                raise ValueError("entries from different number fields")
            field = v.field
    return field


def _lift(field: NumberField, v) -> FieldElement:
    if isinstance(v, FieldElement):
        if v.field == field:
            return v
        if v.is_rational():
            return field(v.c[0])
        raise ValueError("entry does not belong to the matrix field")
    if isinstance(v, str):
        return field.parse(v)
    return field(as_rational(v))


class FieldMatrix:
    """A rectangular matrix of :class:`FieldElement` entries.

    Rows are stored as tuples; every operation returns a new matrix.
    """

    __slots__ = ("rows", "field", "ncols")

    def __init__(self, rows, field: NumberField | None = None, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if field is None:
            field = common_field(v for r in rows for v in r)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.ncols = widths.pop() if widths else (ncols or 0)
        self.field = field
        self.rows = tuple(tuple(_lift(field, v) for v in r) for r in rows)

    @classmethod
    def identity(cls, n: int, field: NumberField = QQ) -> "FieldMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: NumberField = QQ) -> "FieldMatrix":
        return cls([[0] * ncols for _ in range(nrows)], field, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    @property
    def T(self) -> "FieldMatrix":
        return FieldMatrix([self.col(j) for j in range(self.ncols)], self.field, self.nrows)

    def __eq__(self, other):
        return isinstance(other, FieldMatrix) and self.rows == other.rows and self.shape == other.shape

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in r) for r in self.rows)
        return f"FieldMatrix([{body}])"

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        field = self.field if self.field != QQ else other.field
        cols = [other.col(j) for j in range(other.ncols)]
        out = []
        for r in self.rows:
            out.append([_dot(field, r, c) for c in cols])
        return FieldMatrix(out, field, other.ncols)

    def apply(self, vec) -> tuple:
        """Matrix-vector product with a plain sequence."""
        v = [_lift(self.field, x) if not isinstance(x, FieldElement) else x for x in vec]
        return tuple(_dot(self.field, r, v) for r in self.rows)

    def __add__(self, other):
        return FieldMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return FieldMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "FieldMatrix":
        return FieldMatrix([[x * c for x in r] for r in self.rows], self.field, self.ncols)

    def stack(self, other: "FieldMatrix") -> "FieldMatrix":
        return FieldMatrix(list(self.rows) + list(other.rows))

    def submatrix(self, rows, cols) -> "FieldMatrix":
        return FieldMatrix([[self.rows[i][j] for j in cols] for i in rows], self.field, len(cols))

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self.rows for v in r)

    # -- elimination ------------------------------------------------------------------
    def _bareiss(self):
        """Fraction-free (Bareiss) forward elimination; returns (echelon rows, rank, sign)."""
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        prev = self.field.one()
        r = 0
        sign = 1
        for c in range(nc):
            piv = next((i for i in range(r, nr) if not m[i][c].is_zero()), None)
            if piv is None:
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
                sign = -sign
            p = m[r][c]
            for i in range(r + 1, nr):
                mic = m[i][c]
                row_i = m[i]
                row_r = m[r]
                for j in range(c + 1, nc):
                    row_i[j] = (p * row_i[j] - mic * row_r[j]) / prev
                row_i[c] = self.field.zero()
            prev = p
            r += 1
            if r == nr:
                break
        return m, r, sign

    def rank(self) -> int:
        return self._bareiss()[1]

    def det(self) -> FieldElement:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return self.field.one()
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        m, r, sign = self._bareiss()
        if r < n:
            return self.field.zero()
        return m[n - 1][n - 1] if sign > 0 else -m[n - 1][n - 1]

    def rref(self):
        """Reduced row echelon form and pivot columns."""
        m = [list(r) for r in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            piv = next((i for i in range(r, nr) if not m[i][c].is_zero()), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = m[r][c].inverse()
            m[r] = [x * inv for x in m[r]]
            for i in range(nr):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return FieldMatrix(m, self.field, nc), pivots

    def right_kernel(self) -> "FieldMatrix":
        """Basis (as rows) of ``{x : M x = 0}``."""
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            v = [self.field.zero()] * self.ncols
            v[f] = self.field.one()
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            basis.append(v)
        return FieldMatrix(basis, self.field, self.ncols)

    def left_kernel(self) -> "FieldMatrix":
        """Basis (as rows) of ``{v : v M = 0}``."""
        return self.T.right_kernel()

    def minors(self, k: int):
        """All ``k x k`` minors as ``((rows, cols), value)`` pairs."""
        for rs in combinations(range(self.nrows), k):
            for cs in combinations(range(self.ncols), k):
                yield (rs, cs), self.submatrix(rs, cs).det()

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self.rows]

    def to_floats(self) -> list[list[float]]:
        return [[float(v) for v in r] for r in self.rows]


def _dot(field, r, c):
    acc = field.zero()
    for x, y in zip(r, c):
        if x.is_zero() or y.is_zero():
            continue
        acc = acc + x * y
    return acc


def rank(M: FieldMatrix) -> int:
    return M.rank()


def left_kernel(M: FieldMatrix) -> FieldMatrix:
    return M.left_kernel()


def right_kernel(M: FieldMatrix) -> FieldMatrix:
    return M.right_kernel()


def det(M: FieldMatrix) -> FieldElement:
    return M.det()
