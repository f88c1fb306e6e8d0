import math

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, strategies as st

from ammannbars.algebra import (
    QQ,
    FieldMatrix,
    NoSolution,
    NumberField,
    PositiveDimensional,
    field_sign,
    polynomial_ring,
    solve_multilinear_system,
)
from ammannbars.slope import cyrenaic, lifted_subperiods

from oracles import sympy_matrix

K3 = NumberField("x^2 - 3", (1, 2))
K3neg = NumberField("x^2 - 3", (-2, -1))
KPHI = NumberField("x^2 - x - 1", (1, 2))
KRAUZY = NumberField("x^3 - x^2 - x - 1", (1, 2))

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12).map(lambda f: mpq(f.numerator, f.denominator))


def elements(K):
    return st.lists(rationals, min_size=K.degree, max_size=K.degree).map(lambda cs: K._from_poly(cs))


any_field = st.sampled_from([K3, K3neg, KPHI, KRAUZY])


# -- field_sign --------------------------------------------------------------------------

def test_sign_of_zero():
    assert field_sign(K3.zero()) == 0


def test_sign_sqrt3_minus_one_positive():
    assert field_sign(K3.gen - 1) == 1


def test_negative_embedding_selects_negative_root():
    assert field_sign(K3neg.gen + 1) == -1
    assert field_sign(K3neg.gen - 1) == -1


def test_sign_agrees_with_float_for_near_cancellation():
    # 1351/780 approximates sqrt 3 from above to about 1e-7
    x = K3.gen - mpq(1351, 780)
    assert field_sign(x) == -1
    assert field_sign(-x) == 1


def test_reducible_polynomial_is_rejected():
    with pytest.raises(ValueError):
        NumberField("x^2 - 4", (1, 3))


def test_interval_must_isolate_one_root():
    with pytest.raises(ValueError):
        NumberField("x^2 - 3", (-2, 2))


@given(any_field.flatmap(lambda K: st.tuples(elements(K), elements(K), elements(K))))
def test_field_axioms(xyz):
    x, y, z = xyz
    assert (x + y) + z == x + (y + z)
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if not x.is_zero():
        assert x * x.inverse() == 1


@given(any_field.flatmap(lambda K: st.tuples(elements(K), elements(K))))
def test_sign_is_consistent(xy):
    x, y = xy
    assert field_sign(x) == -field_sign(-x)
    assert field_sign(x * y) == field_sign(x) * field_sign(y)
    assert field_sign(x) == (0 if x.is_zero() else (1 if float(x) > 0 else -1)) or abs(float(x)) < 1e-9


@given(any_field.flatmap(elements))
def test_element_string_round_trip(x):
    assert x.field.parse(str(x)) == x


def test_float_embedding_matches_sympy():
    x = 3 * KRAUZY.gen ** 2 - mpq(1, 2) * KRAUZY.gen + 7
    alpha = max(r for r in sympy.Poly(sympy.Symbol("t") ** 3 - sympy.Symbol("t") ** 2 - sympy.Symbol("t") - 1).nroots() if r.is_real)
    assert math.isclose(float(x), float(3 * alpha ** 2 - alpha / 2 + 7), rel_tol=1e-12)


# -- linear algebra ----------------------------------------------------------------------

def test_identity_has_empty_left_kernel():
    assert FieldMatrix.identity(4).left_kernel().nrows == 0


def test_worked_kernel_example():
    M = FieldMatrix([[-1, 1], [1, 1], [-1, 3]], QQ)
    ker = M.left_kernel()
    assert ker.nrows == 1
    row = ker.row(0)
    # proportional to (2, 1, -1)
    assert all(row[k] * 1 == row[1] * (2, 1, -1)[k] for k in range(3))


def test_paper_matrix_m_kernel_contains_displayed_projection():
    a = K3.gen
    M = FieldMatrix([[3, -a, -a, -2 * a], [0, a + 3, a, -a], [-a, a, -a + 3, a], [-a, -a, 0, 3]], K3).scale(mpq(1, 6))
    A = FieldMatrix([[2, 0, a + 1, a - 1], [0, 2, -a - 1, a + 1]], K3).scale(mpq(1, 2))
    assert (A @ M).is_zero()
    ker = M.left_kernel()
    assert ker.nrows == 2
    assert ker.stack(A).rank() == 2


def test_rank_examples():
    assert FieldMatrix.zeros(3, 4, K3).rank() == 0
    E = cyrenaic()
    P = FieldMatrix([sp.lifted for sp in lifted_subperiods(E)], E.field).T
    assert P.rank() == 2


def test_rank_and_kernel_match_sympy():
    a = K3.gen
    M = FieldMatrix([[a, 1, 0, 2], [1, a - 1, 3, 0], [a + 1, a, 3, 2]], K3)
    S = sympy_matrix(M, sympy.sqrt(3))
    assert M.rank() == S.rank(simplify=True)
    ker = M.left_kernel()
    assert ker.nrows == 3 - S.rank(simplify=True)


small = st.integers(min_value=-3, max_value=3)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_left_kernel_property(nr, nc, data):
    a = K3.gen
    rows = [[data.draw(small) + data.draw(small) * a for _ in range(nc)] for _ in range(nr)]
    M = FieldMatrix(rows, K3)
    ker = M.left_kernel()
    assert ker.nrows + M.rank() == nr
    if ker.nrows:
        assert (ker @ M).is_zero()


@given(st.integers(1, 4), st.data())
def test_det_matches_sympy(n, data):
    rows = [[data.draw(small) + data.draw(small) * KPHI.gen for _ in range(n)] for _ in range(n)]
    M = FieldMatrix(rows, KPHI)
    S = sympy_matrix(M, (1 + sympy.sqrt(5)) / 2)
    assert math.isclose(float(M.det()), float(S.det()), abs_tol=1e-9)


# -- polynomial systems ------------------------------------------------------------------

def test_linear_system():
    (x,) = polynomial_ring(1)
    sol = solve_multilinear_system([x - 1], 1)
    assert [tuple(s) for s in sol.solutions] == [(1,)]


def test_inconsistent_system():
    (x,) = polynomial_ring(1)
    with pytest.raises(NoSolution):
        solve_multilinear_system([x - 1, x - 2], 1)


def test_positive_dimensional_system():
    x, y = polynomial_ring(2)
    with pytest.raises(PositiveDimensional):
        solve_multilinear_system([x * y - 1], 2)


def test_quadratic_roots_leave_the_base_field():
    x, y = polynomial_ring(2)
    sol = solve_multilinear_system([x * x - 3, y - x], 2)
    vals = sorted(float(s[0]) for s in sol.solutions)
    assert len(vals) == 2
    assert math.isclose(vals[0], -math.sqrt(3)) and math.isclose(vals[1], math.sqrt(3))
    for s in sol.solutions:
        assert s[0] * s[0] == 3 and s[1] == s[0]
