"""Small exact polynomial systems.

Polynomials are sparse dictionaries ``{exponent tuple: FieldElement}``.
Systems are solved with a lex Groebner basis (Buchberger with the coprime
criterion) followed by a triangular back-substitution whose univariate
steps are factored exactly; real roots of irreducible factors become new
number fields carrying an isolating interval.  Every returned solution is
re-substituted into the input and must vanish exactly.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations

from .field import QQ, FieldElement, NumberField, as_rational

__all__ = [
    "Polynomial",
    "polynomial_ring",
    "groebner",
    "det_poly",
    "is_zero_dimensional",
    "solve_multilinear_system",
    "SystemSolution",
    "PositiveDimensional",
    "NoSolution",
    "UnsupportedExtension",
]


class PositiveDimensional(Exception):
    """The solution set of the system is infinite."""


class NoSolution(Exception):
    """The system has no (real) solution."""


class UnsupportedExtension(Exception):
    """A root would require a field tower we do not build."""


class Polynomial:
    __slots__ = ("terms", "nvars", "field")

    def __init__(self, terms: dict, nvars: int, field: NumberField = QQ):
        self.terms = {m: c for m, c in terms.items() if not c.is_zero()}
        self.nvars = nvars
        self.field = field

    # -- constructors -------------------------------------------------------------
    @classmethod
    def constant(cls, value, nvars: int, field: NumberField = QQ) -> "Polynomial":
        c = value if isinstance(value, FieldElement) else field(as_rational(value))
        if c.field != field:
            field = c.field
        return cls({(0,) * nvars: c}, nvars, field)

    @classmethod
    def variable(cls, i: int, nvars: int, field: NumberField = QQ) -> "Polynomial":
        m = tuple(int(k == i) for k in range(nvars))
        return cls({m: field.one()}, nvars, field)

    def _wrap(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, FieldElement):
            return Polynomial.constant(other, self.nvars, self._join_field(other.field))
        return Polynomial.constant(other, self.nvars, self.field)

    def _join_field(self, other: NumberField) -> NumberField:
        if other == QQ:
            return self.field
        if self.field == QQ or self.field == other:
            return other
        raise ValueError("mixing polynomials over different fields")

    # -- arithmetic -------------------------------------------------------------------
    def __add__(self, other):
        o = self._wrap(other)
        field = self._join_field(o.field)
        terms = dict(self.terms)
        for m, c in o.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Polynomial(terms, self.nvars, field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.nvars, self.field)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        o = self._wrap(other)
        field = self._join_field(o.field)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = c1 * c2
                terms[m] = terms[m] + v if m in terms else v
        return Polynomial(terms, self.nvars, field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(1, self.nvars, self.field)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        o = self._wrap(other)
        return (self - o).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- queries ----------------------------------------------------------------------
    def lm(self):
        return max(self.terms)

    def lc(self):
        return self.terms[self.lm()]

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=0)

    def monic(self) -> "Polynomial":
        inv = self.lc().inverse()
        return Polynomial({m: c * inv for m, c in self.terms.items()}, self.nvars, self.field)

    def evaluate(self, values):
        """Evaluate at a full point (sequence of scalars or FieldElements)."""
        acc = None
        for m, c in self.terms.items():
            t = c
            for v, e in zip(values, m):
                if e:
                    t = t * (v ** e)
            acc = t if acc is None else acc + t
        return acc if acc is not None else QQ.zero()

    def substitute(self, assignment: dict) -> "Polynomial":
        """Partially evaluate; ``assignment`` maps variable index -> value."""
        field = self.field
        for v in assignment.values():
            if isinstance(v, FieldElement):
                field = _union_field(field, v.field)
        terms: dict = {}
        for m, c in self.terms.items():
            t = c
            newm = list(m)
            for i, v in assignment.items():
                if m[i]:
                    t = t * (v ** m[i])
                    newm[i] = 0
            if not isinstance(t, FieldElement) or t.field != field:
                t = _to_field(field, t)
            key = tuple(newm)
            terms[key] = terms[key] + t if key in terms else t
        return Polynomial(terms, self.nvars, field)

    def univariate(self, i: int) -> list:
        """Coefficients (low -> high) when the polynomial only involves variable i."""
        deg = self.degree_in(i)
        out = [self.field.zero() for _ in range(deg + 1)]
        for m, c in self.terms.items():
            if any(e for k, e in enumerate(m) if k != i):
                raise ValueError("polynomial is not univariate")
            out[m[i]] = c
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e)
            parts.append(f"({self.terms[m]})" + ("*" + mono if mono else ""))
        return " + ".join(parts)


def _union_field(f1: NumberField, f2: NumberField) -> NumberField:
    if f1 == QQ:
        return f2
    if f2 == QQ or f1 == f2:
        return f1
    raise UnsupportedExtension("values from two different extensions")


def _to_field(field: NumberField, v):
    if isinstance(v, FieldElement):
        if v.field == field:
            return v
        if v.is_rational():
            return field(v.c[0])
        raise UnsupportedExtension("cannot embed value into target field")
    return field(as_rational(v))


def polynomial_ring(nvars: int, field: NumberField = QQ) -> list[Polynomial]:
    return [Polynomial.variable(i, nvars, field) for i in range(nvars)]


def det_poly(rows) -> Polynomial:
    """Cofactor-expansion determinant of a small matrix of Polynomials/scalars."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = None
    for j in range(n):
        a = rows[0][j]
        if isinstance(a, Polynomial):
            if a.is_zero():
                continue
        elif isinstance(a, FieldElement):
            if a.is_zero():
                continue
        elif a == 0:
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = det_poly(sub) * a
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return 0
    return total


# -- Groebner bases (lex) ----------------------------------------------------------

def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _shift(p: Polynomial, mono, coef) -> dict:
    return {tuple(x + y for x, y in zip(m, mono)): c * coef for m, c in p.terms.items()}


def _reduce(f: Polynomial, G: list[Polynomial]) -> Polynomial:
    """Full normal form of f modulo G (all G monic)."""
    terms = dict(f.terms)
    rem: dict = {}
    lms = [(g.lm(), g) for g in G]
    while terms:
        m = max(terms)
        c = terms.pop(m)
        for lm, g in lms:
            if _divides(lm, m):
                q = _mono_sub(m, lm)
                for gm, gc in g.terms.items():
                    if gm == lm:
                        continue
                    k = tuple(x + y for x, y in zip(gm, q))
                    v = -(gc * c)
                    if k in terms:
                        s = terms[k] + v
                        if s.is_zero():
                            del terms[k]
                        else:
                            terms[k] = s
                    else:
                        terms[k] = v
                break
        else:
            rem[m] = c
    return Polynomial(rem, f.nvars, f.field)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    L = _lcm(f.lm(), g.lm())
    a = _shift(f, _mono_sub(L, f.lm()), f.field.one())
    b = _shift(g, _mono_sub(L, g.lm()), -g.field.one())
    terms = dict(a)
    for m, c in b.items():
        terms[m] = terms[m] + c if m in terms else c
    field = f.field if f.field != QQ else g.field
    return Polynomial(terms, f.nvars, field)


def groebner(polys: list[Polynomial]) -> list[Polynomial]:
    """Reduced lex Groebner basis (x0 > x1 > ... )."""
    G = [p.monic() for p in polys if not p.is_zero()]
    if not G:
        return []
    # inter-reduce the input first; it is usually highly redundant
    G = _interreduce(G)
    pairs = set(combinations(range(len(G)), 2))
    while pairs:
        i, j = min(pairs, key=lambda ij: (sum(_lcm(G[ij[0]].lm(), G[ij[1]].lm())), ij))
        pairs.discard((i, j))
        if G[i] is None or G[j] is None:
            continue
        li, lj = G[i].lm(), G[j].lm()
        if all(x == 0 or y == 0 for x, y in zip(li, lj)):
            continue
        L = _lcm(li, lj)
        # chain criterion
        if any(k != i and k != j and G[k] is not None and _divides(G[k].lm(), L)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(G))):
            continue
        active = [g for g in G if g is not None]
        r = _reduce(_spoly(G[i], G[j]), active)
        if r.is_zero():
            continue
        r = r.monic()
        if all(x == 0 for x in r.lm()):
            return [r]
        G.append(r)
        n = len(G) - 1
        for k in range(n):
            if G[k] is not None:
                pairs.add((k, n))
    return _interreduce([g for g in G if g is not None])


def _interreduce(G: list[Polynomial]) -> list[Polynomial]:
    """Autoreduce: replace each element by its normal form modulo the others."""
    G = [g.monic() for g in G if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        idx = 0
        while idx < len(G):
            others = G[:idx] + G[idx + 1:]
            r = _reduce(G[idx], others) if others else G[idx]
            if r.is_zero():
                G.pop(idx)
                changed = True
                continue
            r = r.monic()
            if all(x == 0 for x in r.lm()):
                return [r]
            if r.terms != G[idx].terms:
                G[idx] = r
                changed = True
            idx += 1
    return sorted(G, key=lambda g: g.lm())


def is_zero_dimensional(G: list[Polynomial], nvars: int) -> bool:
    for i in range(nvars):
        if not any(all((e == 0) == (k != i) for k, e in enumerate(g.lm())) for g in G):
            return False
    return True


# -- univariate root finding -----------------------------------------------------------

def _sympy_poly(coeffs, field: NumberField):
    from sympy import QQ as SQQ, Poly, symbols

    x = symbols("x")
    if field == QQ:
        return Poly([SQQ(int(c.c[0].numerator), int(c.c[0].denominator)) for c in reversed(coeffs)],
                    x, domain=SQQ), None
    K = _sympy_field(field)
    return Poly([K.new([SQQ(int(q.numerator), int(q.denominator)) for q in reversed(c.c)])
                 for c in reversed(coeffs)], x, domain=K), K


_SYMPY_FIELDS: dict = {}


def _sympy_field(field: NumberField):
    key = field._key
    if key not in _SYMPY_FIELDS:
        from sympy import QQ as SQQ, CRootOf, Poly, symbols

        x = symbols("x")
        mp = Poly(list(reversed(field.minpoly)), x)
        _SYMPY_FIELDS[key] = SQQ.algebraic_field(CRootOf(mp, field.root_index))
    return _SYMPY_FIELDS[key]


def real_roots(coeffs, field: NumberField):
    """Distinct real roots of a univariate polynomial over ``field``.

    Returns ``(roots, outside)`` where roots are FieldElements (new fields
    are created for irrational roots over Q) and ``outside`` counts real
    roots that would need an extension of a non-rational field.
    """
    from sympy import QQ as SQQ

    while coeffs and coeffs[-1].is_zero():
        coeffs = coeffs[:-1]
    if len(coeffs) <= 1:
        if coeffs and not coeffs[0].is_zero():
            return [], 0
        raise PositiveDimensional("zero polynomial in triangular solve")
    poly, K = _sympy_poly(coeffs, field)
    _, factors = poly.factor_list()
    roots, outside = [], 0
    for fac, _mult in factors:
        deg = fac.degree()
        if deg == 1:
            c1, c0 = fac.rep.to_list()
            r = -c0 / c1
            roots.append(QQ(_sq(r)) if K is None else _anp_to_element(r, field))
            continue
        if K is None:
            for (lo, hi), _m in fac.intervals():
                nf = NumberField([_sq(c) for c in reversed(fac.rep.to_list())],
                                 (as_rational(_sq(lo)), as_rational(_sq(hi))), check=False)
                roots.append(nf.gen)
        else:
            # count real roots of the factor via its norm over Q
            outside += _count_real_roots_over_ext(fac, field)
    return roots, outside


def _sq(v):
    from gmpy2 import mpq

    try:
        return mpq(int(v.numerator), int(v.denominator))
    except AttributeError:
        from sympy import Rational

        r = Rational(v)
        return mpq(int(r.p), int(r.q))


def _anp_to_element(anp, field: NumberField) -> FieldElement:
    lst = anp.to_list()
    return field([_sq(q) for q in reversed(lst)])


def _count_real_roots_over_ext(fac, field: NumberField) -> int:
    import numpy as np

    coeffs = [float(_anp_to_element(c, field)) for c in fac.rep.to_list()]
    rts = np.roots(coeffs)
    return int(sum(1 for r in rts if abs(r.imag) < 1e-9 * max(1.0, abs(r.real))))


# -- the solver ---------------------------------------------------------------------------

class SystemSolution:
    """Outcome of :func:`solve_multilinear_system`."""

    def __init__(self, solutions, outside: int, basis):
        self.solutions = solutions
        self.outside = outside
        self.basis = basis

    def __len__(self):
        return len(self.solutions) + self.outside

    def __iter__(self):
        return iter(self.solutions)

    def __repr__(self):
        return f"SystemSolution({len(self.solutions)} in-field, {self.outside} outside)"


def solve_multilinear_system(polys, nvars: int | None = None, *, real_only: bool = True) -> SystemSolution:
    """All real solutions of a zero-dimensional polynomial system.

    Raises :class:`PositiveDimensional` when the (complex) solution set is
    infinite and :class:`NoSolution` when it is empty.
    """
    polys = [p for p in polys if isinstance(p, Polynomial)]
    if nvars is None:
        nvars = polys[0].nvars
    nonzero = [p for p in polys if not p.is_zero()]
    if not nonzero:
        if nvars == 0:
            return SystemSolution([()], 0, [])
        raise PositiveDimensional("empty system")
    G = groebner(nonzero)
    if len(G) == 1 and all(e == 0 for e in G[0].lm()):
        raise NoSolution("inconsistent system")
    if not is_zero_dimensional(G, nvars):
        raise PositiveDimensional("solution set is not finite")
    partial = [dict()]
    outside = 0
    for var in range(nvars - 1, -1, -1):
        later = set(range(var + 1, nvars))
        relevant = [g for g in G if g.variables() <= later | {var} and var in g.variables()]
        nxt = []
        for sol in partial:
            unis = []
            for g in relevant:
                h = g.substitute(sol)
                if not h.is_zero():
                    unis.append(h)
            if not unis:
                raise PositiveDimensional(f"variable x{var} unconstrained")
            field = unis[0].field
            for h in unis[1:]:
                field = _union_field(field, h.field)
            gcd = reduce(_ugcd, [[_to_field(field, c) for c in h.univariate(var)] for h in unis])
            roots, out = real_roots(gcd, field)
            outside += out
            for r in roots:
                s = dict(sol)
                s[var] = r
                nxt.append(s)
        partial = nxt
    sols = []
    for s in partial:
        vec = tuple(s[i] for i in range(nvars))
        for p in polys:
            if not _is_zero_value(p.evaluate(vec)):
                raise AssertionError("solution failed exact re-substitution")
        sols.append(vec)
    if not sols and not outside:
        raise NoSolution("no real solution")
    return SystemSolution(sols, outside, G)


def _is_zero_value(v) -> bool:
    return v.is_zero() if isinstance(v, FieldElement) else v == 0


def _ugcd(a, b):
    """Monic gcd of two univariate coefficient lists (low -> high)."""
    def trim(p):
        p = list(p)
        while p and p[-1].is_zero():
            p.pop()
        return p

    a, b = trim(a), trim(b)
    while b:
        # a mod b
        r = list(a)
        lead_inv = b[-1].inverse()
        while len(r) >= len(b) and r:
            f = r[-1] * lead_inv
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] = r[i + shift] - f * c
            r = trim(r)
        a, b = b, r
    if not a:
        return a
    inv = a[-1].inverse()
    return [c * inv for c in a]
