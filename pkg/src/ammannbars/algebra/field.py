"""Real algebraic number fields Q(a) and their elements.

A field is given by the minimal polynomial of its generator ``a`` together
with a rational isolating interval that picks one real root, so that
``Q(sqrt 3)`` with ``a ~ 1.73`` and with ``a ~ -1.73`` are distinct (ordered)
fields.  Elements are coefficient vectors in the power basis
``1, a, ..., a^(deg-1)`` with ``gmpy2.mpq`` entries.  Signs are decided
exactly: a symbolic zero test first, then interval evaluation on a
shrinking isolating interval.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = [
    "NumberField",
    "FieldElement",
    "QQ",
    "field_sign",
    "as_rational",
    "parse_rational",
    "parse_univariate",
    "format_univariate",
]


def as_rational(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not a rational: {x!r}")


def parse_rational(s: str) -> mpq:
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return mpq(int(num), int(den))
    return mpq(int(s))


def _fmt_q(q: mpq) -> str:
    q = mpq(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# --- univariate polynomials over Q, coefficient lists low -> high -----------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _peval(p, x):
    acc = mpq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pderiv(p):
    return _trim([k * p[k] for k in range(1, len(p))])


def _pdivmod(a, b):
    a = [mpq(c) for c in a]
    b = _trim(b)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        f = a[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
        a = _trim(a)
        if not a:
            break
    return _trim(q), _trim(a)


def _sturm_chain(p):
    chain = [_trim(p), _pderiv(p)]
    while chain[-1]:
        _, r = _pdivmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = []
    for q in chain:
        v = _peval(q, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def count_roots(p, lo, hi) -> int:
    """Number of distinct real roots of ``p`` in the half-open ``(lo, hi]``."""
    chain = _sturm_chain(p)
    return _sign_changes(chain, mpq(lo)) - _sign_changes(chain, mpq(hi))


_TERM_RE = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(?:([A-Za-z_]\w*)(?:\^(\d+))?)?$")


def parse_univariate(text: str, var: str) -> list:
    """Parse ``"1/2*a^2 - a + 3"`` into a low->high mpq coefficient list."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, mpq] = {}
    for sign, body in re.findall(r"([+-])([^+-]+)", s):
        m = _TERM_RE.match(body)
        if m is None or body == "":
            raise ValueError(f"cannot parse term {body!r} in {text!r}")
        c, v, e = m.groups()
        if c is None and v is None:
            raise ValueError(f"cannot parse term {body!r} in {text!r}")
        if v is not None and v != var:
            raise ValueError(f"unknown variable {v!r} (expected {var!r})")
        coef = parse_rational(c) if c is not None else mpq(1)
        if sign == "-":
            coef = -coef
        k = 0 if v is None else int(e) if e is not None else 1
        coeffs[k] = coeffs.get(k, mpq(0)) + coef
    if "".join(sign + body for sign, body in re.findall(r"([+-])([^+-]+)", s)) != s:
        raise ValueError(f"cannot parse {text!r}")
    deg = max(coeffs)
    return [coeffs.get(k, mpq(0)) for k in range(deg + 1)]


def format_univariate(coeffs, var: str) -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = mpq(coeffs[k])
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_q(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_fmt_q(mag)}*{mono}"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts) if parts else "0"


class NumberField:
    """The real field Q(a) for a root ``a`` of an irreducible polynomial.

    ``minpoly`` is a coefficient list (low -> high) or a string in ``x``;
    ``root_in`` is a pair of rationals bracketing exactly one real root.
    """

    def __init__(self, minpoly, root_in, *, check: bool = True):
        if isinstance(minpoly, str):
            minpoly = parse_univariate(minpoly, "x")
        poly = _trim([as_rational(c) for c in minpoly])
        if len(poly) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        # integer primitive form with positive leading coefficient
        den = math.lcm(*[int(c.denominator) for c in poly])
        ints = [int(c * den) for c in poly]
        g = math.gcd(*ints)
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        self.minpoly: tuple[int, ...] = tuple(ints)
        self.degree = len(ints) - 1
        lo, hi = (as_rational(root_in[0]), as_rational(root_in[1]))
        if lo > hi:
            raise ValueError("isolating interval must satisfy lo <= hi")
        monic = [mpq(c, ints[-1]) for c in ints]
        self._monic = monic
        if check:
            if self.degree > 1 and not _is_irreducible(ints):
                raise ValueError(f"{format_univariate(ints, 'x')} is reducible over Q")
            if lo == hi:
                if _peval(monic, lo) != 0:
                    raise ValueError("degenerate interval is not a root")
            elif count_roots(monic, lo, hi) != 1 or _peval(monic, lo) == 0:
                raise ValueError("interval must contain exactly one root")
        self.root_in = (lo, hi)
        if lo == hi or _peval(monic, lo) == 0:
            self._lo = self._hi = lo
        else:
            self._lo, self._hi = lo, hi
        # the root index makes two descriptions of the same embedding equal
        self.root_index = self._root_index()
        # a^k for k = deg .. 2deg-2 in the power basis
        red = []
        cur = [-c for c in monic[:-1]]
        for _ in range(max(self.degree - 1, 1)):
            red.append(tuple(cur))
            nxt = [mpq(0)] + cur[:-1]
            top = cur[-1]
            for i in range(self.degree):
                nxt[i] += top * (-monic[i])
            cur = nxt
        self._reduce = red
        self._refine(64)
        self._approx = float((self._lo + self._hi) / 2)
        self._key = (self.minpoly, self.root_index)

    def _root_index(self) -> int:
        if self.degree == 1:
            return 0
        # roots strictly below the isolating interval
        big = 1 + max(abs(c) for c in self._monic[:-1])
        return count_roots(self._monic, -big - 1, self._lo) if self._lo != self._hi else (
            count_roots(self._monic, -big - 1, self._lo) - 1)

    def _refine(self, bits: int) -> None:
        if self._lo == self._hi:
            return
        target = (self._hi - self._lo) / mpq(2) ** bits
        p = self._monic
        slo = _peval(p, self._lo) > 0
        while self._hi - self._lo > target:
            mid = (self._lo + self._hi) / 2
            v = _peval(p, mid)
            if v == 0:
                self._lo = self._hi = mid
                return
            if (v > 0) == slo:
                self._lo = mid
            else:
                self._hi = mid

    @property
    def interval(self) -> tuple[mpq, mpq]:
        return self._lo, self._hi

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return FieldElement(self, (mpq(-self.minpoly[0], self.minpoly[1]),))
        return FieldElement(self, tuple(mpq(int(k == 1)) for k in range(self.degree)))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to another field")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (list, tuple)):
            coeffs = [as_rational(c) for c in value]
            if self.degree == 1 or len(coeffs) > self.degree:
                return self._from_poly(coeffs)
            coeffs += [mpq(0)] * (self.degree - len(coeffs))
            return FieldElement(self, tuple(coeffs))
        q = as_rational(value)
        return FieldElement(self, (q,) + (mpq(0),) * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return FieldElement(self, (mpq(0),) * self.degree)

    def one(self) -> "FieldElement":
        return self(1)

    def _from_poly(self, coeffs) -> "FieldElement":
        """Reduce an arbitrary-length power-basis vector modulo the minpoly."""
        c = [as_rational(x) for x in coeffs]
        if self.degree == 1:
            root = mpq(-self.minpoly[0], self.minpoly[1])
            return FieldElement(self, (_peval(c, root),))
        _, r = _pdivmod(c, self._monic)
        r = r + [mpq(0)] * (self.degree - len(r))
        return FieldElement(self, tuple(r))

    def parse(self, text: str) -> "FieldElement":
        return self._from_poly(parse_univariate(text, "a"))

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return (f"NumberField({format_univariate(self.minpoly, 'x')!r}, "
                f"root~{self._approx:.6g})")

    def describe(self) -> dict:
        """Literal form used in slope files."""
        return {
            "minpoly": format_univariate(self.minpoly, "x"),
            "root_in": [_fmt_q(self.root_in[0]), _fmt_q(self.root_in[1])],
        }


def _is_irreducible(ints) -> bool:
    from sympy import Poly, symbols

    x = symbols("x")
    p = Poly(list(reversed(ints)), x)
    return p.is_irreducible


QQ = NumberField([0, 1], (0, 0))


class FieldElement:
    """Immutable element of a :class:`NumberField`."""

    __slots__ = ("field", "c", "_hash")

    def __init__(self, field: NumberField, coeffs: tuple):
        self.field = field
        self.c = coeffs
        self._hash = None

    # -- construction helpers ------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                if other.field.degree == 1 and other.field == QQ:
                    return self.field(other.c[0])
                if self.field.degree == 1 and self.field == QQ:
                    return None
                raise ValueError("mixing elements of different fields")
            return other
        try:
            return self.field(as_rational(other))
        except TypeError:
            return None

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other.__radd__(self)
            return NotImplemented
        return FieldElement(self.field, tuple(x + y for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.c))

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other.__rsub__(self)
            return NotImplemented
        return FieldElement(self.field, tuple(x - y for x, y in zip(self.c, o.c)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, mpq)) and not isinstance(other, bool):
            q = mpq(other)
            return FieldElement(self.field, tuple(x * q for x in self.c))
        o = self._coerce(other)
        if o is None:
            if isinstance(other, FieldElement):
                return other.__rmul__(self)
            return NotImplemented
        n = self.field.degree
        if n == 1:
            return FieldElement(self.field, (self.c[0] * o.c[0],))
        if n == 2:
            a0, a1 = self.c
            b0, b1 = o.c
            r0, r1 = self.field._reduce[0]
            t = a1 * b1
            return FieldElement(self.field, (a0 * b0 + t * r0, a0 * b1 + a1 * b0 + t * r1))
        prod = [mpq(0)] * (2 * n - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    if y:
                        prod[i + j] += x * y
        out = prod[:n]
        for k in range(n, 2 * n - 1):
            t = prod[k]
            if t:
                red = self.field._reduce[k - n]
                for i in range(n):
                    out[i] += t * red[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        n = self.field.degree
        if n == 1:
            return FieldElement(self.field, (1 / self.c[0],))
        if n == 2:
            # (x + y a)(x + y a') = norm, a' the conjugate root
            x, y = self.c
            r0, r1 = self.field._reduce[0]  # a^2 = r0 + r1 a
            # conjugate of a is r1 - a
            cx, cy = x + y * r1, -y
            norm = x * cx + y * cy * r0
            return FieldElement(self.field, (cx / norm, cy / norm))
        # extended Euclid on (element polynomial, minpoly)
        r0_, r1_ = list(self.field._monic), _trim(list(self.c))
        s0, s1 = [], [mpq(1)]
        while len(r1_) > 1:
            q, r = _pdivmod(r0_, r1_)
            r0_, r1_ = r1_, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        inv = [c / r1_[0] for c in s1]
        return self.field._from_poly(inv)

    def __truediv__(self, other):
        if isinstance(other, (int, mpq)) and not isinstance(other, bool):
            q = mpq(other)
            return FieldElement(self.field, tuple(x / q for x in self.c))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if self.field == other.field:
                return self.c == other.c
            return (self.is_rational() and other.is_rational()
                    and self.c[0] == other.c[0])
        try:
            q = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.c[0] == q and not any(self.c[1:])

    def __hash__(self):
        if self._hash is None:
            if not any(self.c[1:]):
                self._hash = hash(self.c[0])
            else:
                self._hash = hash((self.field, self.c))
        return self._hash

    def sign(self) -> int:
        return field_sign(self)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversions ------------------------------------------------------------------
    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def rational(self) -> mpq:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.c[0]

    def __float__(self):
        x = self.field._approx
        acc = 0.0
        for c in reversed(self.c):
            acc = acc * x + float(c)
        return acc

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.c[0])
        f = math.floor(float(self))
        while (self - f).sign() < 0:
            f -= 1
        while (self - (f + 1)).sign() >= 0:
            f += 1
        return f

    def ceil(self) -> int:
        return -((-self).floor())

    def is_integer(self) -> bool:
        return self.is_rational() and self.c[0].denominator == 1

    def __str__(self):
        if self.field.degree == 1:
            return _fmt_q(self.c[0])
        return format_univariate(self.c, "a")

    def __repr__(self):
        return f"FieldElement({str(self)!r})"


def _pmul(a, b):
    if not a or not b:
        return []
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [mpq(0)] * (n - len(a))
    b = list(b) + [mpq(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _interval_eval(coeffs, lo, hi):
    alo = ahi = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        ps = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(ps) + c, max(ps) + c
    return alo, ahi


def field_sign(x: FieldElement) -> int:
    """Exact sign (-1, 0, 1) of the real embedding of ``x``."""
    c = x.c
    if not any(c[1:]):
        v = c[0]
        return (v > 0) - (v < 0)
    field = x.field
    # float filter: trust the double value when it clears a generous error bound
    r = abs(field._approx)
    approx = size = 0.0
    for q in reversed(c):
        f = float(q)
        approx = approx * field._approx + f
        size = size * r + abs(f)
    if abs(approx) > 1e-9 * size:
        return 1 if approx > 0 else -1
    while True:
        lo, hi = _interval_eval(c, field._lo, field._hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if field._lo == field._hi:
            return 0  # unreachable for an irreducible minpoly of degree > 1
        field._refine(32)
