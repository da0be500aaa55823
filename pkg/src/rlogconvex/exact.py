"""Exact univariate polynomials and rational functions over the rationals.

Rationals are :class:`fractions.Fraction`.  Polynomials are immutable
coefficient tuples in increasing degree.  The module also provides Sturm
sequence root counting and :func:`positivity_threshold`, the workhorse that
turns "f(n) > 0 for all n >= N" claims into an exact minimal ``N``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence, Union

from .errors import NeverPositive

Number = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def format_rational(x: Fraction) -> str:
    """Render as ``p/q`` (always with a denominator)."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Poly:
    """Polynomial in one variable (written ``n``) with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c: Number) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "Poly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number], lead: Number = 1) -> "Poly":
        p = cls([lead])
        for r in roots:
            p = p * cls([-as_fraction(r), 1])
        return p

    # basic queries

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "n" if i == 1 else f"n^{i}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # ring operations

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            q = c / lead
            quot[i - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= q * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, j: Number) -> "Poly":
        """Return ``p(n + j)``."""
        j = as_fraction(j)
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * Poly([j, 1]) + c
        return result

    def compose(self, other: "Poly") -> "Poly":
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with self/c a primitive integer polynomial."""
        if not self.coeffs:
            return Fraction(1)
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(gcd, (c.numerator * (den // c.denominator) for c in self.coeffs), 0)
        return Fraction(num, den)

    def primitive(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.content())

    def integer_coeffs(self) -> list[int]:
        """Coefficients of the primitive integer multiple with the same sign."""
        p = self.primitive()
        return [int(c) for c in p.coeffs]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (the zero polynomial if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = b.primitive()
    return a.monic()


N = Poly([0, 1])


class RationalFunction:
    """Reduced quotient num/den of polynomials in ``n``.

    Normal form: num and den are coprime integer polynomials with the content
    of the pair removed and ``den`` having positive leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _normalized: bool = False):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly([den])
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, p: Poly) -> "RationalFunction":
        return cls(p)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, x: Number) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num(x) / d

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __str__(self) -> str:
        if self.den == Poly([1]):
            return str(self.num)
        return f"({self.num})/({self.den})"

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, e: int) -> "RationalFunction":
        if e < 0:
            return self.reciprocal() ** (-e)
        return RationalFunction(self.num ** e, self.den ** e, _normalized=True)

    def shift(self, j: Number) -> "RationalFunction":
        """Return ``f(n + j)``."""
        return RationalFunction(self.num.shift(j), self.den.shift(j), _normalized=True)

    def sign_at_infinity(self) -> int:
        if self.is_zero():
            return 0
        return 1 if self.num.lc * self.den.lc > 0 else -1


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if num.is_zero():
        return Poly(), Poly([1])
    g = poly_gcd(num, den)
    if g.degree > 0:
        num = num.exact_div(g)
        den = den.exact_div(g)
    scale = Fraction(1)
    if den.lc < 0:
        scale = -scale
    # clear denominators of both, then remove the joint integer content
    dens = [c.denominator for c in num.coeffs + den.coeffs]
    scale *= reduce(lcm, dens, 1)
    num, den = num * scale, den * scale
    g = reduce(gcd, (int(c) for c in num.coeffs + den.coeffs), 0)
    if g > 1:
        num, den = num * Fraction(1, g), den * Fraction(1, g)
    return num, den


# -- Sturm sequences ---------------------------------------------------------

def _int_poly(p: Poly) -> list[int]:
    return p.integer_coeffs()


def _strip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _primitive_int(a: list[int]) -> list[int]:
    g = reduce(gcd, a, 0)
    if g > 1:
        a = [c // g for c in a]
    return a


def _neg_prem(a: list[int], b: list[int]) -> list[int]:
    """A positive multiple of -(a mod b), made primitive."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    scale = abs(lb)
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        c = a[-1]
        # a <- |lb|*a - sign(lb)*c*x^(da-db)*b ; kills the leading term
        s = 1 if lb > 0 else -1
        a = [scale * x for x in a]
        for j, bj in enumerate(b):
            a[da - db + j] -= s * c * bj
        _strip(a)
        if a:
            a = _primitive_int(a)
    return _primitive_int([-x for x in a]) if a else []


def sturm_chain(p: Poly) -> list[list[int]]:
    """Sturm sequence of the square-free part of ``p`` as integer polys."""
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    sqf = square_free_part(p)
    p0 = _int_poly(sqf)
    p1 = _int_poly(sqf.derivative()) if sqf.degree > 0 else []
    chain = [p0]
    if not p1:
        return chain
    chain.append(p1)
    while True:
        nxt = _neg_prem(chain[-2], chain[-1])
        if not nxt:
            break
        chain.append(nxt)
    return chain


def square_free_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.primitive()
    g = poly_gcd(p, p.derivative())
    if g.degree > 0:
        p = p.exact_div(g)
    return p.primitive()


def _sign_at(a: list[int], x: Fraction) -> int:
    """Sign of integer polynomial ``a`` at rational ``x`` (exact, homogenised)."""
    p, q = x.numerator, x.denominator
    acc = 0
    qp = 1
    # sum a_i p^i q^(d-i), evaluated by Horner in p with q-powers
    for c in reversed(a):
        acc = acc * p + c * qp
        qp *= q
    return (acc > 0) - (acc < 0)


def _sign_near(a: list[int], x: Fraction, side: int) -> int:
    """Sign of ``a`` on a small interval to the right (+1) or left (-1) of x."""
    poly = a
    k = 0
    while poly:
        s = _sign_at(poly, x)
        if s:
            return s * (side ** k)
        poly = [i * c for i, c in enumerate(poly)][1:]
        k += 1
    return 0


def _variations(signs: Iterable[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _count_open(chain: Sequence[list[int]], lo: Fraction, hi: Fraction) -> int:
    v_lo = _variations(_sign_near(a, lo, +1) for a in chain)
    v_hi = _variations(_sign_near(a, hi, -1) for a in chain)
    return v_lo - v_hi


def real_roots_in(p: Poly, lo: Number, hi: Number, open: bool = False) -> int:
    """Number of distinct real roots of ``p`` in [lo, hi] (or (lo, hi) if open)."""
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.is_zero():
        raise ValueError("real_roots_in: zero polynomial")
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo > hi:
        return 0
    if lo == hi:
        return 0 if open else int(p(lo) == 0)
    chain = sturm_chain(p)
    count = _count_open(chain, lo, hi)
    if not open:
        count += int(p(lo) == 0) + int(p(hi) == 0)
    return count


def cauchy_bound(p: Poly) -> Fraction:
    """Every real root x of p satisfies |x| < cauchy_bound(p)."""
    lead = abs(p.lc)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly, lo: Number, hi: Number,
                       max_width: Fraction = Fraction(1, 2)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals, each holding exactly one distinct root in (lo, hi).

    An interval ``(a, a)`` denotes the exact rational root ``a``; otherwise
    the root lies strictly inside ``(a, b)`` and ``b - a < max_width``.
    """
    lo, hi = as_fraction(lo), as_fraction(hi)
    chain = sturm_chain(p)
    sqf = chain[0]
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(lo, hi, _count_open(chain, lo, hi))]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1 and b - a < max_width:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        if _sign_at(sqf, mid) == 0:
            out.append((mid, mid))
            left = _count_open(chain, a, mid)
            stack.append((a, mid, left))
            stack.append((mid, b, cnt - left - 1))
        else:
            left = _count_open(chain, a, mid)
            stack.append((a, mid, left))
            stack.append((mid, b, cnt - left))
    out.sort()
    return out


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _taylor_shift(a: list[int], m: int) -> list[int]:
    """Coefficients of a(x + m) (integer Horner scheme, O(deg^2))."""
    b = list(a)
    n = len(b)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            b[j] += m * b[j + 1]
    return b


def _budan(a: list[int], m: int) -> int:
    """Sign variations of a(x + m); bounds the roots in (m, oo) by Budan-Fourier."""
    return _variations((c > 0) - (c < 0) for c in _taylor_shift(a, m))


def _eval_int(a: list[int], m: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * m + c
    return acc


def _last_nonpositive(a: list[int], lo: int, hi: int, v_lo: int, v_hi: int) -> int | None:
    """Largest integer m in [lo, hi) with a(m) <= 0, given a(hi) > 0."""
    if v_lo == v_hi:
        # no root in (lo, hi]: a keeps the sign of a(hi) there
        return lo if _eval_int(a, lo) <= 0 else None
    if hi - lo <= 16:
        for m in range(hi - 1, lo - 1, -1):
            if _eval_int(a, m) <= 0:
                return m
        return None
    mid = (lo + hi) // 2
    v_mid = _budan(a, mid)
    if _eval_int(a, mid) <= 0:
        found = _last_nonpositive(a, mid, hi, v_mid, v_hi) if hi - mid > 1 else None
        return found if found is not None and found > mid else mid
    found = _last_nonpositive(a, mid, hi, v_mid, v_hi)
    if found is not None:
        return found
    return _last_nonpositive(a, lo, mid, v_lo, v_mid)


def positivity_threshold(f) -> int:
    """Minimal integer N >= 0 with den(m) != 0 and f(m) > 0 for all integers m >= N.

    ``f`` may be a :class:`RationalFunction` or a :class:`Poly`.  Raises
    :class:`NeverPositive` when f is eventually nonpositive.  Works on the
    integer polynomial num*den: an exponential search finds a shift past all
    real roots (no sign variation after Taylor shift), then Budan-Fourier
    counts prune root-free integer ranges of the downward scan.
    """
    if isinstance(f, Poly):
        f = RationalFunction(f)
    if f.is_zero():
        raise NeverPositive("the zero function is never positive")
    # f(m) > 0 with den(m) != 0  <=>  num(m)*den(m) > 0
    prod = f.num * f.den
    if prod.lc <= 0:
        raise NeverPositive(f"eventually nonpositive: {f}")
    a = _int_poly(prod)
    if len(a) == 1:
        return 0
    hi = 0
    while True:
        v_hi = _budan(a, hi)
        if v_hi == 0 and a and _eval_int(a, hi) > 0:
            break
        hi = 2 * hi + 1
    if hi == 0:
        return 0
    worst = _last_nonpositive(a, 0, hi, _budan(a, 0), 0)
    return 0 if worst is None else worst + 1
