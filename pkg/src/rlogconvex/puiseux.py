"""Truncated Puiseux series in descending fractional powers of n.

A :class:`PuiseuxSeries` with ramification ``rho``, coefficients ``c_k`` and
truncation index ``K`` stands for

    sum_{k <= K} c_k * n**(-k/rho)  +  o(n**(-K/rho))      (n -> infinity).

Negative keys are growing terms, so ``(3/4) n^3 + ...`` fits as well as
``1 + 3/(2 n^2) + ...``.  Truncation is tracked pessimistically: every
operation returns the largest K it can vouch for and never more.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping

from .errors import DivergentComposition, NonPositiveLeading, NotInvertible, ZeroDeviation
from .exact import Poly, RationalFunction, as_fraction


def binomial(q: Fraction, m: int) -> Fraction:
    """Generalised binomial coefficient C(q, m)."""
    out = Fraction(1)
    for i in range(m):
        out = out * (q - i) / (i + 1)
    return out


def _exact_root(x: Fraction, e: int) -> Fraction | None:
    """The rational e-th root of x >= 0 if it exists."""
    def iroot(v: int) -> int | None:
        if v < 2:
            return v
        r = round(v ** (1.0 / e)) if v.bit_length() < 1000 else None
        if r is None:
            lo, hi = 0, 1 << (v.bit_length() // e + 1)
            while lo < hi:
                mid = (lo + hi + 1) // 2
                if mid ** e <= v:
                    lo = mid
                else:
                    hi = mid - 1
            r = lo
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** e == v:
                return cand
        return None

    p, q = iroot(x.numerator), iroot(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def rational_power(c: Fraction, q: Fraction) -> Fraction:
    """c**q computed exactly; raises if the result is not rational."""
    if q.denominator == 1:
        return c ** int(q)
    if c <= 0:
        raise NonPositiveLeading(f"fractional power {q} of nonpositive {c}")
    root = _exact_root(c, q.denominator)
    if root is None:
        raise NonPositiveLeading(f"{c}^({q}) is not rational")
    return root ** q.numerator


class PuiseuxSeries:
    """Immutable truncated Puiseux series (see module docstring)."""

    __slots__ = ("rho", "coeffs", "K")

    def __init__(self, rho: int, coeffs: Mapping[int, object], K: int):
        if rho < 1:
            raise ValueError("ramification must be >= 1")
        self.rho = int(rho)
        self.K = int(K)
        self.coeffs = {int(k): as_fraction(c) for k, c in coeffs.items()
                       if k <= K and as_fraction(c) != 0}

    # constructors

    @classmethod
    def zero(cls, K: int, rho: int = 1) -> "PuiseuxSeries":
        return cls(rho, {}, K)

    @classmethod
    def constant(cls, c, K: int, rho: int = 1) -> "PuiseuxSeries":
        return cls(rho, {0: c}, K)

    @classmethod
    def monomial(cls, exponent, K: int, c=1, rho: int = 1) -> "PuiseuxSeries":
        """c * n**exponent; rho is enlarged to represent the exponent."""
        exponent = as_fraction(exponent)
        r = lcm(rho, exponent.denominator)
        key = -exponent * r
        return cls(r, {int(key): c}, K * (r // rho))

    @classmethod
    def from_poly(cls, p: Poly, K: int, rho: int = 1) -> "PuiseuxSeries":
        """Exact polynomial in n; K is the truncation (in units of 1/rho)."""
        return cls(rho, {-i * rho: c for i, c in enumerate(p.coeffs)}, K)

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Fraction, object]], K=None) -> "PuiseuxSeries":
        """Build from (exponent, coefficient) pairs; K defaults to the lowest exponent."""
        terms = [(as_fraction(e), as_fraction(c)) for e, c in terms]
        rho = lcm(1, *(e.denominator for e, _ in terms)) if terms else 1
        coeffs: dict[int, Fraction] = {}
        for e, c in terms:
            k = int(-e * rho)
            coeffs[k] = coeffs.get(k, Fraction(0)) + c
        if K is None:
            K = max(coeffs, default=0)
        return cls(rho, coeffs, K)

    # queries

    @property
    def k_min(self) -> int:
        """Index of the first nonzero coefficient (K for the zero series)."""
        return min(self.coeffs) if self.coeffs else self.K

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        if k > self.K:
            raise IndexError(f"coefficient {k} is beyond truncation {self.K}")
        return self.coeffs.get(k, Fraction(0))

    def exponent(self, k: int) -> Fraction:
        return Fraction(-k, self.rho)

    @property
    def order(self) -> Fraction:
        """The o(n^-order) error exponent, i.e. K/rho."""
        return Fraction(self.K, self.rho)

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the first nonzero term."""
        if not self.coeffs:
            raise ZeroDeviation("leading term of a series that vanishes to its truncation")
        k = self.k_min
        return self.exponent(k), self.coeffs[k]

    def terms(self) -> list[tuple[Fraction, Fraction]]:
        """(exponent, coefficient) pairs in decreasing exponent order."""
        return [(self.exponent(k), self.coeffs[k]) for k in sorted(self.coeffs)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        r = lcm(self.rho, other.rho)
        a, b = self.lift(r // self.rho), other.lift(r // other.rho)
        return a.K == b.K and a.coeffs == b.coeffs

    def __hash__(self) -> int:
        return hash((self.rho, self.K, tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other: "PuiseuxSeries") -> bool:
        """Equal as functions up to the smaller of the two truncations."""
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return f"PuiseuxSeries({self})"

    def __str__(self) -> str:
        return render(self)

    # lattice changes

    def lift(self, m: int) -> "PuiseuxSeries":
        """Same series written over ramification m*rho."""
        if m == 1:
            return self
        return PuiseuxSeries(self.rho * m, {k * m: c for k, c in self.coeffs.items()}, self.K * m)

    def reduce(self) -> "PuiseuxSeries":
        """Smallest ramification able to hold the same data."""
        from math import gcd
        g = self.rho
        for k in self.coeffs:
            g = gcd(g, k)
        g = gcd(g, self.K)
        if g <= 1:
            return self
        return PuiseuxSeries(self.rho // g, {k // g: c for k, c in self.coeffs.items()}, self.K // g)

    def truncate(self, k: int) -> "PuiseuxSeries":
        if k > self.K:
            raise IndexError(f"cannot truncate at {k} beyond {self.K}")
        return PuiseuxSeries(self.rho, self.coeffs, k)

    def with_truncation(self, K: int) -> "PuiseuxSeries":
        """Reinterpret the stored terms as exact through index K (for finite data)."""
        return PuiseuxSeries(self.rho, self.coeffs, K)

    # arithmetic

    def _align(self, other: "PuiseuxSeries"):
        r = lcm(self.rho, other.rho)
        return self.lift(r // self.rho), other.lift(r // other.rho)

    def _coerce(self, other):
        if isinstance(other, PuiseuxSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return PuiseuxSeries(self.rho, {0: other}, self.K)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        K = min(a.K, b.K)
        out = dict(a.coeffs)
        for k, c in b.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return PuiseuxSeries(a.rho, out, K)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.rho, {k: -c for k, c in self.coeffs.items()}, self.K)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "PuiseuxSeries":
        c = as_fraction(c)
        return PuiseuxSeries(self.rho, {k: v * c for k, v in self.coeffs.items()}, self.K)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = self._align(other)
        K = min(a.K + b.k_min, b.K + a.k_min)
        out: dict[int, Fraction] = {}
        for i, x in a.coeffs.items():
            for j, y in b.coeffs.items():
                k = i + j
                if k <= K:
                    out[k] = out.get(k, Fraction(0)) + x * y
        return PuiseuxSeries(a.rho, out, K)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / as_fraction(other))
        return self * ps_reciprocal(other)

    def __rtruediv__(self, other):
        return ps_reciprocal(self) * other

    def __pow__(self, q):
        return ps_pow(self, q)

    def shift(self, j: int) -> "PuiseuxSeries":
        return ps_shift(self, j)

    # evaluation

    def evaluate_at_root(self, m) -> Fraction:
        """Exact value of the truncated sum at n = m**rho."""
        m = as_fraction(m)
        return sum((c * m ** (-k) for k, c in self.coeffs.items()), Fraction(0))

    def evaluate(self, n) -> float:
        """Float value of the truncated sum at n > 0."""
        n = float(n)
        return sum(float(c) * n ** (-k / self.rho) for k, c in self.coeffs.items())

    def evaluate_exact(self, n) -> Fraction:
        """Exact value at rational n; requires rho == 1."""
        if self.rho != 1:
            raise ValueError("exact evaluation needs rho == 1; use evaluate_at_root")
        return self.evaluate_at_root(n)

    def to_rational_function(self) -> RationalFunction:
        """The finite sum as a rational function of n (rho must be 1)."""
        if self.rho != 1:
            raise ValueError("only rho == 1 series are rational functions of n")
        if not self.coeffs:
            return RationalFunction(Poly())
        top = max(max(self.coeffs), 0)
        # sum c_k n^-k = (sum c_k n^(top-k)) / n^top
        num = Poly.monomial(0, 0)
        for k, c in self.coeffs.items():
            num = num + Poly.monomial(top - k, c)
        return RationalFunction(num, Poly.monomial(top))


def _small_part(a: PuiseuxSeries) -> tuple[int, Fraction, PuiseuxSeries]:
    """Write a = c n^(-v/rho) (1 + u) with u -> 0.  Returns (v, c, u)."""
    if a.is_zero():
        raise NotInvertible("series vanishes to its truncation")
    v = a.k_min
    c = a.coeffs[v]
    u = PuiseuxSeries(a.rho, {k - v: x / c for k, x in a.coeffs.items() if k != v}, a.K - v)
    return v, c, u


def compose_taylor(u: PuiseuxSeries, coeff: Callable[[int], Fraction],
                   start: int = 0) -> PuiseuxSeries:
    """sum_{j >= start} coeff(j) * u**j for u -> 0, truncated at u.K."""
    if u.coeffs and u.k_min <= 0:
        raise DivergentComposition("composition argument does not tend to 0")
    K = u.K
    out = PuiseuxSeries(u.rho, {0: coeff(0)} if start == 0 else {}, K)
    if u.is_zero():
        return out
    power = PuiseuxSeries(u.rho, {0: 1}, K)
    j = 0
    while True:
        j += 1
        power = power * u
        power = PuiseuxSeries(u.rho, power.coeffs, K)
        if power.is_zero() or power.k_min > K:
            break
        if j >= start:
            cj = coeff(j)
            if cj:
                out = out + power.scale(cj)
    return PuiseuxSeries(u.rho, out.coeffs, K)


def ps_add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a + b


def ps_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def ps_reciprocal(a: PuiseuxSeries) -> PuiseuxSeries:
    """1/a, relative precision preserved (absolute index K - 2 v)."""
    try:
        v, c, u = _small_part(a)
    except NotInvertible:
        raise NotInvertible("reciprocal of a series with no nonzero coefficient") from None
    geom = compose_taylor(u, lambda j: Fraction((-1) ** j))
    # 1/a = (1/c) n^(v/rho) * geom
    return PuiseuxSeries(a.rho, {k - v: x / c for k, x in geom.coeffs.items()}, geom.K - v)


def ps_shift(a: PuiseuxSeries, j: int) -> PuiseuxSeries:
    """The series of n -> a(n + j)."""
    if j == 0:
        return a
    j = as_fraction(j)
    rho, K = a.rho, a.K
    out: dict[int, Fraction] = {}
    for k, c in a.coeffs.items():
        # (n+j)^(-k/rho) = n^(-k/rho) * sum_m C(-k/rho, m) j^m n^-m
        q = Fraction(-k, rho)
        m = 0
        term = Fraction(1)
        jm = Fraction(1)
        while k + m * rho <= K:
            if term == 0:
                break
            idx = k + m * rho
            out[idx] = out.get(idx, Fraction(0)) + c * term * jm
            term = term * (q - m) / (m + 1)
            jm *= j
            m += 1
    return PuiseuxSeries(rho, out, K)


def ps_pow(a: PuiseuxSeries, q) -> PuiseuxSeries:
    """a**q by the binomial series; q rational."""
    q = as_fraction(q)
    if q == 0:
        return PuiseuxSeries(a.rho, {0: 1}, a.K - a.k_min if a.coeffs else a.K)
    v, c, u = _small_part(a)
    if q.denominator != 1 and c <= 0:
        raise NonPositiveLeading(f"fractional power {q} needs a positive leading coefficient")
    lead = rational_power(c, q)
    body = compose_taylor(u, lambda m: binomial(q, m))
    # leading exponent -q*v/rho may need a finer lattice
    lead_exp = -q * Fraction(v, a.rho)
    r = lcm(a.rho, lead_exp.denominator)
    body = body.lift(r // a.rho)
    shift_key = int(-lead_exp * r)
    return PuiseuxSeries(r, {k + shift_key: x * lead for k, x in body.coeffs.items()},
                         body.K + shift_key)


def ps_log1p(a: PuiseuxSeries) -> PuiseuxSeries:
    """log(1 + a) for a -> 0."""
    if a.coeffs and a.k_min <= 0:
        raise DivergentComposition("log1p argument does not tend to 0")
    return compose_taylor(a, lambda j: Fraction((-1) ** (j + 1), j) if j else Fraction(0), start=1)


def ps_exp(a: PuiseuxSeries) -> PuiseuxSeries:
    """exp(a) for a -> 0."""
    if a.coeffs and a.k_min <= 0:
        raise DivergentComposition("exp argument does not tend to 0")
    fact = [Fraction(1)]

    def coeff(j: int) -> Fraction:
        while len(fact) <= j:
            fact.append(fact[-1] / len(fact))
        return fact[j]

    return compose_taylor(a, coeff)


def _fmt_exp(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"


def render(s: PuiseuxSeries, decimal: int | None = None) -> str:
    """Text form ``c0*n^(p0) + c1*n^(p1) + ... + O(n^(-K/rho))``."""
    parts = []
    for e, c in s.terms():
        txt = f"{c}*n^({_fmt_exp(e)})"
        if decimal is not None:
            txt += f" [~{float(c):.{decimal}g}]"
        parts.append(txt)
    parts.append(f"O(n^({_fmt_exp(-s.order)}))")
    return " + ".join(parts)
