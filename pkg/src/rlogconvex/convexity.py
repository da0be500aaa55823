"""Asymptotic r-log-convexity from the series of s_n = a_n a_{n+2} / a_{n+1}^2.

``lemma_transform`` maps the series of s_n for a sequence to the series of
the same quantity for ``L a_n = a_n a_{n+2} - a_{n+1}^2``; ``asymptotic_r``
turns the leading deviation ``c n^-alpha`` and the truncation order ``beta``
into the order r of asymptotic log-convexity that they guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import floor

from .errors import InsufficientTruncation, ZeroDeviation
from .puiseux import PuiseuxSeries, ps_shift, render


class Direction(str, Enum):
    LOG_CONVEX = "LogConvex"
    LOG_CONCAVE = "LogConcave"


@dataclass(frozen=True)
class ConvexityReport:
    alpha: Fraction
    c: Fraction
    beta: Fraction
    r_asymptotic: int
    direction: Direction
    unbounded: bool = False

    def describe(self, decimal: int | None = None) -> str:
        c = f"{self.c}" + (f" [~{float(self.c):.{decimal}g}]" if decimal else "")
        lines = [f"alpha = {self.alpha}", f"c = {c}", f"beta = {self.beta}",
                 f"direction = {self.direction.value}"]
        if self.direction is Direction.LOG_CONCAVE:
            lines.append("r = 0 (eventually log-concave; not certified)")
        elif self.unbounded:
            lines.append(f"r = {self.r_asymptotic} at this truncation "
                         "(Unbounded-at-this-truncation: r grows without bound as K grows)")
        else:
            lines.append(f"r = {self.r_asymptotic}")
        return "\n".join(lines)


def _constant_one(s: PuiseuxSeries):
    if s.K < 0 or s.coeff(0) != 1 or any(k < 0 for k in s.coeffs):
        raise ValueError("expected a series of the form 1 + o(1)")


def deviation(s: PuiseuxSeries) -> PuiseuxSeries:
    """s - 1, checked to be nonzero within the truncation."""
    _constant_one(s)
    dev = s - 1
    if dev.is_zero():
        raise ZeroDeviation(f"s - 1 vanishes to order n^(-{s.order})")
    return dev


def lemma_transform(s: PuiseuxSeries) -> PuiseuxSeries:
    """Series of s'_n = s_{n+1}^2 (s_n - 1)(s_{n+2} - 1) / (s_{n+1} - 1)^2."""
    dev = deviation(s)
    s1 = ps_shift(s, 1)
    d1 = ps_shift(dev, 1)
    d2 = ps_shift(dev, 2)
    out = s1 * s1 * (dev * d2 / (d1 * d1))
    return out


def lemma_identity(a: tuple) -> tuple[Fraction, Fraction]:
    """Both sides of the relation for five consecutive terms a_0..a_4.

    direct: (La_0)(La_2) / (La_1)^2 computed from L-values;
    via_s:  s_1^2 (s_0 - 1)(s_2 - 1) / (s_1 - 1)^2 with s_k = a_k a_{k+2}/a_{k+1}^2.
    """
    a = [Fraction(x) for x in a]
    L = [a[k] * a[k + 2] - a[k + 1] ** 2 for k in range(3)]
    s = [a[k] * a[k + 2] / a[k + 1] ** 2 for k in range(3)]
    direct = L[0] * L[2] / L[1] ** 2
    via_s = s[1] ** 2 * (s[0] - 1) * (s[2] - 1) / (s[1] - 1) ** 2
    return direct, via_s


def r_from_exponents(alpha: Fraction, beta: Fraction) -> int:
    """Order guaranteed by leading exponent alpha and truncation beta."""
    if alpha < 2:
        return floor(beta / alpha)
    return floor((beta - alpha) / 2) + 1


def asymptotic_r(s: PuiseuxSeries, extendable: bool = False) -> ConvexityReport:
    """Criterion for s_n = 1 + c n^-alpha + ... + o(n^-beta).

    ``extendable`` marks series that can be recomputed at any truncation
    (as for P-recursive input), so r is reported as growing with K.
    """
    try:
        dev = deviation(s)
    except ZeroDeviation as exc:
        raise InsufficientTruncation(str(exc), level=1) from None
    alpha, c = dev.leading()
    alpha = -alpha
    beta = s.order
    if c < 0:
        return ConvexityReport(alpha, c, beta, 0, Direction.LOG_CONCAVE, extendable)
    return ConvexityReport(alpha, c, beta, r_from_exponents(alpha, beta),
                           Direction.LOG_CONVEX, extendable)


def s_tower(s: PuiseuxSeries, r: int) -> list[PuiseuxSeries]:
    """[s^(1), ..., s^(r)] with s^(i+1) = lemma_transform(s^(i))."""
    if r < 1:
        raise ValueError("r must be positive")
    out = [s]
    for level in range(1, r):
        try:
            out.append(lemma_transform(out[-1]))
        except ZeroDeviation as exc:
            raise ZeroDeviation(f"level {level}: {exc}", level=level) from None
    try:
        deviation(out[-1])
    except ZeroDeviation as exc:
        raise ZeroDeviation(f"level {r}: {exc}", level=r) from None
    return out


def describe_tower(tower: list[PuiseuxSeries]) -> str:
    return "\n".join(f"s^({i}) = {render(t)}" for i, t in enumerate(tower, start=1))
