"""Asymptotics of the term ratio a(n+1)/a(n) computed from the recurrence.

The dominant balance of ``sum p_i(n) a(n+i) = 0`` under ``a(n+1)/a(n) ~ C n^theta``
is read off the Newton polygon of the points ``(i, deg p_i)``.  The full
ratio expansion ``n^theta * (C + c_1 n^(-1/rho) + ...)`` is then solved order
by order, and ``s_n = a_n a_{n+2} / a_{n+1}^2`` follows as a series.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import (DegenerateOrder, DominanceAmbiguous, IrrationalOrComplexBranch,
                     RamificationExceeded, UnsupportedInput)
from .exact import Poly, cauchy_bound
from .puiseux import PuiseuxSeries, ps_pow, ps_shift, render
from .recurrence import Recurrence, SequenceValues, evaluate_terms

log = logging.getLogger(__name__)

RHO_MAX = 6


@dataclass(frozen=True)
class Branch:
    theta: Fraction
    C: Fraction
    multiplicity: int = 1

    def __str__(self) -> str:
        mult = f" (multiplicity {self.multiplicity})" if self.multiplicity > 1 else ""
        return f"theta={self.theta}, C={self.C}{mult}"


@dataclass(frozen=True)
class RatioExpansion:
    """a(n+1)/a(n) = n^theta * tail(n) * (1 + o(n^(-K/rho)))."""

    theta: Fraction
    tail: PuiseuxSeries

    @property
    def C(self) -> Fraction:
        return self.tail.coeff(0)

    @property
    def rho(self) -> int:
        return self.tail.rho

    @property
    def K(self) -> int:
        return self.tail.K

    def full_series(self) -> PuiseuxSeries:
        """n^theta * tail as a single series (absolute exponents)."""
        r = lcm(self.tail.rho, self.theta.denominator)
        t = self.tail.lift(r // self.tail.rho)
        off = int(-self.theta * r)
        return PuiseuxSeries(r, {k + off: c for k, c in t.coeffs.items()}, t.K + off)

    def value(self, n) -> float:
        return float(n) ** float(self.theta) * self.tail.evaluate(n)

    def __str__(self) -> str:
        return f"n^({self.theta}) * [{render(self.tail)}]"


# -- rational roots -----------------------------------------------------------------

def _divisors(m: int) -> list[int]:
    m = abs(m)
    small, large = [], []
    i = 1
    while i * i <= m:
        if m % i == 0:
            small.append(i)
            if i * i != m:
                large.append(m // i)
        i += 1
    return small + large[::-1]


def rational_roots(p: Poly) -> tuple[list[tuple[Fraction, int]], Poly]:
    """Rational roots with multiplicities, and the cofactor without rational roots."""
    roots = []
    p = p.primitive()
    # strip the root at zero
    k = 0
    while not p.is_zero() and p.coeffs[0] == 0:
        p = Poly(p.coeffs[1:])
        k += 1
    if k:
        roots.append((Fraction(0), k))
    changed = True
    while changed and p.degree > 0:
        changed = False
        ints = p.integer_coeffs()
        for a in _divisors(ints[0]):
            for b in _divisors(ints[-1]):
                for x in (Fraction(a, b), Fraction(-a, b)):
                    if p(x) == 0:
                        mult = 0
                        lin = Poly([-x, 1])
                        while p.degree > 0 and p(x) == 0:
                            p = p.exact_div(lin)
                            mult += 1
                        roots.append((x, mult))
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return roots, p.primitive()


# -- Newton polygon -------------------------------------------------------------------

def _upper_hull(points: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    hull: list[tuple[int, int]] = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or below the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) <= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def newton_edges(rec: Recurrence) -> list[tuple[Fraction, list[int]]]:
    """(theta, indices i on the edge) for each upper-hull edge."""
    pts = [(i, p.degree) for i, p in enumerate(rec.p) if not p.is_zero()]
    hull = _upper_hull(pts)
    edges = []
    for (i, di), (j, dj) in zip(hull, hull[1:]):
        theta = Fraction(di - dj, j - i)
        on_edge = [k for k, dk in pts if i <= k <= j and (dk - di) * (j - i) == (dj - di) * (k - i)]
        edges.append((theta, on_edge))
    return edges


def characteristic_poly(rec: Recurrence, theta: Fraction, indices: Sequence[int]) -> Poly:
    i0 = indices[0]
    coeffs = [Fraction(0)] * (indices[-1] - i0 + 1)
    for i in indices:
        coeffs[i - i0] = rec.p[i].lc
    return Poly(coeffs)


def leading_balance(rec: Recurrence) -> list[Branch]:
    """All rational (theta, C) balances, most dominant first.

    Irrational or complex roots on the steepest edge are rejected unless a
    root-modulus bound shows they cannot dominate; on flatter edges they are
    dominated anyway and are dropped.
    """
    edges = newton_edges(rec)
    if not edges:
        raise UnsupportedInput("recurrence has no Newton polygon edge")
    top_theta = max(t for t, _ in edges)
    branches = []
    for theta, idx in edges:
        chi = characteristic_poly(rec, theta, idx)
        roots, rest = rational_roots(chi)
        roots = [(x, m) for x, m in roots if x != 0]
        if rest.degree > 0:
            biggest = max((abs(x) for x, _ in roots), default=Fraction(0))
            if theta == top_theta and cauchy_bound(rest) >= biggest:
                raise IrrationalOrComplexBranch(
                    f"edge theta={theta}: factor {rest} has no rational roots", factor=rest)
            log.debug("dropping non-rational factor %s on edge theta=%s", rest, theta)
        branches.extend(Branch(theta, x, m) for x, m in roots)
    branches.sort(key=lambda b: (b.theta, abs(b.C), b.C), reverse=True)
    return branches


def dominant_branch(branches: Sequence[Branch]) -> Branch:
    if not branches:
        raise UnsupportedInput("no rational branch")
    top = branches[0]
    for b in branches[1:]:
        if b.theta == top.theta and abs(b.C) == abs(top.C):
            raise DominanceAmbiguous(f"branches {top} and {b} tie in modulus")
    if top.C < 0:
        raise UnsupportedInput(f"dominant branch {top} oscillates in sign")
    return top


# -- ratio expansion ---------------------------------------------------------------

def _residual(rec: Recurrence, theta: Fraction, tail: PuiseuxSeries,
              target: int, onej_cache: dict) -> PuiseuxSeries:
    """sum_i p_i(n) n^(i theta) prod_{j<i} (1 + j/n)^theta tail(n + j), in the
    common lattice of tail and theta, exact through index ``target``."""
    r = tail.rho
    rel = tail.K  # relative precision, in units of 1/r
    total = PuiseuxSeries.zero(target, r)
    prod = PuiseuxSeries(r, {0: 1}, rel)
    for i, p in enumerate(rec.p):
        if i > 0:
            j = i - 1
            key = (j, r, rel)
            if key not in onej_cache:
                base = PuiseuxSeries(r, {0: 1, r: j}, rel)
                onej_cache[key] = ps_pow(base, theta)
            prod = prod * onej_cache[key] * ps_shift(tail, j)
            prod = PuiseuxSeries(r, prod.coeffs, min(prod.K, rel))
        if p.is_zero():
            continue
        off = -theta * i * r
        assert off.denominator == 1
        coeffs = {int(off) - m * r: c for m, c in enumerate(p.coeffs) if c}
        term = PuiseuxSeries(r, coeffs, target + rel + r * (p.degree + 1))
        total = total + term * prod
    return PuiseuxSeries(r, total.coeffs, min(total.K, target))


def _leading_index(rec: Recurrence, theta: Fraction, r: int) -> int:
    top = max(p.degree + i * theta for i, p in enumerate(rec.p) if not p.is_zero())
    val = -top * r
    assert val.denominator == 1
    return int(val)


def _solve_tail(rec: Recurrence, branch: Branch, rho: int, K: int) -> PuiseuxSeries:
    theta, C = branch.theta, branch.C
    r = lcm(rho, theta.denominator)
    s = r // rho
    L0 = _leading_index(rec, theta, r)
    # slope of the residual's leading coefficient in a tail perturbation
    top = max(p.degree + i * theta for i, p in enumerate(rec.p) if not p.is_zero())
    slope = sum((p.lc * i * C ** (i - 1) for i, p in enumerate(rec.p)
                 if not p.is_zero() and p.degree + i * theta == top), Fraction(0))
    if slope == 0:
        raise DegenerateOrder(f"branch {branch} is a multiple root; the order-by-order solve is singular")
    coeffs = {0: C}
    cache: dict = {}
    checked = L0  # residual verified zero through this index
    for k in range(1, K + 1):
        tail = PuiseuxSeries(r, {kk * s: c for kk, c in coeffs.items()}, k * s)
        target = L0 + k * s
        res = _residual(rec, theta, tail, target, cache)
        for idx in range(checked + 1, target):
            if res.coeff(idx) != 0:
                raise _RamificationTooSmall(idx)
        coeffs[k] = -res.coeff(target) / slope
        checked = target
    return PuiseuxSeries(rho, coeffs, K)


class _RamificationTooSmall(Exception):
    pass


def ratio_expansion(rec: Recurrence, branch: Branch | None = None, K: int = 4,
                    rho_max: int = RHO_MAX) -> RatioExpansion:
    """Expansion of a(n+1)/a(n) along the (strictly dominant) branch through index K."""
    branches = leading_balance(rec)
    dom = dominant_branch(branches)
    if branch is None:
        branch = dom
    elif branch != dom and (branch.theta, branch.C) != (dom.theta, dom.C):
        raise DominanceAmbiguous(f"{branch} is not the strictly dominant branch {dom}")
    if branch.C <= 0:
        raise UnsupportedInput(f"dominant growth constant {branch.C} is not positive")
    # the leading check of the residual must vanish: C is a root by construction
    for rho in range(1, rho_max + 1):
        try:
            tail = _solve_tail(rec, branch, rho, K)
        except _RamificationTooSmall as exc:
            log.debug("rho=%d fails at residual index %s", rho, exc)
            continue
        return RatioExpansion(branch.theta, tail)
    raise RamificationExceeded(f"no ramification up to {rho_max} gives a consistent expansion")


def plug_back_residual(rec: Recurrence, rexp: RatioExpansion) -> PuiseuxSeries:
    """The recurrence evaluated on the expansion, through the index the expansion
    certifies; every coefficient of the result must vanish."""
    theta, tail = rexp.theta, rexp.tail
    r = lcm(tail.rho, theta.denominator)
    lifted = tail.lift(r // tail.rho)
    target = _leading_index(rec, theta, r) + lifted.K
    return _residual(rec, theta, lifted, target, {})


def ratio_to_s(rexp: RatioExpansion, K: int | None = None) -> PuiseuxSeries:
    """Series of s_n = a_n a_{n+2} / a_{n+1}^2 = r_{n+1}/r_n."""
    tail = rexp.tail if K is None else rexp.tail.truncate(K)
    rho = tail.rho
    shifted = ps_shift(tail, 1) / tail
    if rexp.theta == 0:
        return shifted
    one_plus = PuiseuxSeries(rho, {0: 1, rho: 1}, tail.K)
    return ps_pow(one_plus, rexp.theta) * shifted


@dataclass(frozen=True)
class ExpansionCheck:
    deviations: tuple[tuple[int, float], ...]

    @property
    def max(self) -> float:
        return max((d for _, d in self.deviations), default=0.0)


def validate_expansion(rec: Recurrence, inits: SequenceValues, rexp: RatioExpansion,
                       window: tuple[int, int], values: SequenceValues | None = None) -> ExpansionCheck:
    """Scaled deviations |a_{n+1}/a_n - approx| * n^(K/rho) / approx over the window."""
    lo, hi = window
    if values is None or values.n_end < hi + 1:
        values = evaluate_terms(rec, inits, hi + 1)
    scale_exp = float(rexp.tail.order)
    out = []
    for n in range(lo, hi + 1):
        exact = values.ratio(n)
        if rexp.rho == 1 and rexp.theta.denominator == 1:
            approx = rexp.full_series().evaluate_exact(n)
            dev = abs(exact - approx) / abs(approx)
            out.append((n, float(dev) * n ** scale_exp))
        else:
            approx = rexp.value(n)
            out.append((n, abs(float(exact) - approx) / abs(approx) * n ** scale_exp))
    return ExpansionCheck(tuple(out))
