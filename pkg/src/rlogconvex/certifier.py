"""Explicit-N certificates of r-log-convexity.

A certificate fixes bound pairs ``f <= s^(i) <= g`` for the levels
``i = r-1, ..., 1`` (s^(i) is the s-ratio of L^(i-1) a) and a pair
``f <= a(n+1)/a(n) <= g`` at level 0.  Every link of the induction is a
rational-function inequality whose validity range is an exact positivity
threshold; the base of the induction is checked on exact terms.  Nothing
produced by the asymptotic layer is trusted: it only proposes the bounds.

Thresholds are named as follows (r >= 2)::

    N1          top level: s^(r) > 1 from the level r-1 pair
    N2..N(r-1)  propagation from level i to level i+1, top-down
    Nr          ratio pair implies the level-1 pair
    N0          recurrence keeps the ratio pair, base window checked

For r = 1 there is no level >= 1 pair; N1 then says that the ratio pair
forces s^(1) > 1 directly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable

from .asymptotics import (RatioExpansion, dominant_branch, leading_balance,
                          ratio_expansion, ratio_to_s)
from .convexity import Direction, asymptotic_r, s_tower
from .errors import (BaseWindowNotFound, InsufficientTruncation, NeverPositive,
                     NotAsymptoticallyLogConvex, ParseError, SearchExhausted, UnsupportedInput)
from .exact import RationalFunction, as_fraction, format_rational, positivity_threshold
from .puiseux import PuiseuxSeries, render
from .recurrence import Recurrence, SequenceValues, evaluate_terms

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundPair:
    level: int
    k: int
    f: PuiseuxSeries
    g: PuiseuxSeries

    def f_rf(self) -> RationalFunction:
        return self.f.to_rational_function()

    def g_rf(self) -> RationalFunction:
        return self.g.to_rational_function()

    def __str__(self) -> str:
        return (f"level {self.level}, k={self.k}\n  f = {_finite(self.f)}\n"
                f"  g = {_finite(self.g)}")


def _finite(s: PuiseuxSeries) -> str:
    txt = render(s)
    return txt.rsplit(" + O(", 1)[0] if s.coeffs else "0"


@dataclass(frozen=True)
class SignEntry:
    index: int
    sign: int
    start: int


@dataclass(frozen=True)
class Certificate:
    r: int
    rho: int
    pairs: tuple[BoundPair, ...]          # levels r-1 down to 0
    thresholds: dict
    sign_pattern: tuple[SignEntry, ...]
    base_window: tuple[int, int]
    N: int

    def pair(self, level: int) -> BoundPair:
        for p in self.pairs:
            if p.level == level:
                return p
        raise KeyError(level)

    def to_json(self) -> dict:
        def terms(s: PuiseuxSeries):
            return [[e.numerator, e.denominator, format_rational(c)] for e, c in s.terms()]

        return {
            "r": self.r,
            "rho": self.rho,
            "levels": [{"level": p.level, "k": p.k, "f": terms(p.f), "g": terms(p.g)}
                       for p in self.pairs],
            "thresholds": dict(self.thresholds),
            "sign_pattern": [{"index": e.index, "sign": "+" if e.sign > 0 else "-", "from": e.start}
                             for e in self.sign_pattern],
            "base_window": list(self.base_window),
            "N": self.N,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid certificate JSON: {exc.msg}", exc.pos) from None
        try:
            rho = int(data["rho"])
            pairs = []
            for lv in data["levels"]:
                k = int(lv["k"])
                f = _series_from_terms(lv["f"], k)
                g = _series_from_terms(lv["g"], k)
                pairs.append(BoundPair(int(lv["level"]), k, f, g))
            signs = []
            for e in data.get("sign_pattern", []):
                sg = e["sign"]
                sg = (1 if sg in ("+", "+1", 1) else -1 if sg in ("-", "-1", -1) else None)
                if sg is None:
                    raise ParseError(f"bad sign {e['sign']!r}")
                signs.append(SignEntry(int(e["index"]), sg, int(e["from"])))
            lo, hi = data["base_window"]
            return cls(int(data["r"]), rho, tuple(pairs),
                       {str(k): int(v) for k, v in data["thresholds"].items()},
                       tuple(signs), (int(lo), int(hi)), int(data["N"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed certificate: {exc!r}") from None

    def describe(self) -> str:
        lines = [f"r = {self.r}, rho = {self.rho}"]
        lines += [str(p) for p in self.pairs]
        lines.append("thresholds: " + ", ".join(f"{k}={v}" for k, v in sorted(self.thresholds.items())))
        if self.sign_pattern:
            lines.append("signs of R_i: " + ", ".join(
                f"R_{e.index}{'>' if e.sign > 0 else '<'}0 from {e.start}" for e in self.sign_pattern))
        lines.append(f"base window: {self.base_window[0]}..{self.base_window[1]}")
        lines.append(f"N = {self.N}")
        return "\n".join(lines)


def _series_from_terms(items, k: int) -> PuiseuxSeries:
    terms = [(Fraction(int(num), int(den)), as_fraction(str(c))) for num, den, c in items]
    s = PuiseuxSeries.from_terms(terms)
    return s.with_truncation(max(s.K, k * s.rho))


# -- bound construction ------------------------------------------------------------

def make_bounds(series: PuiseuxSeries, k: int, level: int = 1) -> BoundPair:
    """f = series truncated at k minus n^(-k/rho); g = the same plus n^(-k/rho)."""
    if k > series.K:
        raise InsufficientTruncation(f"k={k} exceeds the series truncation {series.K}")
    base = series.truncate(k)
    bump = PuiseuxSeries(series.rho, {k: 1}, k)
    return BoundPair(level, k, base - bump, base + bump)


# -- inequality builders (shared by certify and check_certificate) --------------------

def _defined(build):
    """A bound pair that makes a condition undefined (e.g. f - 1 == 0) cannot work."""
    def wrapper(*args):
        try:
            return build(*args)
        except ZeroDivisionError:
            raise NeverPositive(f"{build.__name__}: bounds make the condition undefined") from None
    wrapper.__name__ = build.__name__
    wrapper.__doc__ = build.__doc__
    return wrapper

def _snr_lower(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """(f_n - 1)(f_{n+2} - 1) / (1 - 1/g_{n+1})^2."""
    g1 = g.shift(1)
    return (f - 1) * (f.shift(2) - 1) * g1 * g1 / ((g1 - 1) * (g1 - 1))


def _snr_upper(f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """(g_n - 1)(g_{n+2} - 1) / (1 - 1/f_{n+1})^2."""
    f1 = f.shift(1)
    return (g - 1) * (g.shift(2) - 1) * f1 * f1 / ((f1 - 1) * (f1 - 1))


@_defined
def top_level_conditions(pair: BoundPair) -> dict[str, RationalFunction]:
    f, g = pair.f_rf(), pair.g_rf()
    if pair.level == 0:
        return {"f>0": f, "ratio->s>1": f.shift(1) / g - 1}
    return {"f>1": f - 1, "snr": _snr_lower(f, g) - 1}


@_defined
def propagation_conditions(lower: BoundPair, upper: BoundPair) -> dict[str, RationalFunction]:
    f, g = lower.f_rf(), lower.g_rf()
    F, G = upper.f_rf(), upper.g_rf()
    return {"f>1": f - 1, "lower": _snr_lower(f, g) - F, "upper": G - _snr_upper(f, g)}


@_defined
def ratio_link_conditions(ratio_pair: BoundPair, s_pair: BoundPair) -> dict[str, RationalFunction]:
    f0, g0 = ratio_pair.f_rf(), ratio_pair.g_rf()
    f1, g1 = s_pair.f_rf(), s_pair.g_rf()
    return {"f>0": f0, "lower": f0.shift(1) / g0 - f1, "upper": g1 - g0.shift(1) / f0}


def sign_conditions(rec: Recurrence) -> dict[int, tuple[int, RationalFunction]]:
    """index -> (eventual sign, sign * R_i) for every present R_i, i < d."""
    out = {}
    for i in range(rec.d):
        if rec.p[i].is_zero():
            continue
        R = rec.R(i)
        sg = R.sign_at_infinity()
        out[i] = (sg, R * sg)
    return out


@_defined
def recurrence_conditions(rec: Recurrence, ratio_pair: BoundPair,
                          signs: dict[int, int]) -> dict[str, RationalFunction]:
    """The induction step for the ratio bounds, selecting f or g per sign of R_i."""
    f, g = ratio_pair.f_rf(), ratio_pair.g_rf()
    d = rec.d
    low = RationalFunction(0)
    high = RationalFunction(0)
    for i, sg in signs.items():
        R = rec.R(i)
        u = g if sg > 0 else f
        v = f if sg > 0 else g
        pu = RationalFunction(1)
        pv = RationalFunction(1)
        for j in range(i, d - 1):
            pu = pu * u.shift(j)
            pv = pv * v.shift(j)
        low = low + R / pu
        high = high + R / pv
    return {"f>0": f, "u": low - f.shift(d - 1), "v": g.shift(d - 1) - high}


def _threshold(conds: dict[str, RationalFunction]) -> int:
    N = 0
    for name, rf in conds.items():
        try:
            N = max(N, positivity_threshold(rf))
        except NeverPositive:
            raise NeverPositive(f"condition {name!r} is eventually violated") from None
    return N


def verify_top_level(pair: BoundPair) -> int:
    return _threshold(top_level_conditions(pair))


def verify_propagation(lower: BoundPair, upper: BoundPair) -> int:
    if upper.level != lower.level + 1 or lower.level < 1:
        raise ValueError("propagation needs adjacent levels >= 1")
    return _threshold(propagation_conditions(lower, upper))


def verify_ratio_link(ratio_pair: BoundPair, s_pair: BoundPair) -> int:
    if ratio_pair.level != 0 or s_pair.level != 1:
        raise ValueError("ratio link needs a level-0 and a level-1 pair")
    return _threshold(ratio_link_conditions(ratio_pair, s_pair))


class TermCache:
    """Exact terms of a sequence, extended on demand."""

    def __init__(self, rec: Recurrence, inits: SequenceValues):
        self.rec = rec
        self.values = inits

    def upto(self, n: int) -> SequenceValues:
        if self.values.n_end < n:
            target = max(n, 2 * self.values.n_end + 16)
            self.values = evaluate_terms(self.rec, self.values, target)
        return self.values


def base_window_ok(pair: BoundPair, values: SequenceValues, lo: int, hi: int) -> bool:
    """a(lo) > 0 and f(m) <= a(m+1)/a(m) <= g(m) exactly for lo <= m <= hi."""
    f, g = pair.f_rf(), pair.g_rf()
    if values[lo] <= 0:
        return False
    for m in range(lo, hi + 1):
        am = values[m]
        if am == 0:
            return False
        ratio = values[m + 1] / am
        try:
            if not (f(m) <= ratio <= g(m)):
                return False
        except ZeroDivisionError:
            return False
    return True


def verify_recurrence_bounds(rec: Recurrence, ratio_pair: BoundPair, terms,
                             n_cap: int = 10_000) -> tuple[int, tuple[SignEntry, ...]]:
    """(N_0, sign pattern) for the level-0 pair; ``terms`` is a TermCache or SequenceValues."""
    if isinstance(terms, SequenceValues):
        terms = TermCache(rec, terms)
    sc = sign_conditions(rec)
    pattern = []
    start = max(rec.n0, 0)
    for i, (sg, rf) in sc.items():
        try:
            th = positivity_threshold(rf)
        except NeverPositive:
            raise NeverPositive(f"R_{i} has no eventual sign") from None
        pattern.append(SignEntry(i, sg, th))
        start = max(start, th)
    conds = recurrence_conditions(rec, ratio_pair, {i: sg for i, (sg, _) in sc.items()})
    start = max(start, _threshold(conds))
    d = rec.d
    f, g = ratio_pair.f_rf(), ratio_pair.g_rf()
    run = 0          # consecutive indices ending at m whose ratio lies in [f, g]
    m = max(start, terms.values.n_start)
    while m <= n_cap + d - 1:
        vals = terms.upto(m + 1)
        am = vals[m]
        inside = False
        if am != 0:
            try:
                inside = f(m) <= vals[m + 1] / am <= g(m)
            except ZeroDivisionError:
                inside = False
        run = run + 1 if inside else 0
        if run >= d:
            n = m - d + 1
            if vals[n] > 0:
                return n, tuple(pattern)
        m += 1
    raise BaseWindowNotFound(n_cap)


# -- orchestration -------------------------------------------------------------------------

@dataclass
class CertifyConfig:
    K: int | None = None
    k_max: int | None = None
    K_max: int | None = None
    n_cap: int = 10_000
    rho_max: int = 6


def _leading_index(series: PuiseuxSeries) -> int:
    return (series - 1).k_min


def _try_levels(rec: Recurrence, terms: TermCache, rexp: RatioExpansion,
                tower: list[PuiseuxSeries], r: int, k_max: int,
                n_cap: int = 10_000) -> Certificate:
    """Greedy top-down choice of the loosest k per level.  Raises NeverPositive."""
    pairs: dict[int, BoundPair] = {}
    thresholds: dict[str, int] = {}

    def pick(level: int, series: PuiseuxSeries, k_range: Iterable[int], check):
        last = None
        for k in k_range:
            if k > series.K:
                break
            pair = make_bounds(series, k, level)
            try:
                return pair, check(pair)
            except NeverPositive as exc:
                last = exc
        raise NeverPositive(f"level {level}: no k up to {k_max} works ({last})")

    full = rexp.full_series()
    ratio_range = range(full.k_min, k_max + 1)
    if r >= 2:
        top = r - 1
        s_top = tower[top - 1]
        pairs[top], thresholds["N1"] = pick(top, s_top, range(_leading_index(s_top), k_max + 1),
                                            verify_top_level)
        name = 2
        for level in range(top - 1, 0, -1):
            s_lv = tower[level - 1]
            upper = pairs[level + 1]
            pairs[level], thresholds[f"N{name}"] = pick(
                level, s_lv, range(_leading_index(s_lv), k_max + 1),
                lambda p, upper=upper: verify_propagation(p, upper))
            name += 1
        link_name = f"N{r}"
        s1 = pairs[1]

        def level0(p):
            th = verify_ratio_link(p, s1)
            n0, pattern = verify_recurrence_bounds(rec, p, terms, n_cap)
            return th, n0, pattern
    else:
        link_name = "N1"

        def level0(p):
            th = verify_top_level(p)
            n0, pattern = verify_recurrence_bounds(rec, p, terms, n_cap)
            return th, n0, pattern

    base_err = None
    for k in ratio_range:
        if k > full.K:
            break
        p0 = make_bounds(full, k, 0)
        try:
            th, n0, pattern = level0(p0)
        except NeverPositive:
            continue
        except BaseWindowNotFound as exc:
            base_err = exc
            continue
        pairs[0] = p0
        thresholds[link_name] = th
        thresholds["N0"] = n0
        N = max(thresholds.values())
        return Certificate(r, rexp.rho, tuple(pairs[lv] for lv in range(r - 1, -1, -1)),
                           thresholds, pattern, (n0, n0 + rec.d - 1), N)
    if base_err is not None:
        raise base_err
    raise NeverPositive(f"level 0: no k up to {k_max} works")


def certify(rec: Recurrence, inits: SequenceValues, r: int,
            config: CertifyConfig | None = None) -> Certificate:
    """Search for a certificate that {a_n}_{n >= N} is r-log-convex."""
    if r < 1:
        raise ValueError("r must be positive")
    config = config or CertifyConfig()
    terms = TermCache(rec, inits)
    dom = dominant_branch(leading_balance(rec))
    if dom.theta.denominator != 1:
        raise UnsupportedInput(f"fractional growth exponent theta={dom.theta}; certificates need integer theta")

    probe = ratio_expansion(rec, dom, K=4 + 2 * r, rho_max=config.rho_max)
    if probe.rho != 1:
        raise UnsupportedInput(f"ramified expansion (rho={probe.rho}); certificates need rho = 1")
    try:
        report = asymptotic_r(ratio_to_s(probe))
        alpha = report.alpha
        if report.direction is Direction.LOG_CONCAVE:
            raise NotAsymptoticallyLogConvex(f"s_n = 1 + ({report.c}) n^(-{alpha}) + ...: eventually log-concave")
    except InsufficientTruncation:
        alpha = Fraction(1)
    K_init = config.K or probe.rho * (4 + 2 * r * max(1, ceil(alpha)))
    K_max = config.K_max or 8 * K_init
    K = K_init
    last: Exception | None = None
    while K <= K_max:
        rexp = ratio_expansion(rec, dom, K=K, rho_max=config.rho_max)
        s = ratio_to_s(rexp)
        try:
            report = asymptotic_r(s)
        except InsufficientTruncation as exc:
            last = exc
            K *= 2
            continue
        if report.direction is Direction.LOG_CONCAVE:
            raise NotAsymptoticallyLogConvex(f"s_n = 1 + ({report.c}) n^(-{report.alpha}) + ...: eventually log-concave")
        try:
            tower = s_tower(s, r)
        except InsufficientTruncation as exc:
            last = exc
            K *= 2
            continue
        for i, t in enumerate(tower, start=1):
            _, c = (t - 1).leading()
            if c <= 0:
                raise NotAsymptoticallyLogConvex(f"level {i} deviation has coefficient {c}")
        k_max = config.k_max if config.k_max is not None else K // 2
        try:
            cert = _try_levels(rec, terms, rexp, tower, r, k_max, config.n_cap)
            log.info("certificate found at K=%d: N=%d", K, cert.N)
            return cert
        except BaseWindowNotFound as exc:
            # a larger K leaves every bound pair with the same k unchanged,
            # so it cannot produce a base window: give up here
            raise BaseWindowNotFound(exc.limit) from None
        except NeverPositive as exc:
            last = exc
            log.info("K=%d failed: %s", K, exc)
            K *= 2
    raise SearchExhausted(f"no certificate within K <= {K_max} (last failure: {last})")


# -- independent checking -----------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    verified: bool
    reason: str = ""
    recomputed: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verified

    def __str__(self) -> str:
        return "Verified" if self.verified else f"Rejected: {self.reason}"


def _reject(reason: str, recomputed=None) -> CheckResult:
    return CheckResult(False, reason, recomputed or {})


def check_certificate(rec: Recurrence, inits: SequenceValues, cert: Certificate,
                      n_cap: int = 10_000) -> CheckResult:
    """Re-derive every condition of ``cert`` from scratch."""
    r = cert.r
    if r < 1:
        return _reject("r must be positive")
    if cert.rho != 1:
        return _reject(f"rho={cert.rho}: only rho = 1 certificates are checkable")
    levels = sorted(p.level for p in cert.pairs)
    if levels != list(range(r)):
        return _reject(f"expected bound pairs for levels 0..{r - 1}, got {levels}")
    for p in cert.pairs:
        if p.f.rho != 1 or p.g.rho != 1:
            return _reject(f"level {p.level}: fractional exponents in bounds")
    expected = {f"N{i}" for i in range(0, r + 1)} if r >= 2 else {"N0", "N1"}
    if set(cert.thresholds) != expected:
        return _reject(f"threshold names {sorted(cert.thresholds)} != {sorted(expected)}")
    if cert.N != max(cert.thresholds.values()):
        return _reject(f"N={cert.N} is not the maximum of the thresholds")
    d = rec.d
    N0 = cert.thresholds["N0"]
    if tuple(cert.base_window) != (N0, N0 + d - 1):
        return _reject(f"base window {cert.base_window} != [N0, N0+d-1] = [{N0}, {N0 + d - 1}]")

    got: dict[str, int] = {}

    def need(name: str, build, *pairs):
        try:
            th = _threshold(build(*pairs))
        except NeverPositive as exc:
            return f"{name}: {exc}"
        got[name] = th
        if cert.thresholds[name] < th:
            return f"{name}={cert.thresholds[name]} but the conditions only hold from {th}"
        return None

    if r >= 2:
        err = need("N1", top_level_conditions, cert.pair(r - 1))
        if err:
            return _reject(err, got)
        name = 2
        for level in range(r - 2, 0, -1):
            err = need(f"N{name}", propagation_conditions, cert.pair(level), cert.pair(level + 1))
            if err:
                return _reject(err, got)
            name += 1
        err = need(f"N{r}", ratio_link_conditions, cert.pair(0), cert.pair(1))
    else:
        err = need("N1", top_level_conditions, cert.pair(0))
    if err:
        return _reject(err, got)

    # level 0: signs of R_i, induction step, base window
    sc = sign_conditions(rec)
    recorded = {e.index: e for e in cert.sign_pattern}
    if set(recorded) != set(sc):
        return _reject(f"sign pattern covers {sorted(recorded)}, recurrence has R_i for {sorted(sc)}", got)
    for i, (sg, rf) in sc.items():
        e = recorded[i]
        if e.sign != sg:
            return _reject(f"R_{i} is eventually {'positive' if sg > 0 else 'negative'}, certificate says otherwise", got)
        try:
            th = positivity_threshold(rf)
        except NeverPositive:
            return _reject(f"R_{i} has no eventual sign", got)
        got[f"sign{i}"] = th
        if e.start < th:
            return _reject(f"R_{i} keeps its sign only from {th}, certificate says {e.start}", got)
        if N0 < e.start:
            return _reject(f"N0={N0} precedes the sign threshold of R_{i}", got)
    if N0 < rec.n0:
        return _reject(f"N0={N0} precedes the recurrence validity index {rec.n0}", got)
    pair0 = cert.pair(0)
    try:
        th = _threshold(recurrence_conditions(rec, pair0, {i: sg for i, (sg, _) in sc.items()}))
    except NeverPositive as exc:
        return _reject(f"N0: {exc}", got)
    got["N0-induction"] = th
    if N0 < th:
        return _reject(f"N0={N0} but the induction step only holds from {th}", got)
    if N0 < inits.n_start:
        return _reject(f"N0={N0} precedes the first known term a({inits.n_start})", got)
    if N0 + d > n_cap:
        return _reject(f"base window beyond the evaluation cap {n_cap}", got)
    values = evaluate_terms(rec, inits, N0 + d) if inits.n_end < N0 + d else inits
    if not base_window_ok(pair0, values, N0, N0 + d - 1):
        return _reject(f"base window {N0}..{N0 + d - 1}: ratio outside [f, g] or a(N0) <= 0", got)
    return CheckResult(True, "", got)
