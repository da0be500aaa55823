"""Recurrences with polynomial coefficients, exact term evaluation and
direct r-log-convexity scans.

A :class:`Recurrence` stores ``sum_{i=0..d} p_i(n) a(n+i) = 0`` (valid for
``n >= n0``) with denominator-cleared polynomial coefficients.  The scan
functions here work on exact values only and act as ground truth for the
asymptotic and certificate layers.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import LeadingCoefficientVanishes, NotWithinWindow, ParseError
from .exact import Poly, RationalFunction, as_fraction, poly_gcd


@dataclass(frozen=True)
class Recurrence:
    p: tuple[Poly, ...]
    n0: int = 0

    def __post_init__(self):
        if len(self.p) < 2:
            raise ValueError("a recurrence needs at least two terms")
        if self.p[0].is_zero() or self.p[-1].is_zero():
            raise ValueError("p_0 and p_d must be nonzero")

    @property
    def d(self) -> int:
        return len(self.p) - 1

    def R(self, i: int) -> RationalFunction:
        """R_i(n) = -p_i(n)/p_d(n), so that a(n+d) = sum_i R_i(n) a(n+i)."""
        return RationalFunction(-self.p[i], self.p[-1])

    def residual(self, values: "SequenceValues", n: int) -> Fraction:
        return sum((self.p[i](n) * values[n + i] for i in range(self.d + 1)), Fraction(0))

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.p):
            if c.is_zero():
                continue
            shift = "a(n)" if i == 0 else f"a(n+{i})"
            terms.append(f"({c})*{shift}")
        return " + ".join(reversed(terms)) + " = 0"

    def to_json(self, initial: "SequenceValues | None" = None) -> dict:
        out = {"order": self.d, "coefficients": [str(c) for c in self.p],
               "valid_from": self.n0}
        if initial is not None:
            out["initial"] = {str(initial.n_start + i): f"{v.numerator}/{v.denominator}"
                              for i, v in enumerate(initial.values)}
        return out


@dataclass(frozen=True)
class SequenceValues:
    n_start: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_fraction(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def n_end(self) -> int:
        """Last index present."""
        return self.n_start + len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        i = n - self.n_start
        if i < 0 or i >= len(self.values):
            raise IndexError(f"index {n} outside [{self.n_start}, {self.n_end}]")
        return self.values[i]

    def indices(self) -> range:
        return range(self.n_start, self.n_end + 1)

    def items(self):
        return zip(self.indices(), self.values)

    def ratio(self, n: int) -> Fraction:
        return self[n + 1] / self[n]


# -- parsing -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        num, ident, op = m.groups()
        start = m.start(1) if num else m.start(2) if ident else m.start(3)
        if num is not None:
            out.append(("num", int(num), start))
        elif ident is not None:
            out.append(("ident", ident, start))
        else:
            if op not in "+-*/^()=":
                raise ParseError(f"unexpected character {op!r}", start)
            out.append(("op", op, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Linear:
    """Linear form: scalar part plus rational-function multiples of a(n+i)."""

    def __init__(self, parts):
        self.parts = {k: v for k, v in parts.items() if not v.is_zero()}

    @classmethod
    def scalar(cls, rf: RationalFunction) -> "_Linear":
        return cls({None: rf})

    def is_scalar(self) -> bool:
        return all(k is None for k in self.parts)

    def scalar_value(self) -> RationalFunction:
        return self.parts.get(None, RationalFunction(0))

    def __add__(self, other):
        out = dict(self.parts)
        for k, v in other.parts.items():
            out[k] = out[k] + v if k in out else v
        return _Linear(out)

    def __neg__(self):
        return _Linear({k: -v for k, v in self.parts.items()})

    def scale(self, rf: RationalFunction) -> "_Linear":
        return _Linear({k: v * rf for k, v in self.parts.items()})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.seq_name = None

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        tok = self.next()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(f"expected {op!r}", tok[2])
        return tok

    def parse_equation(self) -> _Linear:
        lhs = self.expr()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "=":
            self.next()
            rhs = self.expr()
            lhs = lhs + (-rhs)
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return lhs

    def expr(self) -> _Linear:
        val = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.term()
                val = val + (rhs if tok[1] == "+" else -rhs)
            else:
                return val

    def _starts_factor(self, tok) -> bool:
        return tok[0] in ("num", "ident") or (tok[0] == "op" and tok[1] == "(")

    def term(self) -> _Linear:
        val = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.next()
                rhs = self.unary()
                val = self._combine(val, rhs, tok[1], tok[2])
            elif self._starts_factor(tok):
                rhs = self.unary()
                val = self._combine(val, rhs, "*", tok[2])
            else:
                return val

    def _combine(self, a: _Linear, b: _Linear, op: str, pos: int) -> _Linear:
        if op == "/":
            if not b.is_scalar():
                raise ParseError("division by a sequence term", pos)
            d = b.scalar_value()
            if d.is_zero():
                raise ParseError("division by zero", pos)
            return a.scale(d.reciprocal())
        if a.is_scalar():
            return b.scale(a.scalar_value())
        if b.is_scalar():
            return a.scale(b.scalar_value())
        raise ParseError("product of two sequence terms is not linear", pos)

    def unary(self) -> _Linear:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            val = self.unary()
            return -val if tok[1] == "-" else val
        return self.power()

    def power(self) -> _Linear:
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.next()
            exp_tok = self.next()
            if exp_tok[0] != "num":
                raise ParseError("exponent must be a nonnegative integer literal", exp_tok[2])
            if not base.is_scalar():
                raise ParseError("power of a sequence term", tok[2])
            return _Linear.scalar(base.scalar_value() ** exp_tok[1])
        return base

    def atom(self) -> _Linear:
        tok = self.next()
        kind, val, pos = tok
        if kind == "num":
            return _Linear.scalar(RationalFunction(Fraction(val)))
        if kind == "ident":
            nxt = self.peek()
            if val == "n" and not (nxt[0] == "op" and nxt[1] == "("):
                return _Linear.scalar(RationalFunction(Poly([0, 1])))
            if nxt[0] == "op" and nxt[1] == "(":
                return self.sequence_term(val, pos)
            raise ParseError(f"unknown symbol {val!r}", pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)

    def sequence_term(self, name: str, pos: int) -> _Linear:
        if self.seq_name is None:
            self.seq_name = name
        elif name != self.seq_name:
            raise ParseError(f"second sequence name {name!r} (already using {self.seq_name!r})", pos)
        self.expect("(")
        arg = self.expr()
        self.expect(")")
        if not arg.is_scalar():
            raise ParseError("sequence index must not contain sequence terms", pos)
        rf = arg.scalar_value()
        ok = rf.den == Poly([1]) and rf.num.degree == 1 and rf.num.lc == 1
        shift = rf.num.coeffs[0] if ok else None
        if not ok or shift.denominator != 1:
            raise ParseError("sequence index must be n plus an integer", pos)
        return _Linear({int(shift): RationalFunction(1)})


def parse_scalar(text: str) -> RationalFunction:
    """Parse an expression in n (no sequence terms)."""
    parser = _Parser(text)
    val = parser.expr()
    tok = parser.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {tok[1]!r}", tok[2])
    if not val.is_scalar():
        raise ParseError("expected an expression in n only", 0)
    return val.scalar_value()


def _normalize(coeffs: dict[int, RationalFunction], n0: int) -> Recurrence:
    if len(coeffs) < 2:
        raise ParseError("recurrence needs at least two nonzero sequence terms")
    lo, hi = min(coeffs), max(coeffs)
    den = reduce(lambda acc, rf: acc * rf.den.exact_div(poly_gcd(acc, rf.den)),
                 coeffs.values(), Poly([1]))
    polys = []
    for i in range(lo, hi + 1):
        rf = coeffs.get(i)
        if rf is None:
            polys.append(Poly())
            continue
        polys.append((rf.num * den).exact_div(rf.den))
    # re-index so that the lowest term is a(n)
    polys = [p.shift(-lo) for p in polys]
    content = reduce(lambda a, b: _frac_gcd(a, b),
                     (c for p in polys for c in p.coeffs), Fraction(0))
    if polys[-1].lc < 0:
        content = -content
    polys = [p * (1 / content) for p in polys]
    return Recurrence(tuple(polys), n0 + lo)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(gcd(a.numerator * b.denominator, b.numerator * a.denominator),
                    a.denominator * b.denominator)


def parse_recurrence(text: str, valid_from: int | None = None) -> Recurrence:
    """Parse ``sum coeff * a(n+i) [= rhs]`` into a normalized :class:`Recurrence`.

    Shifts are renormalized so the lowest term is ``a(n)``; ``valid_from``
    refers to the running index as written (default: the normalized
    recurrence is taken to hold from n = 0).
    """
    lin = _Parser(text).parse_equation()
    if None in lin.parts:
        raise ParseError("inhomogeneous term (a part without a(...))", 0)
    coeffs = {k: v for k, v in lin.parts.items()}
    if not coeffs:
        raise ParseError("no sequence terms", 0)
    if valid_from is None:
        # written-index validity is unknown: take the normalized form from 0
        return _normalize(coeffs, -min(coeffs))
    return _normalize(coeffs, valid_from)


def parse_recurrence_json(data) -> tuple[Recurrence, SequenceValues | None]:
    """JSON form: {"order", "coefficients", "initial", "valid_from"}."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    try:
        coeff_texts = data["coefficients"]
    except (KeyError, TypeError):
        raise ParseError("JSON recurrence needs a 'coefficients' list") from None
    order = data.get("order", len(coeff_texts) - 1)
    if order != len(coeff_texts) - 1:
        raise ParseError(f"order {order} does not match {len(coeff_texts)} coefficients")
    coeffs = {}
    for i, txt in enumerate(coeff_texts):
        rf = parse_scalar(str(txt))
        if not rf.is_zero():
            coeffs[i] = rf
    if 0 not in coeffs or order not in coeffs:
        raise ParseError("zero leading or trailing coefficient")
    rec = _normalize(coeffs, int(data.get("valid_from", 0)))
    inits = None
    if data.get("initial"):
        try:
            items = sorted((int(k), as_fraction(str(v))) for k, v in data["initial"].items())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad initial value: {exc}") from None
        idx = [k for k, _ in items]
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise ParseError("initial values must have contiguous indices")
        inits = SequenceValues(idx[0], tuple(v for _, v in items))
    return rec, inits


def load_recurrence_file(path) -> tuple[Recurrence, SequenceValues | None]:
    """Read a JSON recurrence file, or a text file with a recurrence line and
    optional ``a(i) = v`` initial value lines."""
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return parse_recurrence_json(text)
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty recurrence file")
    init_re = re.compile(r"^[A-Za-z_]\w*\((-?\d+)\)\s*=\s*(-?\d+(?:/\d+)?)$")
    rec_line, inits = None, {}
    for ln in lines:
        m = init_re.match(ln)
        if m:
            inits[int(m.group(1))] = Fraction(m.group(2))
        elif rec_line is None:
            rec_line = ln
        else:
            raise ParseError(f"unrecognised line: {ln!r}")
    if rec_line is None:
        raise ParseError("no recurrence line found")
    rec = parse_recurrence(rec_line)
    seq = None
    if inits:
        idx = sorted(inits)
        if idx != list(range(idx[0], idx[0] + len(idx))):
            raise ParseError("initial values must have contiguous indices")
        seq = SequenceValues(idx[0], tuple(inits[i] for i in idx))
    return rec, seq


# -- evaluation and scans ------------------------------------------------------------

def evaluate_terms(rec: Recurrence, inits: SequenceValues, upto: int) -> SequenceValues:
    """Exact terms a(n_start) .. a(upto)."""
    d = rec.d
    if len(inits) < d:
        raise ValueError(f"need {d} initial values, got {len(inits)}")
    vals = list(inits.values)
    start = inits.n_start
    p = rec.p
    lead = p[-1]
    while start + len(vals) - 1 < upto:
        m = start + len(vals)          # index to compute
        n = m - d                      # recurrence applied at n
        if n < rec.n0:
            raise ValueError(f"recurrence only valid from n={rec.n0}; supply a({m}) as an initial value")
        ld = lead(n)
        if ld == 0:
            raise LeadingCoefficientVanishes(n)
        acc = Fraction(0)
        for i in range(d):
            acc += p[i](n) * vals[m - d + i - start]
        vals.append(-acc / ld)
    return SequenceValues(start, tuple(vals[: upto - start + 1]))


def L_operator(v: SequenceValues) -> SequenceValues:
    """(L a)_n = a_n a_{n+2} - a_{n+1}^2."""
    if len(v) < 3:
        raise ValueError("L needs at least three consecutive values")
    x = v.values
    return SequenceValues(v.n_start, tuple(x[i] * x[i + 2] - x[i + 1] ** 2 for i in range(len(x) - 2)))


def L_tower(v: SequenceValues, r: int) -> list[SequenceValues]:
    """[L a, L^2 a, ..., L^r a]."""
    out = []
    cur = v
    for _ in range(r):
        cur = L_operator(cur)
        out.append(cur)
    return out


def violations(v: SequenceValues, r: int) -> list[tuple[int, int, Fraction]]:
    """All (level, n, value) with L^level a_n < 0, level = 1..r."""
    out = []
    for level, seq in enumerate(L_tower(v, r), start=1):
        out.extend((level, n, x) for n, x in seq.items() if x < 0)
    return out


def first_r_log_convex_index(v: SequenceValues, r: int) -> int:
    """Smallest N with L^i a_n >= 0 for i = 1..r and every representable n >= N."""
    if r < 1:
        raise ValueError("r must be positive")
    if len(v) < 2 * r + 1:
        raise ValueError(f"window too short for r={r}: need {2 * r + 1} values")
    N = v.n_start
    for seq in L_tower(v, r):
        last_bad = None
        for n, x in seq.items():
            if x < 0:
                last_bad = n
        if last_bad is not None:
            if last_bad == seq.n_end:
                raise NotWithinWindow(f"L-violation at the end of the window (n={last_bad})")
            N = max(N, last_bad + 1)
    return N


def plug_back(rec: Recurrence, values: SequenceValues) -> bool:
    """True if values satisfy the recurrence wherever it applies."""
    for n in range(max(values.n_start, rec.n0), values.n_end - rec.d + 1):
        if rec.residual(values, n) != 0:
            return False
    return True
