"""Log-exponent growth calculus.

A :class:`GrowthExpr` stands for a positive function ``f`` through its
logarithm::

    log f(x) = sum(c * (log x)**alpha * (log log x)**beta * (log log log x)**gamma)

Only the *growth class* is kept: terms that stay bounded as ``x -> oo``
(constants, and anything with ``(alpha, beta, gamma) <= (0, 0, 0)``) are
dropped during canonicalisation, so two expressions compare ``THETA``
exactly when their canonical term lists coincide. Dominance between terms
is the lexicographic order of ``(alpha, beta, gamma)``.

The small DSL accepted by :func:`parse_growth` is a product of factors::

    x^q   log(x)^q   loglog(x)^q   exp(<sum of c*log(x)^q*loglog(x)^q>)

with rational (or decimal) exponents, e.g.
``x^(1/2) * exp(log(x)^(2/3)) * log(x)^3 * loglog(x)^(-1/3)``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Union

Number = Union[Fraction, float]

FLOAT_TOL = 1e-12

# Keys of the three "plain" factors.
KEY_X = (Fraction(1), Fraction(0), Fraction(0))
KEY_LOG = (Fraction(0), Fraction(1), Fraction(0))
KEY_LOGLOG = (Fraction(0), Fraction(0), Fraction(1))
_ZERO_KEY = (Fraction(0), Fraction(0), Fraction(0))


class Term(NamedTuple):
    coeff: Number
    alpha: Fraction
    beta: Fraction
    gamma: Fraction = Fraction(0)

    @property
    def key(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.alpha, self.beta, self.gamma)


def _as_coeff(c) -> Number:
    if isinstance(c, float):
        return c
    return Fraction(c)


def _is_zero(c: Number) -> bool:
    if isinstance(c, float):
        return abs(c) <= FLOAT_TOL
    return c == 0


def _canonical_terms(terms: Iterable[Term]) -> tuple[Term, ...]:
    merged: dict[tuple, Number] = {}
    for t in terms:
        key = (Fraction(t.alpha), Fraction(t.beta), Fraction(t.gamma))
        merged[key] = merged.get(key, Fraction(0)) + _as_coeff(t.coeff)
    out = [
        Term(c, *k)
        for k, c in merged.items()
        if k > _ZERO_KEY and not _is_zero(c)
    ]
    out.sort(key=lambda t: t.key, reverse=True)
    return tuple(out)


@dataclass(frozen=True)
class GrowthExpr:
    """Canonical growth function; see the module docstring."""

    terms: tuple[Term, ...] = field(default=())

    def __post_init__(self):
        terms = _canonical_terms(self.terms)
        if terms and terms[0].key > KEY_X:
            raise ValueError(f"term {terms[0]} grows faster than every power of x")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def monomial(cls, coeff, alpha=0, beta=0, gamma=0) -> "GrowthExpr":
        return cls((Term(_as_coeff(coeff), Fraction(alpha), Fraction(beta), Fraction(gamma)),))

    @classmethod
    def x_power(cls, q) -> "GrowthExpr":
        return cls.monomial(q, *KEY_X)

    @classmethod
    def log_power(cls, q) -> "GrowthExpr":
        return cls.monomial(q, *KEY_LOG)

    @classmethod
    def loglog_power(cls, q) -> "GrowthExpr":
        return cls.monomial(q, *KEY_LOGLOG)

    def __mul__(self, other: "GrowthExpr") -> "GrowthExpr":
        return GrowthExpr(self.terms + other.terms)

    def __truediv__(self, other: "GrowthExpr") -> "GrowthExpr":
        return self * other ** -1

    def __pow__(self, k) -> "GrowthExpr":
        k = _as_coeff(k)
        return GrowthExpr(tuple(t._replace(coeff=t.coeff * k) for t in self.terms))

    def pow_by(self, coeff, alpha, beta, gamma=0) -> "GrowthExpr":
        """``f ** e(x)`` for a non-growing exponent ``e = coeff*(log x)^alpha*...``.

        Bounded parts of ``f`` were discarded on construction, which is only
        harmless when the exponent itself stays bounded.
        """
        key = (Fraction(alpha), Fraction(beta), Fraction(gamma))
        if key > _ZERO_KEY:
            raise ValueError("pow_by needs a bounded exponent")
        c = _as_coeff(coeff)
        return GrowthExpr(tuple(
            Term(t.coeff * c, t.alpha + key[0], t.beta + key[1], t.gamma + key[2])
            for t in self.terms
        ))

    def is_one(self) -> bool:
        return not self.terms

    def leading(self) -> Term | None:
        return self.terms[0] if self.terms else None

    def log_value(self, x: float) -> float:
        """Numeric ``log f(x)`` for the retained terms (needs ``x > e**e``)."""
        lx = math.log(x)
        llx = math.log(lx)
        lllx = math.log(llx) if llx > 0 else float("-inf")
        total = 0.0
        for t in self.terms:
            v = float(t.coeff) * lx ** float(t.alpha)
            if t.beta:
                v *= llx ** float(t.beta)
            if t.gamma:
                v *= lllx ** float(t.gamma)
            total += v
        return total

    def __call__(self, x: float) -> float:
        return math.exp(self.log_value(x))

    def __str__(self) -> str:
        return format_growth(self)


ONE = GrowthExpr()


class Verdict(enum.Enum):
    LITTLE_O = "LittleO"
    THETA = "Theta"
    LITTLE_OMEGA = "LittleOmega"

    def flipped(self) -> "Verdict":
        return {Verdict.LITTLE_O: Verdict.LITTLE_OMEGA,
                Verdict.LITTLE_OMEGA: Verdict.LITTLE_O,
                Verdict.THETA: Verdict.THETA}[self]


def compare_growth(f: GrowthExpr, g: GrowthExpr) -> Verdict:
    lead = (f / g).leading()
    if lead is None:
        return Verdict.THETA
    return Verdict.LITTLE_O if lead.coeff < 0 else Verdict.LITTLE_OMEGA


# --------------------------------------------------------------------- DSL


class GrowthSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text[:pos]}>>>{text[pos:]}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>logloglog|loglog|log|exp|x)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos == len(text):
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise GrowthSyntaxError("unexpected character", pos, text)
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    # helpers
    def peek(self, value=None):
        if self.i >= len(self.toks):
            return None
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def pos(self) -> int:
        return self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)

    def expect(self, value):
        tok = self.peek(value)
        if tok is None:
            raise GrowthSyntaxError(f"expected {value!r}", self.pos(), self.text)
        self.i += 1
        return tok

    def error(self, msg):
        raise GrowthSyntaxError(msg, self.pos(), self.text)

    # grammar
    def number(self) -> Fraction:
        tok = self.peek()
        if tok is None or tok[0] != "num":
            self.error("expected a number")
        self.i += 1
        value = Fraction(tok[1])
        if self.peek("/"):
            self.i += 1
            tok = self.peek()
            if tok is None or tok[0] != "num":
                self.error("expected a denominator")
            self.i += 1
            den = Fraction(tok[1])
            if den == 0:
                self.error("zero denominator")
            value /= den
        return value

    def signed_number(self) -> Fraction:
        sign = 1
        while self.peek("-") or self.peek("+"):
            if self.toks[self.i][1] == "-":
                sign = -sign
            self.i += 1
        return sign * self.number()

    def exponent(self) -> Fraction:
        if not self.peek("^"):
            return Fraction(1)
        self.i += 1
        if self.peek("("):
            self.i += 1
            q = self.signed_number()
            self.expect(")")
            return q
        return self.signed_number()

    def arg_x(self):
        self.expect("(")
        self.expect("x")
        self.expect(")")

    def product(self) -> GrowthExpr:
        if self.peek() is not None and self.peek()[0] == "num" and self.toks[self.i][1] == "1":
            self.i += 1
            expr = ONE
            if self.peek() is None:
                return expr
            self.expect("*")
        else:
            expr = self.factor()
        while self.peek("*"):
            self.i += 1
            expr = expr * self.factor()
        if self.peek() is not None:
            self.error("unexpected token")
        return expr

    def factor(self) -> GrowthExpr:
        tok = self.peek()
        if tok is None or tok[0] != "name":
            self.error("expected a factor")
        name = tok[1]
        self.i += 1
        if name == "x":
            return GrowthExpr.x_power(self.exponent())
        if name == "log":
            self.arg_x()
            return GrowthExpr.log_power(self.exponent())
        if name == "loglog":
            self.arg_x()
            return GrowthExpr.loglog_power(self.exponent())
        if name == "exp":
            start = self.pos()
            self.expect("(")
            terms = self.exp_sum()
            self.expect(")")
            for t in terms:
                if t.key > KEY_X:
                    raise GrowthSyntaxError(
                        "exponent inside exp grows faster than log(x)", start, self.text)
            return GrowthExpr(tuple(terms))
        self.error(f"{name!r} is not allowed here")

    def exp_sum(self) -> list[Term]:
        terms = []
        sign = 1
        if self.peek("-"):
            sign = -1
            self.i += 1
        elif self.peek("+"):
            self.i += 1
        terms.append(self.exp_term(sign))
        while self.peek("+") or self.peek("-"):
            sign = 1 if self.toks[self.i][1] == "+" else -1
            self.i += 1
            terms.append(self.exp_term(sign))
        return terms

    def exp_term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        key = [Fraction(0), Fraction(0), Fraction(0)]
        seen_factor = False
        tok = self.peek()
        if tok is not None and tok[0] == "num":
            coeff *= self.number()
            if not self.peek("*"):
                return Term(coeff, *key)
            self.i += 1
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "name" or tok[1] not in ("log", "loglog", "logloglog"):
                self.error("expected log(x), loglog(x) or logloglog(x)")
            self.i += 1
            self.arg_x()
            slot = {"log": 0, "loglog": 1, "logloglog": 2}[tok[1]]
            key[slot] += self.exponent()
            seen_factor = True
            if not self.peek("*"):
                break
            self.i += 1
        assert seen_factor
        return Term(coeff, *key)


def parse_growth(text: str) -> GrowthExpr:
    """Parse the growth DSL into a canonical :class:`GrowthExpr`."""
    p = _Parser(text)
    if not p.toks:
        raise GrowthSyntaxError("empty expression", 0, text)
    return p.product()


def _fmt_num(q: Number) -> str:
    if isinstance(q, float):
        return repr(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _fmt_exp(q: Fraction) -> str:
    return "" if q == 1 else f"^({_fmt_num(q)})"


def format_growth(e: GrowthExpr) -> str:
    factors = []
    inside = []
    for t in e.terms:
        if t.key == KEY_X:
            factors.append("x" + _fmt_exp(t.coeff))
        elif t.key == KEY_LOG:
            factors.append("log(x)" + _fmt_exp(t.coeff))
        elif t.key == KEY_LOGLOG:
            factors.append("loglog(x)" + _fmt_exp(t.coeff))
        else:
            parts = []
            for name, q in zip(("log(x)", "loglog(x)", "logloglog(x)"), t.key):
                if q != 0:
                    parts.append(name + _fmt_exp(q))
            body = "*".join(parts)
            c = t.coeff
            neg = c < 0
            mag = -c if neg else c
            s = body if mag == 1 else f"{_fmt_num(mag)}*{body}"
            if inside:
                inside.append(("- " if neg else "+ ") + s)
            else:
                inside.append(("-" if neg else "") + s)
    if inside:
        factors.append("exp(" + " ".join(inside) + ")")
    # keep factor order stable: plain factors first by key, exp last
    return " * ".join(factors) if factors else "1"


# ------------------------------------------------------- zero-free regions


@dataclass(frozen=True, kw_only=True)
class ZeroFreeRegion:
    """Width function ``eta(T)`` of a zero-free region ``sigma > 1 - eta(T)``.

    Below ``T0`` the width is frozen at ``eta(T0)``, which keeps it
    non-increasing on ``[1, oo)``.
    """

    T0: float = 3.0

    def _eta(self, T: float) -> float:
        raise NotImplementedError

    def eta(self, T: float) -> float:
        return self._eta(max(T, self.T0))

    def eta_monomial(self) -> tuple[Number, Fraction, Fraction]:
        """``eta(x)`` as ``(coeff, alpha, beta)`` in ``coeff*(log x)^alpha*(log log x)^beta``."""
        raise NotImplementedError

    def eta_log_x(self) -> GrowthExpr:
        """``x ** eta(x)``, i.e. ``eta(x) * log x`` as a log-growth term."""
        c, a, b = self.eta_monomial()
        return GrowthExpr.monomial(c, a + 1, b)

    def _validate(self):
        if self.T0 < 3:
            raise ValueError("T0 must be at least 3")
        e0 = self._eta(self.T0)
        if not 0 < e0 < 0.5:
            raise ValueError(f"eta(T0) = {e0} is not in (0, 1/2)")


@dataclass(frozen=True, kw_only=True)
class ConstantStrip(ZeroFreeRegion):
    eta0: Fraction = Fraction(1, 4)

    def __post_init__(self):
        object.__setattr__(self, "eta0", _as_coeff(self.eta0))
        if not 0 < self.eta0 < Fraction(1, 2):
            raise ValueError("eta0 must lie in (0, 1/2)")

    def _eta(self, T):
        return float(self.eta0)

    def eta_monomial(self):
        return (self.eta0, Fraction(0), Fraction(0))


@dataclass(frozen=True, kw_only=True)
class InghamLogLog(ZeroFreeRegion):
    """``eta(T) = A log log T / log T``; non-increasing once ``T >= e**e``."""

    A: Number = 1.0
    T0: float = math.exp(math.e)

    def __post_init__(self):
        object.__setattr__(self, "A", _as_coeff(self.A))
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.T0 < math.exp(math.e) * (1 - 1e-15):
            raise ValueError("InghamLogLog needs T0 >= e**e for monotonicity")
        self._validate()

    def _eta(self, T):
        lt = math.log(T)
        return float(self.A) * math.log(lt) / lt

    def eta_monomial(self):
        return (self.A, Fraction(-1), Fraction(1))


@dataclass(frozen=True, kw_only=True)
class KorobovVinogradov(ZeroFreeRegion):
    """``eta(T) = c / ((log T)^(2/3) (log log T)^(1/3))``."""

    c: Number = 1 / 48.08

    def __post_init__(self):
        object.__setattr__(self, "c", _as_coeff(self.c))
        if self.c <= 0:
            raise ValueError("c must be positive")
        self._validate()

    def _eta(self, T):
        lt = math.log(T)
        return float(self.c) / (lt ** (2 / 3) * math.log(lt) ** (1 / 3))

    def eta_monomial(self):
        return (self.c, Fraction(-2, 3), Fraction(-1, 3))


def zero_free_region(kind: str, param, T0: float | None = None) -> ZeroFreeRegion:
    """Build a region from a name: ``strip``, ``ingham`` or ``kv``."""
    kinds = {
        "strip": lambda: ConstantStrip(eta0=param),
        "ingham": lambda: InghamLogLog(A=param, **({} if T0 is None else {"T0": T0})),
        "kv": lambda: KorobovVinogradov(c=param, **({} if T0 is None else {"T0": T0})),
    }
    if kind not in kinds:
        raise ValueError(f"unknown zero-free region {kind!r}; expected one of {sorted(kinds)}")
    return kinds[kind]()


# ------------------------------------------------------------ conditions


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    holds: bool
    lhs: GrowthExpr
    rhs: GrowthExpr
    verdict: Verdict
    required: tuple[Verdict, ...]
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "holds": self.holds,
            "lhs": format_growth(self.lhs),
            "rhs": format_growth(self.rhs),
            "verdict": self.verdict.value,
            "required": [v.value for v in self.required],
            "note": self.note,
        }


def _report(cid, lhs, rhs, required, note=""):
    verdict = compare_growth(lhs, rhs)
    return ConditionReport(cid, verdict in required, lhs, rhs, verdict, tuple(required), note)


def check_ingham_gen_conditions(theta, b, g: GrowthExpr, eta: ZeroFreeRegion,
                                h: GrowthExpr, delta) -> list[ConditionReport]:
    """Growth conditions of the generalised Ingham theorem for ``y = x^theta g(x)``.

    Returns one report per applicable condition: ``above-threshold`` when
    ``theta > 1 - 1/b``, ``at-threshold`` when ``theta = 1 - 1/b`` and
    additionally ``log-lower-bound`` for ``b = 2, theta = 1/2``.
    """
    theta, b, delta = Fraction(theta), Fraction(b), Fraction(delta)
    if not Fraction(1, 2) <= theta < 1:
        raise ValueError("theta must satisfy 1/2 <= theta < 1")
    if b < 2:
        raise ValueError("b < 2 contradicts N(1/2, T) = Omega(T log T)")
    if b > 1 / (1 - theta):
        raise ValueError("b must satisfy b <= 1/(1 - theta)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if compare_growth(GrowthExpr.log_power(delta), g) == Verdict.LITTLE_OMEGA:
        raise ValueError(f"g = {format_growth(g)} is not >> log^{delta} x")
    if any(t.alpha >= 1 for t in g.terms):
        raise ValueError(f"g = {format_growth(g)} is not << x^eps for every eps > 0")

    reports = []
    threshold = 1 - 1 / b
    if theta > threshold:
        rhs = eta.eta_log_x() ** (1 + b * (theta - 1))
        reports.append(_report("above-threshold", h, rhs, (Verdict.LITTLE_O,)))
    else:
        c, a, be = eta.eta_monomial()
        base = GrowthExpr.log_power(delta / 2) / g
        lhs = (base.pow_by(b * c, a, be)
               * h * GrowthExpr.log_power(1) / GrowthExpr.loglog_power(1))
        reports.append(_report("at-threshold", lhs, ONE, (Verdict.LITTLE_O,),
                               "eta evaluated at x"))
    if b == 2 and theta == Fraction(1, 2):
        reports.append(_report("log-lower-bound", GrowthExpr.log_power(1 + delta), g,
                               (Verdict.LITTLE_O, Verdict.THETA), "<< allows Theta"))
    return reports


# ------------------------------------------------------------ numerics


def omega_eta(x: float, eta: ZeroFreeRegion, grid: int = 256) -> float:
    """``inf_{1 <= T <= x} (eta(T) log x + log T)``.

    Coarse grid in ``s = log T`` followed by golden-section refinement
    around the best grid point.
    """
    if x < 3:
        raise ValueError("omega_eta needs x >= 3")
    lx = math.log(x)

    def f(s):
        return eta.eta(math.exp(s)) * lx + s

    step = lx / grid
    values = [f(i * step) for i in range(grid + 1)]
    i_best = min(range(grid + 1), key=values.__getitem__)
    best = values[i_best]
    a = max(0.0, (i_best - 1) * step)
    b = min(lx, (i_best + 1) * step)
    inv_phi = (math.sqrt(5) - 1) / 2
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-12 * max(1.0, lx):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return min(best, fc, fd)


PNT_FACTORS = {"ingham_half": 0.5, "pintz_one": 1.0}


def pnt_error_bound(x: float, eta: ZeroFreeRegion, factor: str = "pintz_one",
                    eps: float = 0.0) -> float:
    """``x exp(-F (1 - eps) omega_eta(x))`` with ``F`` = 1/2 (Ingham) or 1 (Pintz)."""
    if x < 3:
        raise ValueError("x must be >= 3")
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    try:
        F = PNT_FACTORS[factor]
    except KeyError:
        raise ValueError(f"factor must be one of {sorted(PNT_FACTORS)}") from None
    return x * math.exp(-F * (1 - eps) * omega_eta(x, eta))


def d_epsilon(c: float, eps: float = 0.0) -> float:
    """Constant in ``E(x) << x exp(-d (log x)^(3/5) (log log x)^(-1/5))``."""
    if c <= 0 or eps < 0:
        raise ValueError("need c > 0 and eps >= 0")
    return (5**6 * float(c) ** 3 / (2**2 * 3**4)) ** 0.2 - eps


def min_log_power_C(b, B, eta0) -> Fraction:
    """Exponent threshold ``max(1, (B + 1)/(b eta0))`` for ``y = x^(1-1/b) log^C x``."""
    b, B, eta0 = Fraction(b), Fraction(B), Fraction(eta0)
    if b < 2 or B < 0 or not 0 < eta0 <= Fraction(1, 2):
        raise ValueError("need b >= 2, B >= 0 and 0 < eta0 <= 1/2")
    return max(Fraction(1), (B + 1) / (b * eta0))
