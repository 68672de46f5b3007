"""Zeta-zero tables and the explicit-formula side of the short-interval argument.

Tables hold positive ordinates ``gamma`` only; every zero is taken to lie on
the critical line, but a per-zero ``beta`` array is kept so that the sums
below are written for general ``rho = beta + i*gamma``. Sums over zeros use
the pairwise :func:`tree_sum`, so results do not depend on chunking.
"""
from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
ZERO_TABLE_ENV = "SHORTPRIMES_ZERO_TABLE"
BUNDLED_TABLE = "zeros_1e4.txt"


def tree_sum(values) -> float:
    """Pairwise (tree) summation in a fixed order."""
    a = np.array(values, dtype=float).ravel()
    if a.size == 0:
        return 0.0
    while a.size > 1:
        if a.size % 2:
            a = np.append(a, 0.0)
        a = a[0::2] + a[1::2]
    return float(a[0])


class ZeroTableError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str = ""):
        where = f"{source}:{line}: " if line is not None else (f"{source}: " if source else "")
        super().__init__(where + message)
        self.line = line


@dataclass(frozen=True, eq=False)
class ZeroTable:
    ordinates: np.ndarray
    source: str = "<memory>"
    sha256: str | None = None
    betas: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        g = np.array(self.ordinates, dtype=float)
        g.setflags(write=False)
        object.__setattr__(self, "ordinates", g)
        b = np.full(g.shape, 0.5) if self.betas is None else np.array(self.betas, dtype=float)
        if b.shape != g.shape:
            raise ZeroTableError("betas and ordinates differ in length", source=self.source)
        b.setflags(write=False)
        object.__setattr__(self, "betas", b)

    def __len__(self) -> int:
        return len(self.ordinates)

    @property
    def t_max(self) -> float:
        return float(self.ordinates[-1]) if len(self.ordinates) else 0.0

    def upto(self, T: float) -> tuple[np.ndarray, np.ndarray]:
        """``(betas, gammas)`` of the zeros with ``0 < gamma <= T``."""
        n = count_zeros(self, T)
        return self.betas[:n], self.ordinates[:n]


def parse_zeros(text: str, source: str = "<string>") -> ZeroTable:
    vals = []
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            g = float(line)
        except ValueError:
            raise ZeroTableError(f"cannot parse {line!r} as an ordinate", lineno, source) from None
        if not math.isfinite(g) or g <= 0:
            raise ZeroTableError(f"ordinate {line} is not positive", lineno, source)
        if not vals and g <= 14:
            raise ZeroTableError(f"first ordinate {line} is not above 14", lineno, source)
        if vals and g <= vals[-1]:
            raise ZeroTableError(f"ordinate {line} does not exceed the previous one", lineno, source)
        vals.append(g)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return ZeroTable(np.array(vals, dtype=float), source=source, sha256=digest)


def load_zeros(path) -> ZeroTable:
    """Read a table: UTF-8, one ordinate per line, ``#`` comments allowed."""
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise ZeroTableError(f"cannot read zero table: {exc.strerror}", source=str(p)) from exc
    table = parse_zeros(data.decode("utf-8"), source=str(p))
    return table


def bundled_table_path() -> Path:
    return Path(str(resources.files("shortprimes") / "data" / BUNDLED_TABLE))


def default_table_path() -> Path:
    env = os.environ.get(ZERO_TABLE_ENV)
    return Path(env) if env else bundled_table_path()


def default_table() -> ZeroTable:
    return load_zeros(default_table_path())


def count_zeros(table: ZeroTable, T: float) -> int:
    """Number of ordinates ``<= T``."""
    if T > table.t_max and not (len(table) == 0 and T < 14):
        raise ZeroTableError(f"T = {T} exceeds the table's t_max = {table.t_max}", source=table.source)
    return int(np.searchsorted(table.ordinates, T, side="right"))


def rvm_estimate(T: float) -> float:
    """Riemann-von Mangoldt main terms ``(T/2pi) log(T/2pi) - T/2pi + 7/8``."""
    t = T / TWO_PI
    return t * math.log(t) - t + 7.0 / 8.0


def zero_sum_xbeta(table: ZeroTable, x: float, T: float) -> float:
    """``sum over |gamma| <= T of x^(beta - 1)``, conjugates counted."""
    if x < 2:
        raise ValueError("x must be at least 2")
    b, _ = table.upto(T)
    return 2.0 * tree_sum(np.power(x, b - 1.0))


class IdentityCheck(NamedTuple):
    lhs: float
    rhs: float
    difference: float
    relative: bool
    quadrature_rhs: float | None = None


def density_integral_identity_check(table: ZeroTable, x: float, T: float,
                                    quad_points: int = 0) -> IdentityCheck:
    """Compare the zero sum with ``2 N(0,T)/x + 2 int_0^1 N(sigma,T) x^(sigma-1) log x dsigma``.

    ``N(sigma, T)`` is the step function read off the table and the integral
    is taken in closed form on each step. With ``quad_points > 0`` a
    Gauss-Legendre evaluation of the same integral is reported alongside.
    The difference is relative to the left side unless that is zero.
    """
    lhs = zero_sum_xbeta(table, x, T)
    b, _ = table.upto(T)
    n0 = len(b)
    # steps of N(sigma): N = #{beta >= sigma} is constant on (b_{k-1}, b_k]
    levels = np.unique(b)
    counts = [int(np.count_nonzero(b >= s)) for s in levels]
    edges = np.concatenate([[0.0], levels])
    logx = math.log(x)
    pieces = [counts[k] * (x ** (edges[k + 1] - 1.0) - x ** (edges[k] - 1.0)) for k in range(len(levels))]
    rhs = 2.0 * n0 / x + 2.0 * tree_sum(pieces)
    quad = None
    if quad_points > 0:
        nodes, weights = np.polynomial.legendre.leggauss(quad_points)
        qp = []
        for k in range(len(levels)):
            lo, hi = edges[k], edges[k + 1]
            s = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
            qp.append(counts[k] * 0.5 * (hi - lo) * float(np.dot(weights, x ** (s - 1.0) * logx)))
        quad = 2.0 * n0 / x + 2.0 * tree_sum(qp)
    if lhs == 0:
        return IdentityCheck(lhs, rhs, abs(lhs - rhs), False, quad)
    return IdentityCheck(lhs, rhs, abs(lhs - rhs) / abs(lhs), True, quad)


def _check_window(x: float, y: float):
    if not 2 <= y <= x / 2:
        raise ValueError(f"need 2 <= y <= x/2, got x = {x}, y = {y}")


def _xpow(x: float, b: np.ndarray, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``x^rho`` as ``x^beta (cos + i sin)(gamma log x)``."""
    lx = math.log(x)
    mag = np.power(x, b)
    return mag * np.cos(g * lx), mag * np.sin(g * lx)


def explicit_terms(b: np.ndarray, g: np.ndarray, x: float, y: float) -> np.ndarray:
    """Complex values ``(x^rho - (x - y)^rho) / rho``."""
    r1, i1 = _xpow(x, b, g)
    r2, i2 = _xpow(x - y, b, g)
    return ((r1 - r2) + 1j * (i1 - i2)) / (b + 1j * g)


def explicit_psi_short(table: ZeroTable, x: float, y: float, T: float,
                       check_terms: bool = False) -> float:
    """``y - sum over |gamma| <= T of (x^rho - (x - y)^rho)/rho``.

    Conjugate zeros are paired, so the sum is ``2 Re`` over positive
    ordinates. With ``check_terms`` every summand is checked against
    ``2 y x^(beta - 1)``.
    """
    _check_window(x, y)
    b, g = table.upto(T)
    if len(g) == 0:
        return float(y)
    terms = explicit_terms(b, g, x, y)
    if check_terms:
        bound = 2.0 * y * np.power(x, b - 1.0)
        bad = np.nonzero(np.abs(terms) > bound)[0]
        if bad.size:
            i = int(bad[0])
            raise AssertionError(f"summand for gamma = {g[i]} exceeds 2 y x^(beta-1)")
    return float(y) - 2.0 * tree_sum(terms.real)


def mean_value_term(beta: float, gamma: float, x: float, y: float) -> float:
    """``|(x^rho - (x - y)^rho) / rho|`` for a single ``rho``."""
    t = explicit_terms(np.array([beta], float), np.array([gamma], float), x, y)
    return float(abs(t[0]))


def mean_value_term_bound_check(rho: tuple[float, float], x: float, y: float) -> bool:
    """Whether ``|int_{x-y}^x u^(rho-1) du| <= 2 y x^(beta - 1)``."""
    beta, gamma = rho
    if not 0 < beta <= 1:
        raise ValueError("need 0 < beta <= 1")
    if not 0 < y <= x / 2:
        raise ValueError("need 0 < y <= x/2")
    return mean_value_term(beta, gamma, x, y) <= 2.0 * y * x ** (beta - 1.0)


@dataclass(frozen=True, eq=False)
class DirichletPolySpec:
    """Coefficients ``a_m`` for ``M <= m < 2M``, each in ``[0, 1]``."""

    start: int
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if int(self.start) != self.start or self.start < 1:
            raise ValueError("start M must be a positive integer")
        c = tuple(float(a) for a in self.coefficients)
        if len(c) != self.start:
            raise ValueError(f"need exactly M = {self.start} coefficients, got {len(c)}")
        if any(not 0.0 <= a <= 1.0 for a in c):
            raise ValueError("coefficients must lie in [0, 1]")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def ones(cls, M: int) -> "DirichletPolySpec":
        return cls(M, (1.0,) * M)

    @classmethod
    def from_text(cls, M: int, text: str) -> "DirichletPolySpec":
        vals = [float(t) for t in text.replace(",", " ").split() if not t.startswith("#")]
        return cls(M, tuple(vals))

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, 2 * self.start, dtype=float)

    def evaluate(self, betas: np.ndarray, gammas: np.ndarray) -> np.ndarray:
        """Complex values of ``sum a_m m^(-rho)`` at each zero."""
        a = np.array(self.coefficients)
        logm = np.log(self.indices)
        mag = a[None, :] * np.exp(-np.outer(betas, logm))
        ph = np.outer(gammas, logm)
        return (mag * np.cos(ph)).sum(axis=1) - 1j * (mag * np.sin(ph)).sum(axis=1)


def weighted_zero_sum(table: ZeroTable, Mspec: DirichletPolySpec, Nspec: DirichletPolySpec,
                      x: float, T: float, mode: str = "weighted", sigma: float | None = None) -> float:
    """``sum |M(rho) N(rho)|`` over zeros with ``beta >= sigma`` (``mode="threshold"``)
    or ``sum x^(beta-1) |M(rho) N(rho)|`` (``mode="weighted"``), over ``|gamma| <= T``.
    """
    b, g = table.upto(T)
    if mode == "threshold":
        if sigma is None or not 0 <= sigma <= 1:
            raise ValueError("threshold mode needs sigma in [0, 1]")
        keep = b >= sigma
        b, g = b[keep], g[keep]
        w = np.ones_like(b)
    elif mode == "weighted":
        w = np.power(x, b - 1.0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if len(g) == 0:
        return 0.0
    vals = np.abs(Mspec.evaluate(b, g) * Nspec.evaluate(b, g))
    return 2.0 * tree_sum(w * vals)


class StripCheck(NamedTuple):
    holds: bool
    weighted: float
    bound: float


def strip_transition_check(table: ZeroTable, Mspec: DirichletPolySpec, Nspec: DirichletPolySpec,
                           x: float, T: float) -> StripCheck:
    """Weighted sum against ``e (log x + 1) max_k x^(s_k + 1/log x - 1) S(s_k)``.

    ``s_k = k/log x`` are the left ends of strips of width ``1/log x``
    covering ``[0, 1]`` and ``S`` is the threshold sum.
    """
    L = math.log(x)
    lhs = weighted_zero_sum(table, Mspec, Nspec, x, T, "weighted")
    best = 0.0
    for k in range(int(math.floor(L)) + 1):
        s = k / L
        if s > 1:
            break
        best = max(best, x ** (s + 1.0 / L - 1.0) * weighted_zero_sum(table, Mspec, Nspec, x, T, "threshold", s))
    bound = math.e * (L + 1.0) * best
    return StripCheck(lhs <= bound, lhs, bound)


def mean_value_bound_ratio(table: ZeroTable, Mspec: DirichletPolySpec, sigma: float, T: float) -> float:
    """``sum |M(rho)|^2 / (M^(1-2 sigma) (M + min(T, T^(1/2) N(sigma,T))) log T)``.

    The sum runs over ``beta >= sigma``, ``|gamma| <= T``; ``N(sigma, T)``
    counts table zeros with ``beta >= sigma`` and ``0 < gamma <= T``.
    """
    if T <= 1:
        raise ValueError("T must exceed 1")
    b, g = table.upto(T)
    keep = b >= sigma
    b, g = b[keep], g[keep]
    num = 2.0 * tree_sum(np.abs(Mspec.evaluate(b, g)) ** 2) if len(g) else 0.0
    M = Mspec.start
    den = M ** (1 - 2 * sigma) * (M + min(T, math.sqrt(T) * len(g))) * math.log(T)
    if den <= 0:
        raise ZeroDivisionError("mean-value denominator vanished")
    return num / den
