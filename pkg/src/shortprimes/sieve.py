"""Segmented sieve for the von Mangoldt function and short-interval counts.

``Lambda(n)`` is stored as the double ``log p``. Every such value is at
least ``log 2 > 1/2``, so it is an integer multiple of ``2**-53``; window
sums are accumulated as exact integers in those units (:class:`PsiSum`).
Floats derived from them are correctly rounded, and windows add up
exactly when kept as :class:`PsiSum`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .growth import GrowthExpr, ONE as GROWTH_ONE
from .zeros import DirichletPolySpec

SEGMENT = 1 << 22
MAX_ENTRIES = 1 << 25
MAX_N = 10**12
UNIT_SHIFT = 53
_SCALE = float(1 << UNIT_SHIFT)


@lru_cache(maxsize=8)
def primes_upto(n: int) -> np.ndarray:
    """All primes ``<= n`` (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p::p] = False
    out = np.nonzero(flags)[0].astype(np.int64)
    out.setflags(write=False)
    return out


def _log_primes(ps: np.ndarray) -> np.ndarray:
    # libm log rather than numpy's vectorised one, which is off by an ulp
    # for a few primes and differs between CPU code paths
    return np.fromiter(map(math.log, ps.tolist()), dtype=float, count=len(ps))


def _segment_lambda(a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    """``Lambda(n)`` and a primality mask for ``a <= n <= b``."""
    size = b - a + 1
    prime = np.ones(size, dtype=bool)
    if a <= 1:
        prime[: 2 - a] = False
    small = primes_upto(math.isqrt(b))
    for p in small.tolist():
        start = max(p * p, -(-a // p) * p)
        if start <= b:
            prime[start - a::p] = False
    lam = np.zeros(size, dtype=float)
    idx = np.nonzero(prime)[0]
    lam[idx] = _log_primes(idx.astype(np.int64) + a)
    # prime powers p^k, k >= 2, need p <= sqrt(b) and are sparse
    logs = _log_primes(small)
    for p, lp in zip(small.tolist(), logs.tolist()):
        q = p * p
        while q <= b:
            if q >= a:
                lam[q - a] = lp
            q *= p
    return lam, prime


def _segments(lo: int, hi: int, segment: int) -> Iterator[tuple[int, int]]:
    a = lo
    while a <= hi:
        b = min(hi, a + segment - 1)
        yield a, b
        a = b + 1


def _units(lam: np.ndarray) -> int:
    """Exact ``sum(lam) * 2**53`` as a Python integer."""
    if lam.size == 0:
        return 0
    u = (lam * _SCALE).astype(np.int64)
    hi, lo = u >> 32, u & 0xFFFFFFFF
    return (int(hi.sum()) << 32) + int(lo.sum())


class PsiSum(NamedTuple):
    """Exact sum of double ``Lambda`` values, in units of ``2**-53``."""

    units: int

    def __float__(self) -> float:
        return float(Fraction(self.units, 1 << UNIT_SHIFT))

    def __add__(self, other: "PsiSum") -> "PsiSum":
        return PsiSum(self.units + other.units)

    def __sub__(self, other: "PsiSum") -> "PsiSum":
        return PsiSum(self.units - other.units)

    def exact(self) -> Fraction:
        return Fraction(self.units, 1 << UNIT_SHIFT)


class _Window(NamedTuple):
    psi: PsiSum
    primes: int


def _window(lo: int, hi: int, segment: int = SEGMENT) -> _Window:
    """Sums over the half-open window ``lo < n <= hi``."""
    if hi > MAX_N:
        raise ValueError(f"upper end {hi} exceeds the supported range 10^12")
    units = 0
    count = 0
    for a, b in _segments(max(lo + 1, 1), hi, segment):
        lam, prime = _segment_lambda(a, b)
        units += _units(lam)
        count += int(np.count_nonzero(prime))
    return _Window(PsiSum(units), count)


@dataclass(frozen=True, eq=False)
class SieveTables:
    """``Lambda(n)`` for ``lo <= n <= hi`` with cumulative checkpoints."""

    lo: int
    hi: int
    lam: np.ndarray
    is_prime: np.ndarray
    stride: int
    checkpoints: tuple[int, ...]

    def lambda_at(self, n: int) -> float:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside [{self.lo}, {self.hi}]")
        return float(self.lam[n - self.lo])

    def psi_sum(self, n: int) -> PsiSum:
        """Exact ``sum Lambda(k)`` for ``lo <= k <= n``."""
        if n < self.lo:
            return PsiSum(0)
        if n > self.hi:
            raise IndexError(f"{n} above {self.hi}")
        j = (n - self.lo + 1) // self.stride
        base = self.checkpoints[j]
        return PsiSum(base + _units(self.lam[j * self.stride: n - self.lo + 1]))

    def psi(self, n: int) -> float:
        return float(self.psi_sum(n))

    def prime_count(self, n: int) -> int:
        if n < self.lo:
            return 0
        return int(np.count_nonzero(self.is_prime[: min(n, self.hi) - self.lo + 1]))


def sieve_range(lo: int, hi: int, segment: int = SEGMENT, max_entries: int = MAX_ENTRIES,
                stride: int = 1 << 16) -> SieveTables:
    """Sieve ``[lo, hi]`` segment by segment into a :class:`SieveTables`."""
    if not 2 <= lo <= hi <= MAX_N:
        raise ValueError(f"need 2 <= lo <= hi <= 10^12, got [{lo}, {hi}]")
    if hi - lo + 1 > max_entries:
        raise MemoryError(f"range of {hi - lo + 1} entries exceeds the configured budget {max_entries}")
    lams, primes = [], []
    for a, b in _segments(lo, hi, segment):
        lam, prime = _segment_lambda(a, b)
        lams.append(lam)
        primes.append(prime)
    lam = np.concatenate(lams)
    prime = np.concatenate(primes)
    lam.setflags(write=False)
    prime.setflags(write=False)
    cps = [0]
    for j in range(stride, lam.size + 1, stride):
        cps.append(cps[-1] + _units(lam[j - stride: j]))
    return SieveTables(lo, hi, lam, prime, stride, tuple(cps))


def _check_interval(x: int, y: int):
    if int(x) != x or int(y) != y:
        raise TypeError("x and y must be integers")
    if not 2 <= y < x:
        raise ValueError(f"need 2 <= y < x, got x = {x}, y = {y}")


def psi_interval_sum(x: int, y: int) -> PsiSum:
    """Exact ``psi(x) - psi(x - y)`` as a :class:`PsiSum`."""
    _check_interval(x, y)
    return _window(x - y, x).psi


def psi_interval(x: int, y: int) -> float:
    """``psi(x) - psi(x - y)``, correctly rounded."""
    return float(psi_interval_sum(x, y))


def pi_interval(x: int, y: int) -> int:
    """``pi(x) - pi(x - y)``."""
    _check_interval(x, y)
    return _window(x - y, x).primes


def psi(x: int) -> float:
    return float(_window(0, int(x)).psi) if x >= 2 else 0.0


def prime_pi(x: int) -> int:
    return _window(0, int(x)).primes if x >= 2 else 0


class ShortIntervalRow(NamedTuple):
    x: int
    y: int
    psi_ratio: float
    pi_ratio: float
    capped: bool


def short_interval_y(x: int, theta, g: GrowthExpr = GROWTH_ONE) -> tuple[int, bool]:
    """``floor(x^theta g(x))``, capped at ``floor(x/2)`` (flagged)."""
    t = float(Fraction(theta)) if isinstance(theta, str) else float(theta)
    y = math.floor(math.exp(t * math.log(x) + g.log_value(x)))
    cap = x // 2
    if y > cap:
        return cap, True
    if y < 2:
        raise ValueError(f"window length y = {y} < 2 at x = {x}")
    return y, False


def short_interval_report(x_values: Sequence[int], theta, g: GrowthExpr = GROWTH_ONE) -> list[ShortIntervalRow]:
    """Normalised prime counts on ``(x - y, x]`` with ``y = x^theta g(x)``."""
    rows = []
    for x in x_values:
        x = int(x)
        y, capped = short_interval_y(x, theta, g)
        w = _window(x - y, x)
        rows.append(ShortIntervalRow(x, y, float(w.psi) / y, w.primes * math.log(x) / y, capped))
    return rows


def cramer_check(x: int, c: float) -> tuple[int, bool]:
    """Count primes on ``(x, x + c sqrt(x) log x]`` and compare with ``sqrt(x)``."""
    if x < 4 or c <= 0:
        raise ValueError("need x >= 4 and c > 0")
    length = math.floor(c * math.sqrt(x) * math.log(x))
    count = _window(x, x + length).primes if length >= 1 else 0
    return count, count > math.sqrt(x)


class WeightedSumResult(NamedTuple):
    exact_sum: float
    main_term: float
    relative_error: float


def weighted_sum_brute(Mspec: DirichletPolySpec, Nspec: DirichletPolySpec, x: int, y: int) -> WeightedSumResult:
    """``sum a_m b_n Lambda(r)`` over ``x - y < m n r <= x`` against ``y sum a_m b_n/(m n)``.

    For fixed ``m, n`` the condition on ``r`` is ``floor((x-y)/mn) < r <= floor(x/mn)``,
    so each inner sum is a psi window.
    """
    x, y = int(x), int(y)
    if not 2 <= y <= x // 2:
        raise ValueError(f"need 2 <= y <= x/2, got x = {x}, y = {y}")
    M, N = Mspec.start, Nspec.start
    if 4 * M * N > x:
        raise ValueError(f"block too large: 4 M N = {4 * M * N} > x = {x}")
    terms, main = [], []
    for m, a in zip(range(M, 2 * M), Mspec.coefficients):
        if a == 0:
            continue
        for n, b in zip(range(N, 2 * N), Nspec.coefficients):
            if b == 0:
                continue
            mn = m * n
            lo, hi = (x - y) // mn, x // mn
            if hi > lo:
                terms.append(a * b * float(_window(lo, hi).psi))
            main.append(a * b / mn)
    exact = math.fsum(terms)
    main_term = y * math.fsum(main)
    rel = abs(exact - main_term) / main_term if main_term > 0 else 0.0
    return WeightedSumResult(exact, main_term, rel)
