"""Exact rational admissibility regions for weighted zero-density bounds.

Each constraint is a :class:`ThetaLinIneq` ``a_u*u + a_v*v <= c0 + c_theta*theta``
with :class:`fractions.Fraction` coefficients, so a whole family of regions
indexed by ``theta`` is carried symbolically. :func:`specialize_theta`
fixes ``theta`` and returns the (u, v) polygon as an exact vertex list.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .density import PiecewiseRationalFn

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


def _rat(q, name: str) -> Fraction:
    if isinstance(q, float):
        raise TypeError(f"{name} must be an exact rational, got float {q!r}")
    try:
        return Fraction(q)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"{name}: cannot parse {q!r} as a rational") from exc


class ThetaLinIneq(NamedTuple):
    """``a_u*u + a_v*v <= c0 + c_theta*theta``."""

    a_u: Fraction
    a_v: Fraction
    c0: Fraction
    c_theta: Fraction

    @classmethod
    def make(cls, a_u, a_v, c0, c_theta) -> "ThetaLinIneq":
        return cls(Fraction(a_u), Fraction(a_v), Fraction(c0), Fraction(c_theta))

    @property
    def is_theta_bound(self) -> bool:
        return self.a_u == 0 and self.a_v == 0

    def canonical(self) -> "ThetaLinIneq":
        """Positive rescaling making the first nonzero of (a_u, a_v, c_theta, c0) equal to +-1."""
        for c in (self.a_u, self.a_v, self.c_theta, self.c0):
            if c != 0:
                s = abs(c)
                return ThetaLinIneq(self.a_u / s, self.a_v / s, self.c0 / s, self.c_theta / s)
        return self

    def swap(self) -> "ThetaLinIneq":
        return ThetaLinIneq(self.a_v, self.a_u, self.c0, self.c_theta)

    def at(self, theta: Fraction) -> tuple[Fraction, Fraction, Fraction]:
        return self.a_u, self.a_v, self.c0 + self.c_theta * theta

    def holds(self, u, v, theta) -> bool:
        return self.a_u * u + self.a_v * v <= self.c0 + self.c_theta * theta

    def __str__(self) -> str:
        return f"{self.a_u}*u + {self.a_v}*v <= {self.c0} + {self.c_theta}*theta"


@dataclass(frozen=True)
class ThetaConstraintSet:
    inequalities: tuple[ThetaLinIneq, ...]
    sigma0: Fraction | None = None
    variant: str = "basic"
    eta: Fraction | None = None
    eps: Fraction | None = None

    def canonical(self) -> tuple[ThetaLinIneq, ...]:
        return tuple(sorted(set(q.canonical() for q in self.inequalities)))

    def theta_upper(self) -> Fraction | None:
        """Tightest pure bound ``theta <= t`` in the set, if any."""
        best = None
        for q in self.inequalities:
            if q.is_theta_bound and q.c_theta < 0:
                t = -q.c0 / q.c_theta
                best = t if best is None else min(best, t)
        return best

    def to_dict(self) -> dict:
        return {
            "sigma0": None if self.sigma0 is None else str(self.sigma0),
            "variant": self.variant,
            "eta": None if self.eta is None else str(self.eta),
            "eps": None if self.eps is None else str(self.eps),
            "constraints": [[str(c) for c in q] for q in self.canonical()],
        }


def _check_sigma0(sigma0) -> Fraction:
    s = _rat(sigma0, "sigma0")
    if not HALF < s < ONE:
        raise ValueError(f"sigma0 = {s} must lie strictly between 1/2 and 1")
    return s


def theta_cap(sigma0) -> Fraction:
    """Upper limit ``(3 - 2 sigma0)/(7 - 6 sigma0)`` on theta."""
    s = _check_sigma0(sigma0)
    return (3 - 2 * s) / (7 - 6 * s)


def _conditions(s: Fraction, upper: Fraction) -> list[ThetaLinIneq]:
    k = 2 * s - 1
    return [
        # (2 s - 2 theta)/(2 s - 1) <= u + v
        ThetaLinIneq.make(-1, -1, -2 * s / k, 2 / k),
        ThetaLinIneq.make(1, 1, upper, 0),
        ThetaLinIneq.make(2 - 2 * s, 1 - 2 * s, 1 - 2 * s, 1),
        ThetaLinIneq.make(1 - 2 * s, 2 - 2 * s, 1 - 2 * s, 1),
        ThetaLinIneq.make(0, 0, theta_cap(s), -1),
    ]


def general_conditions(sigma0) -> ThetaConstraintSet:
    """The five admissibility inequalities for a crossing point ``sigma0``."""
    s = _check_sigma0(sigma0)
    return ThetaConstraintSet(tuple(_conditions(s, ONE)), sigma0=s)


def epsilon_variant_conditions(sigma0, eta, eps) -> ThetaConstraintSet:
    """As :func:`general_conditions` with ``u + v <= 1 - eta``; ``eps`` is carried along."""
    s = _check_sigma0(sigma0)
    eta, eps = _rat(eta, "eta"), _rat(eps, "eps")
    if eta <= 0:
        raise ValueError(f"eta = {eta} must be positive")
    if not 0 < eps < 1:
        raise ValueError(f"eps = {eps} must lie in (0, 1)")
    return ThetaConstraintSet(tuple(_conditions(s, 1 - eta)), sigma0=s,
                              variant="eps", eta=eta, eps=eps)


def delta_of_epsilon(eps, theta) -> Fraction:
    """``eps / (4 (1 - theta))``."""
    eps, theta = _rat(eps, "eps"), _rat(theta, "theta")
    if theta >= 1:
        raise ValueError(f"theta = {theta} must be < 1")
    if eps < 0:
        raise ValueError(f"eps = {eps} must be non-negative")
    return eps / (4 * (1 - theta))


def constraints_equal(s1: ThetaConstraintSet | Iterable[ThetaLinIneq],
                      s2: ThetaConstraintSet | Iterable[ThetaLinIneq]) -> bool:
    def canon(s):
        if isinstance(s, ThetaConstraintSet):
            return s.canonical()
        return ThetaConstraintSet(tuple(s)).canonical()
    return canon(s1) == canon(s2)


class ThetaCapError(ValueError):
    """Raised when theta violates a pure theta-bound of the constraint set."""


class Halfplane(NamedTuple):
    a_u: Fraction
    a_v: Fraction
    rhs: Fraction

    def holds(self, u, v) -> bool:
        return self.a_u * u + self.a_v * v <= self.rhs


@dataclass(frozen=True)
class Region2D:
    halfplanes: tuple[Halfplane, ...]
    vertices: tuple[tuple[Fraction, Fraction], ...]
    theta: Fraction | None = None

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, u, v) -> bool:
        return all(h.holds(u, v) for h in self.halfplanes)

    def edge_midpoints(self) -> list[tuple[Fraction, Fraction]]:
        vs = self.vertices
        if len(vs) < 2:
            return []
        pairs = zip(vs, vs[1:] + vs[:1]) if len(vs) > 2 else [(vs[0], vs[1])]
        return [((a[0] + b[0]) / 2, (a[1] + b[1]) / 2) for a, b in pairs]

    def to_dict(self) -> dict:
        return {
            "theta": None if self.theta is None else str(self.theta),
            "vertices": [[str(u), str(v)] for u, v in self.vertices],
        }


def _intersect(h1: Halfplane, h2: Halfplane):
    det = h1.a_u * h2.a_v - h1.a_v * h2.a_u
    if det == 0:
        return None
    u = (h1.rhs * h2.a_v - h1.a_v * h2.rhs) / det
    v = (h1.a_u * h2.rhs - h1.rhs * h2.a_u) / det
    return u, v


def _convex_order(points: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Counter-clockwise order of points in convex position (exact monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def region_from_halfplanes(halfplanes: Iterable[Halfplane], theta=None) -> Region2D:
    """Vertices of a 2D halfplane intersection by pairwise intersection and filtering.

    Only extreme points are reported; an unbounded intersection keeps its
    finite vertices only.
    """
    hs = tuple(halfplanes)
    for h in hs:
        if h.a_u == 0 and h.a_v == 0 and h.rhs < 0:
            return Region2D(hs, (), theta)
    cand = []
    for h1, h2 in itertools.combinations(hs, 2):
        p = _intersect(h1, h2)
        if p is not None and all(h.holds(*p) for h in hs):
            cand.append(p)
    return Region2D(hs, tuple(_convex_order(cand)), theta)


def specialize_theta(cset: ThetaConstraintSet, theta) -> Region2D:
    """Fix ``theta`` and return the exact (u, v) region."""
    theta = _rat(theta, "theta")
    for q in cset.inequalities:
        if q.is_theta_bound and not q.holds(0, 0, theta):
            raise ThetaCapError(f"theta = {theta} exceeds the cap {-q.c0 / q.c_theta}")
    if not HALF <= theta < ONE:
        raise ValueError(f"theta = {theta} outside [1/2, 1)")
    if cset.variant == "eps" and not cset.eps < 1 - theta:
        raise ThetaCapError(f"eps = {cset.eps} must be < 1 - theta = {1 - theta}")
    hs = [Halfplane(*q.at(theta)) for q in cset.inequalities if not q.is_theta_bound]
    return region_from_halfplanes(hs, theta)


def envelope_A(sigma0) -> PiecewiseRationalFn:
    """Constant ``A = 1/(2(1 - sigma0))``.

    It is the extremal density exponent compatible with a crossing point at
    ``sigma0``: it meets the crossing condition and ``A(sigma)(1 - sigma)``
    decreases. Used when only ``sigma0`` is known.
    """
    s = _check_sigma0(sigma0)
    return PiecewiseRationalFn.constant(1 / (2 * (1 - s)))


class Counterexample(NamedTuple):
    u: Fraction
    v: Fraction
    sigma: Fraction
    lhs: Fraction
    rhs: Fraction


class EstLogsResult(NamedTuple):
    ok: bool
    counterexample: Counterexample | None
    points_checked: int

    def __bool__(self):
        return self.ok


def estlogs_exponent(sigma, theta, A: PiecewiseRationalFn, eps=None) -> Fraction:
    """Exponent of ``E = min(T, T^(1/2 + A(sigma)(1 - sigma) [+ delta]))`` in base ``x``."""
    if eps is None:
        return (1 - theta) * min(ONE, HALF + A(sigma) * (1 - sigma))
    delta = delta_of_epsilon(eps, theta)
    return (1 - theta - eps / 2) * min(ONE, HALF + A(sigma) * (1 - sigma) + delta)


def estlogs_sides(u, v, sigma, theta, A, eps=None) -> tuple[Fraction, Fraction]:
    e = estlogs_exponent(sigma, theta, A, eps)
    lhs = (max(ZERO, e - u) + max(ZERO, e - v)) / 2
    rhs = (1 - u - v) * (1 - sigma)
    return lhs, rhs


def brute_force_estlogs(sigma0, theta, A: PiecewiseRationalFn, samples: int = 200,
                        variant: str = "basic", eta=None, eps=None,
                        extra_points: Iterable[tuple] = ()) -> EstLogsResult:
    """Check the exponent inequality on a sigma grid at every region vertex and edge midpoint.

    ``sigma`` runs over ``k/samples`` for ``0 <= k < samples``; ``sigma = 1``
    is skipped since there are no zeros on that line. ``extra_points`` are
    checked too, whether or not they lie in the region, which is how the
    checker's ability to reject is itself tested. The first violation in
    (point, sigma) order is returned.
    """
    sigma0, theta = _check_sigma0(sigma0), _rat(theta, "theta")
    if samples < 1:
        raise ValueError("samples must be positive")
    if variant == "basic":
        cset = general_conditions(sigma0)
        eps_v = None
    elif variant == "eps":
        cset = epsilon_variant_conditions(sigma0, eta, eps)
        eps_v = cset.eps
    else:
        raise ValueError(f"unknown variant {variant!r}")
    region = specialize_theta(cset, theta)
    points = list(region.vertices) + region.edge_midpoints()
    points += [(_rat(u, "u"), _rat(v, "v")) for u, v in extra_points]
    grid = [Fraction(k, samples) for k in range(samples)]
    for s in grid:
        if not A.lo <= s <= A.hi:
            raise ValueError(f"A undefined at sigma = {s}")
    exps = [(s, estlogs_exponent(s, theta, A, eps_v)) for s in grid]
    n = 0
    for u, v in points:
        for s, e in exps:
            lhs = (max(ZERO, e - u) + max(ZERO, e - v)) / 2
            rhs = (1 - u - v) * (1 - s)
            n += 1
            if lhs > rhs:
                return EstLogsResult(False, Counterexample(u, v, s, lhs, rhs), n)
    return EstLogsResult(True, None, n)
