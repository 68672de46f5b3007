"""Zero-density inputs: piecewise linear-fractional A(sigma) and a small catalog.

An estimate ``N(sigma, T) << T^{A(sigma)(1-sigma)} ...`` is described either by
a piecewise ``A`` or just by its exponent ``b``. All arithmetic is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

HALF = Fraction(1, 2)


class LinearFractional(NamedTuple):
    """``(p1*s + p0) / (q1*s + q0)``."""

    p1: Fraction
    p0: Fraction
    q1: Fraction
    q0: Fraction

    def __call__(self, s: Fraction) -> Fraction:
        return (self.p1 * s + self.p0) / (self.q1 * s + self.q0)

    def denominator_at(self, s):
        return self.q1 * s + self.q0

    @property
    def det(self) -> Fraction:
        # derivative is det / q(s)^2
        return self.p1 * self.q0 - self.p0 * self.q1


class Piece(NamedTuple):
    lo: Fraction
    hi: Fraction
    f: LinearFractional


class PiecewiseRationalFn:
    """Contiguous linear-fractional pieces on ``[lo, hi]``.

    Jumps between pieces are allowed. At a shared endpoint the larger of
    the two one-sided values is used, so evaluation never understates
    the bound it encodes.
    """

    def __init__(self, pieces: Sequence[Piece]):
        if not pieces:
            raise ValueError("at least one piece is required")
        norm = []
        for p in pieces:
            f = LinearFractional(*(Fraction(c) for c in p.f))
            lo, hi = Fraction(p.lo), Fraction(p.hi)
            if lo > hi:
                raise ValueError(f"piece [{lo}, {hi}] is reversed")
            qa, qb = f.denominator_at(lo), f.denominator_at(hi)
            if qa == 0 or qb == 0 or (qa > 0) != (qb > 0):
                raise ValueError(f"denominator vanishes on [{lo}, {hi}]")
            norm.append(Piece(lo, hi, f))
        for a, b in zip(norm, norm[1:]):
            if a.hi != b.lo:
                raise ValueError(f"pieces not contiguous at {a.hi} / {b.lo}")
        self.pieces: tuple[Piece, ...] = tuple(norm)

    @property
    def lo(self) -> Fraction:
        return self.pieces[0].lo

    @property
    def hi(self) -> Fraction:
        return self.pieces[-1].hi

    @classmethod
    def constant(cls, c, lo=0, hi=1) -> "PiecewiseRationalFn":
        c = Fraction(c)
        return cls([Piece(Fraction(lo), Fraction(hi), LinearFractional(Fraction(0), c, Fraction(0), Fraction(1)))])

    def __call__(self, s) -> Fraction:
        s = Fraction(s)
        if not self.lo <= s <= self.hi:
            raise ValueError(f"A is undefined at sigma = {s} (domain [{self.lo}, {self.hi}])")
        vals = [p.f(s) for p in self.pieces if p.lo <= s <= p.hi]
        return max(vals)

    def __eq__(self, other):
        return isinstance(other, PiecewiseRationalFn) and self.pieces == other.pieces

    def __repr__(self):
        return f"PiecewiseRationalFn({list(self.pieces)!r})"

    def to_text(self) -> str:
        lines = []
        for p in self.pieces:
            lines.append(" ".join(str(v) for v in (p.lo, p.hi, *p.f)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PiecewiseRationalFn":
        """Parse lines ``lo hi p1 p0 q1 q0``; ``#`` starts a comment."""
        pieces = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) != 6:
                raise ValueError(f"line {lineno}: expected 6 fields, got {len(fields)}")
            try:
                vals = [Fraction(f) for f in fields]
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            pieces.append(Piece(vals[0], vals[1], LinearFractional(*vals[2:])))
        return cls(pieces)

    @classmethod
    def load(cls, path) -> "PiecewiseRationalFn":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


@dataclass(frozen=True)
class DensityEstimate:
    name: str
    b: Fraction | None = None
    A: PiecewiseRationalFn | None = None
    eps_flag: bool = False
    logpower: Fraction | None = None
    sigma0: Fraction | None = None
    note: str = ""

    def __post_init__(self):
        if self.b is not None and self.b < 2:
            raise ValueError(f"{self.name}: b = {self.b} < 2 contradicts N(1/2,T) = Omega(T log T)")
        if self.A is not None and b_of(self) < 2:
            raise ValueError(f"{self.name}: sup A < 2")

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "b": None if self.b is None and self.A is None else str(b_of(self)),
            "eps_flag": self.eps_flag,
            "logpower": None if self.logpower is None else str(self.logpower),
            "sigma0": None if self.sigma0 is None else str(self.sigma0),
            "note": self.note,
        }
        if self.A is not None:
            d["A"] = self.A.to_text().strip().splitlines()
        return d


def b_of(est: DensityEstimate) -> Fraction:
    """Exponent ``b``: the supremum of ``A`` over ``[1/2, 1]``, or the stored ``b``."""
    if est.A is None:
        if est.b is None:
            raise ValueError(f"{est.name} carries neither A(sigma) nor b")
        return est.b
    best = None
    for p in est.A.pieces:
        lo, hi = max(p.lo, HALF), min(p.hi, Fraction(1))
        if lo > hi:
            continue
        # linear-fractional pieces are monotone, so endpoints suffice
        for s in (lo, hi):
            v = p.f(s)
            best = v if best is None else max(best, v)
    if best is None:
        raise ValueError("A is not defined on [1/2, 1]")
    return best


def ingham_threshold(b, A_zf=math.inf, B=0):
    """``1 - 1/(b + B/A_zf)``: exact when ``A_zf`` is infinite or rational."""
    b, B = Fraction(b), Fraction(B)
    if b < 2 or B < 0:
        raise ValueError("need b >= 2 and B >= 0")
    if isinstance(A_zf, float):
        if math.isinf(A_zf):
            return 1 - 1 / b
        if A_zf <= 0:
            raise ValueError("A_zf must be positive")
        return 1 - 1 / (float(b) + float(B) / A_zf)
    A_zf = Fraction(A_zf)
    if A_zf <= 0:
        raise ValueError("A_zf must be positive")
    return 1 - 1 / (b + B / A_zf)


class Sigma0Enclosure(NamedTuple):
    """Rational bracket for an irrational crossing point."""

    lo: Fraction
    hi: Fraction


def _crossing_poly(f: LinearFractional):
    """Coefficients (c2, c1, c0) of 2 p(s)(1 - s) - q(s)."""
    p1, p0, q1, q0 = f
    return (-2 * p1, 2 * p1 - 2 * p0 - q1, 2 * p0 - q0)


def _poly(c, s):
    return (c[0] * s + c[1]) * s + c[2]


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _roots_in(c, lo, hi, tol=Fraction(1, 10**13)):
    """Roots of the quadratic ``c`` in ``[lo, hi]``; exact or as enclosures."""
    c2, c1, c0 = c
    if c2 == 0 and c1 == 0:
        return [hi] if c0 == 0 else []
    if c2 == 0:
        r = -c0 / c1
        return [r] if lo <= r <= hi else []
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    sq = _rational_sqrt(disc)
    if sq is not None:
        return sorted({r for r in ((-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2)) if lo <= r <= hi})
    # irrational roots: bisect with exact sign evaluation on each monotone side
    vertex = -c1 / (2 * c2)
    out = []
    for a, b in ((lo, min(hi, vertex)), (max(lo, vertex), hi)):
        if a > b:
            continue
        fa, fb = _poly(c, a), _poly(c, b)
        if fa == 0:
            out.append(a)
            continue
        if (fa > 0) == (fb > 0):
            continue
        while b - a > tol:
            m = (a + b) / 2
            fm = _poly(c, m)
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b = m
        out.append(Sigma0Enclosure(a, b))
    return out


def solve_sigma0(A: PiecewiseRationalFn):
    """Last crossing of ``A(s)`` with ``1/(2(1 - s))`` on ``[1/2, 1)``.

    Returns an exact :class:`~fractions.Fraction` when the root is rational,
    otherwise a :class:`Sigma0Enclosure` narrower than ``1e-12``.
    """
    candidates = []
    for p in A.pieces:
        lo, hi = max(p.lo, HALF), min(p.hi, Fraction(1))
        if lo > hi:
            continue
        for r in _roots_in(_crossing_poly(p.f), lo, hi):
            if (r if isinstance(r, Fraction) else r.lo) < 1:
                candidates.append(r)
    if not candidates:
        raise ValueError("A(sigma) has no crossing with 1/(2(1-sigma)) in [1/2, 1)")
    root = max(candidates, key=lambda r: r if isinstance(r, Fraction) else r.lo)
    start = root if isinstance(root, Fraction) else root.hi

    def gap(s):
        return 2 * A(s) * (1 - s) - 1

    # no piece has a root beyond `root`, so the sign is constant between breakpoints
    cuts = sorted({start, Fraction(1)} | {q for p in A.pieces for q in (p.lo, p.hi) if start < q < 1})
    for a, b in zip(cuts, cuts[1:]):
        if gap((a + b) / 2) >= 0 or (b < 1 and gap(b) >= 0):
            raise ValueError(f"A(sigma) is not below 1/(2(1-sigma)) after its last crossing near {a}")
    return root


class AProperties(NamedTuple):
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _quad_max(c, lo, hi):
    c2, c1, c0 = c
    pts = [lo, hi]
    if c2 != 0:
        v = -c1 / (2 * c2)
        if lo < v < hi:
            pts.append(v)
    return max(_poly(c, s) for s in pts)


def check_A_properties(A: PiecewiseRationalFn, sigma0) -> AProperties:
    """Hypotheses on ``A`` needed by the weighted zero-density lemmas at ``sigma0``.

    Checks ``A(sigma0) = 1/(2(1 - sigma0))``, that ``A >= 0`` and ``A`` is
    non-increasing on ``[sigma0, 1]`` (including jumps), and that
    ``A(s)(1 - s)`` is non-increasing there.
    """
    s0 = Fraction(sigma0)
    if not HALF < s0 < 1:
        return AProperties(False, "sigma0_out_of_range")
    if not (A.lo <= s0 and A.hi >= 1):
        return AProperties(False, "domain")
    prev_end = None
    for p in A.pieces:
        lo, hi = max(p.lo, s0), min(p.hi, Fraction(1))
        if lo > hi:
            continue
        if p.f(lo) < 0 or p.f(hi) < 0:
            return AProperties(False, "negative")
        if p.f.det > 0:
            return AProperties(False, "A_increasing")
        if prev_end is not None and p.f(lo) > prev_end:
            return AProperties(False, "A_jumps_up")
        prev_end = p.f(hi)
        # numerator of d/ds [p(s)(1-s)/q(s)], a quadratic in s
        p1, p0, q1, q0 = p.f
        a2 = -p1 * q1
        a1 = -2 * p1 * q0
        a0 = (p1 - p0) * q0 - p0 * q1
        if _quad_max((a2, a1, a0), lo, hi) > 0:
            return AProperties(False, "A_times_1_minus_sigma_increasing")
    if A(s0) != 1 / (2 * (1 - s0)):
        return AProperties(False, "crossing_value")
    return AProperties(True)


def _hbiw() -> PiecewiseRationalFn:
    F = Fraction
    return PiecewiseRationalFn([
        Piece(F(0), F(3, 4), LinearFractional(F(0), F(2), F(-1), F(2))),   # 2/(2 - s)
        Piece(F(3, 4), F(1), LinearFractional(F(0), F(3), F(3), F(-1))),   # 3/(3s - 1)
    ])


_CATALOG = (
    DensityEstimate("ingham", b=Fraction(925, 348), eps_flag=True,
                    note="Ingham (1937), via bounds for zeta on the critical line"),
    DensityEstimate("huxley", b=Fraction(12, 5), note="Huxley (1972)"),
    DensityEstimate("guth-maynard", b=Fraction(30, 13), eps_flag=True, note="Guth-Maynard (2024)"),
    DensityEstimate("dh", b=Fraction(2), eps_flag=True, note="Density Hypothesis"),
    DensityEstimate("hbiw", A=_hbiw(), note="Heath-Brown-Iwaniec piecewise A(sigma)"),
    DensityEstimate("ivic-11.5", sigma0=Fraction(10, 13),
                    note="crossing point only; A(sigma) from Ivic Th. 11.5 not stored (supply via file)"),
    DensityEstimate("ivic-11.4", sigma0=Fraction(13, 17),
                    note="crossing point only; A(sigma) from Ivic Th. 11.4 not stored (supply via file)"),
)


def catalog() -> tuple[DensityEstimate, ...]:
    return _CATALOG


def get_estimate(name: str) -> DensityEstimate:
    for est in _CATALOG:
        if est.name == name:
            return est
    raise KeyError(f"unknown density estimate {name!r}; known: {[e.name for e in _CATALOG]}")
