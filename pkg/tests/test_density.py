import math
from fractions import Fraction as F

import pytest

from shortprimes.density import (
    DensityEstimate, LinearFractional, Piece, PiecewiseRationalFn, Sigma0Enclosure, b_of,
    catalog, check_A_properties, get_estimate, ingham_threshold, solve_sigma0,
)

HBIW = get_estimate("hbiw").A


def single(p1, p0, q1, q0, lo=0, hi=1):
    return PiecewiseRationalFn([Piece(F(lo), F(hi), LinearFractional(F(p1), F(p0), F(q1), F(q0)))])


class TestCatalog:
    def test_entries(self):
        names = {e.name for e in catalog()}
        assert {"ingham", "huxley", "guth-maynard", "dh", "hbiw"} <= names

    def test_huxley(self):
        assert get_estimate("huxley").b == F(12, 5)

    def test_guth_maynard(self):
        e = get_estimate("guth-maynard")
        assert e.b == F(30, 13) and e.eps_flag

    def test_ingham(self):
        assert get_estimate("ingham").b == F(925, 348)

    def test_unknown(self):
        with pytest.raises(KeyError):
            get_estimate("nope")

    def test_hbiw_pieces_at_three_quarters(self):
        # the two pieces give 8/5 and 12/5 at 3/4; evaluation takes the larger
        lo, hi = HBIW.pieces
        assert lo.f(F(3, 4)) == F(8, 5)
        assert hi.f(F(3, 4)) == F(12, 5)
        assert HBIW(F(3, 4)) == F(12, 5)

    def test_b_below_two_rejected(self):
        with pytest.raises(ValueError):
            DensityEstimate("bad", b=F(3, 2))


class TestB:
    def test_hbiw(self):
        assert b_of(get_estimate("hbiw")) == F(12, 5)

    def test_constant(self):
        assert b_of(get_estimate("huxley")) == F(12, 5)

    def test_dh(self):
        assert b_of(get_estimate("dh")) == 2


class TestThreshold:
    def test_examples(self):
        assert ingham_threshold(F(30, 13)) == F(17, 30)
        assert ingham_threshold(2) == F(1, 2)
        assert ingham_threshold(F(12, 5)) == F(7, 12)

    def test_finite_zero_free_constant(self):
        assert ingham_threshold(2, F(1, 2), 1) == F(3, 4)
        assert math.isclose(ingham_threshold(2, 0.5, 1), 0.75)

    def test_rejects_small_b(self):
        with pytest.raises(ValueError):
            ingham_threshold(F(3, 2))


class TestSigma0:
    def test_hbiw(self):
        s = solve_sigma0(HBIW)
        assert s == F(7, 9)
        assert HBIW(s) * (1 - s) == F(1, 2)

    def test_constant_two(self):
        assert solve_sigma0(PiecewiseRationalFn.constant(2)) == F(3, 4)

    def test_single_piece(self):
        assert solve_sigma0(single(0, 2, -1, 2)) == F(2, 3)

    def test_irrational_root_enclosure(self):
        # (s + 2)/(s + 1) meets 1/(2(1 - s)) at an irrational point
        r = solve_sigma0(single(1, 2, 1, 1))
        assert isinstance(r, Sigma0Enclosure)
        assert r.hi - r.lo < F(1, 10**12)
        root = (-3 + math.sqrt(33)) / 4
        assert float(r.lo) <= root <= float(r.hi)

    def test_no_crossing(self):
        with pytest.raises(ValueError):
            solve_sigma0(PiecewiseRationalFn.constant(F(1, 4)))


class TestProperties:
    def test_hbiw(self):
        assert check_A_properties(HBIW, F(7, 9))

    def test_constant(self):
        assert check_A_properties(PiecewiseRationalFn.constant(2), F(3, 4))

    def test_increasing(self):
        res = check_A_properties(single(1, 0, 0, 1), F(3, 4))
        assert not res and res.reason == "A_increasing"

    def test_wrong_crossing(self):
        res = check_A_properties(PiecewiseRationalFn.constant(2), F(2, 3))
        assert not res and res.reason == "crossing_value"

    @pytest.mark.parametrize("s,value", [(F(10, 13), F(13, 6)), (F(13, 17), F(17, 8))])
    def test_implied_crossing_values(self, s, value):
        A = PiecewiseRationalFn.constant(value)
        assert 1 / (2 * (1 - s)) == value
        assert check_A_properties(A, s)


class TestPiecewise:
    def test_text_round_trip(self):
        assert PiecewiseRationalFn.from_text(HBIW.to_text()) == HBIW

    def test_comments_and_errors(self):
        txt = "# hbiw\n0 3/4 0 2 -1 2\n3/4 1 0 3 3 -1  # upper piece\n"
        assert PiecewiseRationalFn.from_text(txt) == HBIW
        with pytest.raises(ValueError, match="line 1"):
            PiecewiseRationalFn.from_text("0 1 2\n")

    def test_gap_rejected(self):
        with pytest.raises(ValueError):
            PiecewiseRationalFn([Piece(F(0), F(1, 2), LinearFractional(F(0), F(1), F(0), F(1))),
                                 Piece(F(3, 4), F(1), LinearFractional(F(0), F(1), F(0), F(1)))])

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            single(0, 1, 1, F(-1, 2))

    def test_outside_domain(self):
        with pytest.raises(ValueError):
            single(0, 2, 0, 1, lo=F(1, 2))(F(1, 4))
