import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from shortprimes import acceptance
from shortprimes.growth import (
    ConstantStrip, GrowthExpr, GrowthSyntaxError, InghamLogLog, KorobovVinogradov, ONE,
    Term, Verdict, check_ingham_gen_conditions, compare_growth, d_epsilon, format_growth,
    min_log_power_C, omega_eta, parse_growth, pnt_error_bound, zero_free_region,
)

KV = KorobovVinogradov(c=F(100, 4808))


def terms(e):
    return [(t.coeff, t.alpha, t.beta, t.gamma) for t in e.terms]


class TestParse:
    def test_x_power(self):
        assert terms(parse_growth("x^(1/2)")) == [(F(1, 2), 1, 0, 0)]

    def test_exp_factor(self):
        assert terms(parse_growth("exp(log(x)^(2/3))")) == [(1, F(2, 3), 0, 0)]

    def test_x_over_log(self):
        assert terms(parse_growth("x * log(x)^(-1)")) == [(1, 1, 0, 0), (-1, 0, 1, 0)]

    def test_loglog_factor_uses_third_slot(self):
        assert terms(parse_growth("loglog(x)^(-1/3)")) == [(F(-1, 3), 0, 0, 1)]

    def test_full_example(self):
        e = parse_growth("x^(1/2) * exp(log(x)^(2/3)) * log(x)^3 * loglog(x)^(-1/3)")
        assert [t.key for t in e.terms] == sorted((t.key for t in e.terms), reverse=True)
        assert len(e.terms) == 4

    def test_decimal_is_exact(self):
        assert parse_growth("exp(log(x)^0.7)").terms[0].alpha == F(7, 10)

    def test_merging_and_cancellation(self):
        assert parse_growth("x^(1/2) * x^(-1/2)") == ONE
        assert terms(parse_growth("log(x) * log(x)")) == [(2, 0, 1, 0)]

    def test_constants_drop(self):
        assert parse_growth("1") == ONE

    def test_superpolynomial_term_rejected(self):
        with pytest.raises(ValueError):
            GrowthExpr.monomial(1, 1, 0, 1)
        with pytest.raises(ValueError):
            GrowthExpr.monomial(1, 2)

    @pytest.mark.parametrize("text", ["x^", "log(y)", "exp(log(x)^(3/2))", "x^(1/0)", "x ** 2", "exp(x)"])
    def test_syntax_errors(self, text):
        with pytest.raises(GrowthSyntaxError):
            parse_growth(text)

    def test_error_reports_position(self):
        with pytest.raises(GrowthSyntaxError) as info:
            parse_growth("x^(1/2) * lg(x)")
        assert info.value.pos == 10

    def test_roundtrip_examples(self):
        for text in ["x^(1/2) * log(x)^3", "exp(2*log(x)^(1/2) - 1/3*log(x)^(1/3)*loglog(x)^2)", "1",
                     "x * loglog(x)^(-1)"]:
            e = parse_growth(text)
            assert parse_growth(format_growth(e)) == e


class TestCompare:
    def test_log_factor_dominates(self):
        assert compare_growth(parse_growth("x^(1/2)"), parse_growth("x^(1/2)*log(x)")) == Verdict.LITTLE_O

    def test_identity_is_theta(self):
        f = parse_growth("exp(log(x)^(2/3))")
        assert compare_growth(f, f) == Verdict.THETA

    def test_leading_alpha_wins(self):
        f = parse_growth("exp(log(x)^(7/10))")
        g = parse_growth("exp(log(x)^(67/100) * loglog(x)^(1/3))")
        assert compare_growth(f, g) == Verdict.LITTLE_OMEGA

    def test_leading_alpha_numerics_are_preasymptotic(self):
        # The structural verdict is LittleOmega, but log f - log g is still
        # negative and falling at 10^6 and 10^12; the crossing is near
        # x = exp(exp(40)). Only the structural verdict is asserted.
        f = parse_growth("exp(log(x)^(7/10))")
        g = parse_growth("exp(log(x)^(67/100) * loglog(x)^(1/3))")
        d6 = f.log_value(1e6) - g.log_value(1e6)
        d12 = f.log_value(1e12) - g.log_value(1e12)
        assert d6 < 0 and d12 < d6
        L = math.exp(60.0)
        assert L ** 0.7 > L ** 0.67 * math.log(L) ** (1 / 3)

    def test_float_ties_within_tolerance(self):
        f = GrowthExpr.monomial(0.1 + 0.2, 1)
        g = GrowthExpr.monomial(0.3, 1)
        assert compare_growth(f, g) == Verdict.THETA

    def test_theta_iff_identical_terms(self):
        rng = random.Random(5)
        for _ in range(300):
            f, g = acceptance.random_growth(rng), acceptance.random_growth(rng)
            assert (compare_growth(f, g) == Verdict.THETA) == (f.terms == g.terms)


def _rationals(lo, hi):
    return st.fractions(min_value=lo, max_value=hi, max_denominator=12)


def _below_x(t):
    return (t[1], t[2], t[3]) <= (1, 0, 0)


growth_terms = st.lists(
    st.tuples(_rationals(-3, 3), _rationals(0, 1), _rationals(-2, 2), _rationals(-1, 1)).filter(_below_x),
    max_size=4,
).map(lambda ts: GrowthExpr(tuple(Term(c, a, b, g) for c, a, b, g in ts)))


@settings(max_examples=200, deadline=None)
@given(growth_terms, growth_terms)
def test_antisymmetry_property(f, g):
    assert compare_growth(f, g).flipped() == compare_growth(g, f)


@settings(max_examples=200, deadline=None)
@given(growth_terms, growth_terms, growth_terms)
def test_transitivity_property(f, g, h):
    if compare_growth(f, g) == Verdict.LITTLE_O and compare_growth(g, h) == Verdict.LITTLE_O:
        assert compare_growth(f, h) == Verdict.LITTLE_O


@settings(max_examples=200, deadline=None)
@given(growth_terms)
def test_roundtrip_property(e):
    assert parse_growth(format_growth(e)) == e


@settings(max_examples=100, deadline=None)
@given(growth_terms, growth_terms)
def test_product_respects_order(f, g):
    # multiplying both sides by the same factor preserves the verdict
    h = parse_growth("x^(1/3) * log(x)^2")
    assert compare_growth(f * h, g * h) == compare_growth(f, g)


def test_numeric_sanity_for_littleo_pairs():
    # when g/f is a product of powers of x, log x and loglog x with a leading
    # x-power, log(g/f) increases between 10^50 and 10^100; exp-type factors
    # can stay pre-asymptotic far beyond any testable height
    rng = random.Random(11)
    power_keys = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    checked = 0
    for _ in range(2000):
        f, g = acceptance.random_growth(rng), acceptance.random_growth(rng)
        if compare_growth(f, g) != Verdict.LITTLE_O:
            continue
        ratio = g / f
        if ratio.leading().key != (1, 0, 0) or any(t.key not in power_keys for t in ratio.terms):
            continue
        assert ratio.log_value(1e100) > ratio.log_value(1e50)
        checked += 1
    assert checked > 20


class TestRegions:
    def test_strip_eta(self):
        z = ConstantStrip(eta0=F(1, 10))
        assert z.eta(10.0) == z.eta(1e9) == 0.1

    def test_kv_monotone(self):
        vals = [KV.eta(10.0 ** k) for k in range(1, 30)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
        assert all(0 < v < 0.5 for v in vals)

    def test_ingham_monotone_and_clamped(self):
        z = InghamLogLog(A=F(1, 10))
        assert z.eta(3.0) == z.eta(z.T0)
        vals = [z.eta(10.0 ** k) for k in range(2, 30)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_bad_params(self):
        with pytest.raises(ValueError):
            ConstantStrip(eta0=F(1, 2))
        with pytest.raises(ValueError):
            KorobovVinogradov(c=-1)
        with pytest.raises(ValueError):
            zero_free_region("nope", 1)


class TestConditions:
    B1 = GrowthExpr.log_power(1)

    def test_dh_alpha_07_holds(self):
        reps = check_ingham_gen_conditions(F(1, 2), 2, parse_growth("exp(log(x)^0.7)"), KV, self.B1, 1)
        assert [r.condition_id for r in reps] == ["at-threshold", "log-lower-bound"]
        assert reps[0].holds and reps[0].verdict == Verdict.LITTLE_O

    def test_dh_alpha_06_fails(self):
        reps = check_ingham_gen_conditions(F(1, 2), 2, parse_growth("exp(log(x)^0.6)"), KV, self.B1, 1)
        assert not reps[0].holds

    def test_boundary_alpha(self):
        for alpha, ok in ((F(68, 100), True), (F(66, 100), False), (F(2, 3), False)):
            g = GrowthExpr.monomial(1, alpha)
            assert check_ingham_gen_conditions(F(1, 2), 2, g, KV, self.B1, 1)[0].holds is ok

    def test_condition_above_threshold(self):
        g = parse_growth("log(x)^2")
        reps = check_ingham_gen_conditions(F(3, 5), F(30, 13), g, ConstantStrip(eta0=F(1, 10)), self.B1, 1)
        assert [r.condition_id for r in reps] == ["above-threshold"]
        assert reps[0].holds
        assert reps[0].rhs == GrowthExpr.x_power(F(1, 130))

    def test_rejects_large_b(self):
        with pytest.raises(ValueError):
            check_ingham_gen_conditions(F(1, 2), 3, ONE, KV, self.B1, 1)

    def test_rejects_small_b(self):
        with pytest.raises(ValueError):
            check_ingham_gen_conditions(F(3, 4), F(3, 2), ONE, KV, self.B1, 1)

    def test_rejects_g_below_log_delta(self):
        with pytest.raises(ValueError):
            check_ingham_gen_conditions(F(1, 2), 2, parse_growth("log(x)^(1/2)"), KV, self.B1, 1)

    def test_rejects_g_with_x_power(self):
        with pytest.raises(ValueError):
            check_ingham_gen_conditions(F(1, 2), 2, parse_growth("x^(1/100)"), KV, self.B1, 1)

    def test_33_allows_theta(self):
        g = parse_growth("log(x)^2")
        reps = check_ingham_gen_conditions(F(1, 2), 2, g, ConstantStrip(eta0=F(1, 4)), ONE, 1)
        lower = [r for r in reps if r.condition_id == "log-lower-bound"][0]
        assert lower.verdict == Verdict.THETA and lower.holds

    def test_report_dict(self):
        reps = check_ingham_gen_conditions(F(1, 2), 2, parse_growth("exp(log(x)^0.7)"), KV, self.B1, 1)
        d = reps[0].to_dict()
        assert d["verdict"] == "LittleO" and d["holds"] is True


def _grid_min(x, eta, n=10**5):
    lx = math.log(x)
    return min(eta.eta(math.exp(lx * i / n)) * lx + lx * i / n for i in range(n + 1))


class TestOmega:
    def test_strip_exact(self):
        for x in (10.0, 1e6, 1e20):
            v = omega_eta(x, ConstantStrip(eta0=F(1, 5)))
            assert v == pytest.approx(0.2 * math.log(x), rel=1e-12)

    def test_kv_matches_grid(self):
        assert omega_eta(1e8, KV) == pytest.approx(_grid_min(1e8, KV), rel=1e-6)

    def test_ingham_matches_grid(self):
        z = InghamLogLog(A=1)
        assert omega_eta(1e6, z) == pytest.approx(_grid_min(1e6, z), rel=1e-6)


class TestPntBound:
    def test_pintz_below_ingham(self):
        for x in (1e3, 1e8, 1e20):
            assert pnt_error_bound(x, KV, "ingham_half", 0.1) >= pnt_error_bound(x, KV, "pintz_one", 0.1)

    def test_strip_power(self):
        x = 1e10
        assert pnt_error_bound(x, ConstantStrip(eta0=F(1, 4)), "pintz_one", 0.0) == pytest.approx(x ** 0.75, rel=1e-12)

    def test_kv_shape(self):
        # log(bound/x) ~ -d log^{3/5} x (loglog x)^{-1/5} is reached slowly:
        # below about 10^40 the infimum sits at T = x, after that the
        # normalised exponent decreases towards d
        d = d_epsilon(KV.c)

        def ratio(x):
            lx = math.log(x)
            return -math.log(pnt_error_bound(x, KV) / x) / (lx ** 0.6 * math.log(lx) ** -0.2)
        r = [ratio(10.0 ** k) for k in (48, 96, 192, 300)]
        assert all(a > b > d for a, b in zip(r, r[1:]))
        assert r[-1] < 1.25 * d

    def test_rejects_bad_factor(self):
        with pytest.raises(ValueError):
            pnt_error_bound(1e6, KV, "other")


class TestConstants:
    def test_d_eps_c1(self):
        assert d_epsilon(1, 0) == pytest.approx((15625 / 324) ** 0.2, rel=1e-15)

    def test_d_eps_kv(self):
        # independent evaluation: (5^6 c^3 / 324)^(1/5) with c = 1/48.08
        c = 1 / 48.08
        assert d_epsilon(c) == pytest.approx(math.exp((6 * math.log(5) + 3 * math.log(c) - math.log(324)) / 5), rel=1e-14)
        assert round(d_epsilon(c), 4) == 0.2126

    def test_d_eps_zero(self):
        v = d_epsilon(1, 0)
        assert d_epsilon(1, v) == 0

    def test_min_log_power(self):
        assert min_log_power_C(2, 1, F(1, 2)) == 2
        assert min_log_power_C(2, 0, F(1, 2)) == 1
        assert min_log_power_C(F(12, 5), 3, F(1, 4)) == F(20, 3)
