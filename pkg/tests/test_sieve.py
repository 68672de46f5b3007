import math
import random

import numpy as np
import pytest

from shortprimes import sieve as sv
from shortprimes.growth import parse_growth
from shortprimes.zeros import DirichletPolySpec


def trial_division_pi(x):
    count = 0
    for n in range(2, x + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            count += 1
    return count


def prime_power_units(x):
    """``psi(x)`` from the prime list in exact ``2**-53`` units."""
    total = 0
    for p in sv.primes_upto(x).tolist():
        u = int(math.log(p) * 2.0 ** 53)
        q = p
        while q <= x:
            total += u
            q *= p
    return total


class TestLambda:
    def test_values(self):
        t = sv.sieve_range(2, 100)
        assert t.lambda_at(8) == math.log(2)
        assert t.lambda_at(9) == math.log(3)
        assert t.lambda_at(10) == 0
        assert t.lambda_at(97) == math.log(97)

    def test_psi_10(self):
        want = 3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7)
        assert sv.psi(10) == pytest.approx(want, rel=1e-15)
        assert sv.sieve_range(2, 10).psi(10) == sv.psi(10)

    def test_pi_100(self):
        assert sv.prime_pi(100) == 25
        assert sv.sieve_range(2, 100).prime_count(100) == 25

    def test_positive_iff_prime_power(self):
        t = sv.sieve_range(2, 5000)
        powers = {q for p in sv.primes_upto(5000).tolist() for q in
                  (p ** k for k in range(1, 13)) if q <= 5000}
        for n in range(2, 5001):
            assert (t.lambda_at(n) > 0) == (n in powers)

    def test_segmented_matches_single(self):
        a = sv.sieve_range(1000, 50_000, segment=777, stride=100)
        b = sv.sieve_range(1000, 50_000)
        assert np.array_equal(a.lam, b.lam)
        assert a.psi_sum(40_000) == b.psi_sum(40_000)

    def test_budget(self):
        with pytest.raises(MemoryError):
            sv.sieve_range(2, 10**6, max_entries=1000)
        with pytest.raises(ValueError):
            sv.sieve_range(1, 10)


class TestConsistency:
    def test_pi_against_trial_division(self):
        xs = [2, 3, 10, 97, 1000, 7919, 10**5]
        counts = dict.fromkeys(xs, 0)
        flags = [False, False] + [True] * (10**5 - 1)
        for n in range(2, math.isqrt(10**5) + 1):
            if flags[n]:
                flags[n * n::n] = [False] * len(flags[n * n::n])
        for x in xs:
            counts[x] = sum(flags[: x + 1])
        assert counts[1000] == trial_division_pi(1000)
        for x in xs:
            assert sv.prime_pi(x) == counts[x]

    @pytest.mark.parametrize("x", [10, 1000, 65_537, 10**6])
    def test_psi_from_prime_list(self, x):
        assert sv.sieve_range(2, x).psi_sum(x).units == prime_power_units(x)
        assert sv._window(0, x).psi.units == prime_power_units(x)

    def test_tables_agree_with_windows(self):
        t = sv.sieve_range(2, 300_000, stride=4096)
        rng = random.Random(4)
        for _ in range(50):
            x = rng.randint(3, 300_000)
            y = rng.randint(2, x - 1)
            assert t.psi_sum(x) - t.psi_sum(x - y) == sv.psi_interval_sum(x, y)


class TestIntervals:
    def test_pi_interval_example(self):
        assert sv.pi_interval(100, 90) == 21

    def test_psi_interval_prime(self):
        for x in (101, 7919, 1_000_003):
            assert sv.psi_interval(x, x - 2) >= math.log(x)

    @pytest.mark.parametrize("y", [0, 1, -3])
    def test_bad_y(self, y):
        with pytest.raises(ValueError):
            sv.pi_interval(100, y)

    def test_integer_inputs(self):
        with pytest.raises(TypeError):
            sv.psi_interval(100.5, 10)

    def test_additivity_exact(self):
        rng = random.Random(6)
        for _ in range(200):
            x = rng.randint(10, 10**6)
            y1 = rng.randint(2, x // 3)
            y2 = rng.randint(2, x // 3)
            whole = sv.psi_interval_sum(x, y1 + y2)
            assert whole == sv.psi_interval_sum(x, y1) + sv.psi_interval_sum(x - y1, y2)

    def test_float_additivity_to_rounding(self):
        x, y1, y2 = 10**6, 3000, 7000
        a = sv.psi_interval(x, y1 + y2)
        b = sv.psi_interval(x, y1) + sv.psi_interval(x - y1, y2)
        assert abs(a - b) <= 2 * math.ulp(a)

    def test_upper_limit(self):
        with pytest.raises(ValueError):
            sv.psi_interval(10**12 + 10, 20)


class TestShortIntervals:
    def test_theta_six_tenths(self):
        (row,) = sv.short_interval_report([10**8], "3/5")
        assert not row.capped
        assert 0.9 <= row.psi_ratio <= 1.1
        assert 0.9 <= row.pi_ratio <= 1.1

    def test_full_interval(self):
        (row,) = sv.short_interval_report([10**6], 1)
        assert row.capped and row.y == 5 * 10**5
        assert 0.99 <= row.psi_ratio <= 1.01

    def test_growth_factor(self):
        y, capped = sv.short_interval_y(10**6, "1/2", parse_growth("log(x)^2"))
        assert y == math.floor(1000 * math.log(1e6) ** 2) and not capped

    def test_degenerate_window(self):
        with pytest.raises(ValueError):
            sv.short_interval_y(100, "1/10")

    @pytest.mark.xfail(strict=True, reason="prime-count fluctuations at these heights break the trend")
    def test_theta_seven_tenths_trend(self):
        rows = sv.short_interval_report([10**6, 10**7, 10**8, 10**9], "7/10")
        dev = [abs(r.psi_ratio - 1) for r in rows]
        steps = [b <= a for a, b in zip(dev, dev[1:])]
        assert sum(steps) >= 2


class TestCramer:
    def test_small(self):
        assert sv.cramer_check(100, 5) == (41, True)

    def test_tiny_c(self):
        assert sv.cramer_check(100, 1e-3) == (0, False)

    def test_million_fixture(self):
        assert sv.cramer_check(10**6, 1) == (1025, True)

    def test_enumeration(self):
        length = math.floor(5 * 10 * math.log(100))
        count = sum(1 for n in range(101, 101 + length) if all(n % d for d in range(2, math.isqrt(n) + 1)))
        assert sv.cramer_check(100, 5)[0] == count

    def test_bad_input(self):
        with pytest.raises(ValueError):
            sv.cramer_check(3, 1)


class TestWeighted:
    def test_single_block_is_psi(self):
        one = DirichletPolySpec.ones(1)
        for x, y in [(10**4, 355), (10**6, 10**4), (999_983, 4321)]:
            r = sv.weighted_sum_brute(one, one, x, y)
            assert r.exact_sum == sv.psi_interval(x, y)
            assert r.main_term == y

    def test_zero_coefficients(self):
        z = DirichletPolySpec(4, (0.0,) * 4)
        r = sv.weighted_sum_brute(z, DirichletPolySpec.ones(4), 10**4, 100)
        assert r.exact_sum == 0 and r.main_term == 0 and r.relative_error == 0

    def test_against_triple_loop(self):
        M = N = DirichletPolySpec.ones(4)
        x, y = 5000, 400
        t = sv.sieve_range(2, x)
        want = 0.0
        terms = []
        for m in range(4, 8):
            for n in range(4, 8):
                s = 0.0
                for r in range(1, x // (m * n) + 1):
                    if x - y < m * n * r <= x and r >= 2:
                        s += t.lambda_at(r)
                terms.append(s)
        want = math.fsum(terms)
        assert sv.weighted_sum_brute(M, N, x, y).exact_sum == pytest.approx(want, rel=1e-12)

    def test_block_too_large(self):
        M = DirichletPolySpec.ones(64)
        with pytest.raises(ValueError):
            sv.weighted_sum_brute(M, M, 10**4, 100)
