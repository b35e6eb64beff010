import math
from fractions import Fraction

import numpy as np
import pytest

from orderstats.arith import factorize
from orderstats.constants import artin_constant, li, stephens_constant
from orderstats.errors import CapacityError, DomainError
from orderstats.orders import lambda_sieve
from orderstats.statistics import (
    N_a,
    avg_order_stat,
    lambda_counts,
    lambda_main_term,
    lambda_stat,
    local_order_average,
    main_term_C,
    pair_counts,
    power_divisor_stat,
    primitive_root_stat,
    variance_power_divisor_stat,
    variance_primitive_root_stat,
    variance_stat,
)

from oracles import (
    avg_order_naive,
    divides_count_naive,
    lambda_prim_count_naive,
    lambda_prim_count_vec,
    order_bf,
    per_a_order_sums,
    phi_bf,
    primes_td,
    primroot_counts_naive,
)

# frozen naive-oracle values
AVG_50_100 = 13.956287123419282  # avg_order_naive(N=50, x=100)
PRIMROOT_7_6 = [1, 2, 3, 0, 3, 0]  # primroot_counts_naive(N=6, x=7)
PAIRS_5_2 = [[3, 0], [2, 3]]  # divides_count_naive over (a, b) in {1,2}^2, x=5
PER_A_3_2 = [1.5, 1.0]  # per_a_order_sums(N=2, x=3)
LAMBDA_10_30 = 84  # lambda_prim_count_naive(y=10, x=30)
LAMBDA_7_12 = 33  # lambda_prim_count_naive(y=7, x=12)


def test_main_term():
    assert main_term_C(1e5) == pytest.approx(stephens_constant().value * li(1e5), rel=1e-15)


def test_avg_hand_example():
    rep = avg_order_stat(2, 3)
    assert rep.lhs == pytest.approx(1.25, abs=1e-15)
    assert rep.diff == rep.lhs - rep.main_term
    assert rep.ratio == rep.lhs / rep.main_term


def test_avg_matches_naive():
    assert avg_order_naive(12, 30) == pytest.approx(avg_order_stat(12, 30).lhs, rel=1e-13)
    assert avg_order_stat(50, 100).lhs == pytest.approx(AVG_50_100, rel=1e-12)


def test_avg_aligned_N_gives_local_average():
    # with N a multiple of p, a = 0 mod p drops out and the rest fill whole periods
    for p in primes_td(100):
        for k in (1, 3):
            rep = avg_order_stat(k * p, p)
            term = rep.per_prime["term"][-1]
            table, _ = local_order_average(p)
            assert term == pytest.approx(float((1 - Fraction(1, p)) * table), rel=1e-12)


def test_avg_per_prime_converges_with_N():
    for p in (7, 31, 97):
        table, _ = local_order_average(p)
        target = (1 - 1 / p) * float(table)
        for N in (1000, 5003):
            term = avg_order_stat(N, p).per_prime["term"][-1]
            assert abs(term - target) <= 2 * p / N


def test_local_order_average_examples():
    assert local_order_average(3) == (Fraction(3, 4), Fraction(3, 4))
    assert local_order_average(2) == (Fraction(1), Fraction(1))
    t, f = local_order_average(13)
    assert t == f == Fraction(sum(order_bf(a, 13) for a in range(1, 13)), 144)


def test_local_order_average_identity_1e4():
    assert all(t == f for t, f in map(local_order_average, primes_td(10**4)))


def test_variance_examples():
    rep = variance_stat(2, 3)
    center = main_term_C(3)
    expect = sum((s - center) ** 2 for s in PER_A_3_2) / 2
    assert rep.lhs == pytest.approx(expect, rel=1e-14)
    assert rep.main_term == pytest.approx(center**2)
    assert rep.extra["center"] == center


def test_variance_N1():
    for x in (10, 100, 1000):
        # a = 1 has order 1 everywhere, so its inner sum is sum 1/(p-1)
        rep = variance_stat(1, x)
        s1 = math.fsum(1 / (p - 1) for p in primes_td(x))
        assert rep.lhs == pytest.approx((s1 - main_term_C(x)) ** 2, rel=1e-12)


def test_variance_matches_per_a_oracle():
    N, x = 20, 60
    center = main_term_C(x)
    expect = math.fsum((s - center) ** 2 for s in per_a_order_sums(N, x)) / N
    assert variance_stat(N, x).lhs == pytest.approx(expect, rel=1e-12)


def test_primitive_root_examples():
    assert primroot_counts_naive(6, 7) == PRIMROOT_7_6
    rep = primitive_root_stat(6, 7)
    assert rep.lhs == pytest.approx(sum(PRIMROOT_7_6) / 6)
    assert rep.main_term == pytest.approx(artin_constant().value * 4)


def test_primitive_root_per_prime_phi():
    for p in primes_td(300):
        rep = primitive_root_stat(p, p)
        assert round(rep.per_prime["term"][-1] * p) == phi_bf(p - 1)


def test_primitive_root_variance_examples():
    rep = variance_primitive_root_stat(1, 100)
    A_pi = artin_constant().value * 25
    assert rep.lhs == pytest.approx((1 - A_pi) ** 2, rel=1e-13)
    rep = variance_primitive_root_stat(6, 7)
    A_pi = artin_constant().value * 4
    assert rep.lhs == pytest.approx(sum((c - A_pi) ** 2 for c in PRIMROOT_7_6) / 6, rel=1e-13)


def test_power_divisor_examples():
    pairs = [[divides_count_naive(a, b, 5) for b in (1, 2)] for a in (1, 2)]
    assert pairs == PAIRS_5_2
    assert pair_counts(2, 5).tolist() == PAIRS_5_2
    assert power_divisor_stat(2, 5).lhs == pytest.approx(2.0)


def test_b_equal_one_always_counted():
    counts = pair_counts(30, 60)
    pi = len(primes_td(60))
    for a in range(1, 31):
        expected = pi - sum(1 for p in primes_td(60) if a % p == 0)
        assert counts[a - 1, 0] == expected


def test_pair_counts_match_definition():
    N, x = 25, 40
    counts = pair_counts(N, x)
    for a in range(1, N + 1):
        for b in range(1, N + 1):
            assert counts[a - 1, b - 1] == divides_count_naive(a, b, x)
    assert power_divisor_stat(N, x).lhs == pytest.approx(counts.sum() / N**2)


def test_pair_counts_full_period():
    # N = p: every residue pair once; subgroup pairs total sum_{d|p-1} phi(d) d, plus (0, 0)
    for p in primes_td(200):
        brute = 1
        for a in range(1, p):
            sub, v = set(), a
            while v not in sub:
                sub.add(v)
                v = v * a % p
            brute += len(sub)
        m = p - 1
        assert brute == 1 + sum(phi_bf(d) * d for d in factorize(m).divisors())
        rep = power_divisor_stat(p, p)
        assert round(rep.per_prime["term"][-1] * p * p) == brute


def test_variance_power_divisor_examples():
    rep = variance_power_divisor_stat(1, 50)
    assert rep.lhs == pytest.approx((len(primes_td(50)) - main_term_C(50)) ** 2, rel=1e-12)
    rep = variance_power_divisor_stat(2, 5)
    center = main_term_C(5)
    expect = sum((c - center) ** 2 for row in PAIRS_5_2 for c in row) / 4
    assert rep.lhs == pytest.approx(expect, rel=1e-13)


def test_lambda_examples():
    main, Rs = lambda_main_term(2)
    assert main == 1.5 and Rs == [1, 1]
    for x in (2, 10, 100):
        assert lambda_stat(1, x).lhs == 2
    assert sum(lambda_counts(10, 30)) == LAMBDA_10_30 == lambda_prim_count_naive(10, 30)
    assert sum(lambda_counts(7, 12)) == LAMBDA_7_12


def test_lambda_counts_match_N_a():
    y, x = 15, 80
    assert sum(lambda_counts(y, x)) == sum(N_a(a, x) for a in range(1, y + 1))


def test_lambda_main_term_two_ways():
    x = 5000
    main, Rs = lambda_main_term(x)
    lam = lambda_sieve(x)
    brute = [lambda_prim_count_vec(n, int(lam[n])) for n in range(1, x + 1)]
    assert Rs == brute
    assert main == pytest.approx(math.fsum(R / n for n, R in enumerate(brute, 1)), rel=1e-15)


def test_guards():
    with pytest.raises(CapacityError):
        avg_order_stat(10, 10**6 + 1)
    with pytest.raises(CapacityError):
        variance_stat(10**4 + 1, 100)
    with pytest.raises(CapacityError):
        variance_power_divisor_stat(10, 2 * 10**4 + 1)
    with pytest.raises(CapacityError):
        lambda_stat(10, 10**5 + 1)
    with pytest.raises(DomainError):
        avg_order_stat(0, 10)


def test_report_dict():
    rep = avg_order_stat(10, 50)
    d = rep.to_dict(meta=False)
    assert "runtime_ms" not in d
    assert {"theorem", "params", "lhs", "main_term", "diff", "ratio", "worker_count"} <= set(d)
    assert "runtime_ms" in rep.to_dict(meta=True)


def _same(r1, r2):
    return r1.to_dict(meta=False) == r2.to_dict(meta=False) and r1.per_prime == r2.per_prime


def test_repeat_runs_bit_identical():
    assert _same(avg_order_stat(300, 2000), avg_order_stat(300, 2000))
    assert _same(variance_stat(300, 2000), variance_stat(300, 2000))


@pytest.mark.parametrize(
    "fn, args",
    [
        (avg_order_stat, (400, 5000)),
        (variance_stat, (400, 5000)),
        (primitive_root_stat, (400, 5000)),
        (power_divisor_stat, (400, 5000)),
        (variance_power_divisor_stat, (40, 3000)),
    ],
)
def test_worker_count_does_not_change_results(fn, args):
    one, two = fn(*args, workers=1), fn(*args, workers=2)
    a, b = one.to_dict(meta=False), two.to_dict(meta=False)
    a.pop("worker_count"), b.pop("worker_count")
    assert a == b
    assert one.per_prime == two.per_prime


def test_variance_vector_deterministic():
    # the per-a vector sum uses a fixed chunk order, so float bits agree exactly
    from orderstats.statistics import scan_primes

    s1 = scan_primes(4000, 200, vectors=True, workers=1)
    s2 = scan_primes(4000, 200, vectors=True, workers=2)
    assert np.array_equal(s1.x_vec, s2.x_vec)


@pytest.mark.slow
def test_variance_normalized_at_full_scale():
    assert variance_stat(10**4, 10**5).ratio <= 0.05


@pytest.mark.slow
def test_primitive_root_variance_small_at_full_scale():
    assert variance_primitive_root_stat(10**4, 10**5).ratio <= 0.05


@pytest.mark.slow
def test_power_divisor_variance_at_guard_scale():
    assert variance_power_divisor_stat(10**3, 2 * 10**4).ratio <= 0.05
