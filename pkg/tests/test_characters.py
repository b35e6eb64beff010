import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orderstats.characters import (
    S4,
    S10,
    c_bar,
    c_chi,
    c_tables,
    c_w,
    c_w_principal_exact,
    character_group,
    eval_char,
    is_elementary,
    occupancy,
)
from orderstats.errors import CapacityError, DomainError
from orderstats.orders import R_of_n, carmichael_lambda, structure_of
from orderstats.arith import factorize

from oracles import order_bf, phi_bf, primes_td, units

# frozen from the naive double loops in oracles.S4_naive / S10_naive
S4_100_50 = 163.97438217881694
S10_50_100 = 12982.48807874595


def test_group_basics():
    g8 = character_group(8)
    assert sorted(g8.orders) == [2, 2]
    assert len(list(g8)) == 4
    g3 = character_group(3)
    assert g3.basis == ((2, 2),) or list(g3.basis) == [(2, 2)]


def test_dlog_reconstructs_units():
    for n in range(2, 600):
        g = character_group(n)
        assert math.prod(g.orders) == phi_bf(n)
        seen = set()
        for a in units(n):
            k = g.log(a)
            seen.add(k)
            back = 1 % n
            for (gen, _), e in zip(g.basis, k):
                back = back * pow(gen, e, n) % n
            assert back == a % n
        assert len(seen) == phi_bf(n)


def test_eval_examples():
    g = character_group(5)
    quad = next(chi for chi in g if chi.order == 2)
    assert eval_char(quad, 2) == pytest.approx(-1)
    assert eval_char(quad, 5) == 0
    for chi in g:
        assert chi(1) == 1
    assert all(g.principal()(a) == 1 for a in units(5))
    with pytest.raises(DomainError):
        g.log(10)


def test_character_order():
    for n in (7, 8, 15, 24, 63, 100):
        g = character_group(n)
        for chi in g:
            k = next(k for k in range(1, 10**4) if all(
                abs(eval_char(chi, a) ** k - 1) < 1e-9 for a in units(n)))
            assert chi.order == k
            assert chi.is_principal == (chi.order == 1)


def test_multiplicativity_up_to_500():
    # every chi is linear in the discrete log, so additivity of dlog on all
    # unit pairs gives chi(ab) = chi(a)chi(b) for all chi at once
    for n in range(3, 501):
        g = character_group(n)
        U = np.array(units(n))
        logs = g.dlog[U]
        prod_logs = g.dlog[np.multiply.outer(U, U) % n]
        m = np.array(g.orders)
        assert np.array_equal(prod_logs, (logs[:, None, :] + logs[None, :, :]) % m)


def test_multiplicativity_numeric():
    for n in (7, 8, 21, 40, 45):
        g = character_group(n)
        U = units(n)
        for chi in g:
            for a in U:
                for b in U:
                    assert abs(chi(a * b) - chi(a) * chi(b)) <= 1e-10


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 500), st.data())
def test_multiplicativity_property(n, data):
    g = character_group(n)
    U = units(n)
    a, b = data.draw(st.sampled_from(U)), data.draw(st.sampled_from(U))
    chi = g.character([data.draw(st.integers(0, m - 1)) for m in g.orders])
    assert abs(chi(a * b) - chi(a) * chi(b)) <= 1e-10
    assert abs(abs(chi(a)) - 1) <= 1e-12


def test_c_w_singleton_class():
    g = character_group(7)
    for chi in g:
        assert c_w(chi, 7, 6) == pytest.approx(1 / 6, abs=1e-15)
    with pytest.raises(DomainError):
        c_w(g.principal(), 7, 4)


def test_c_w_principal_exact_up_to_500():
    for p in primes_td(500):
        m = p - 1
        for w in factorize(m).divisors():
            exact = c_w_principal_exact(p, w)
            assert exact == Fraction(phi_bf(m // w), m)
            if 2 < p <= 100:
                assert c_w(character_group(p).principal(), p, w) == pytest.approx(float(exact), abs=1e-14)


def test_orthogonality_reconstructs_order_classes():
    for p in primes_td(100):
        if p == 2:
            continue
        g = character_group(p)
        chars = list(g)
        m = p - 1
        for w in factorize(m).divisors():
            coeffs = [c_w(chi, p, w) for chi in chars]
            for a in range(1, p):
                val = sum(c * eval_char(chi, a).conjugate() for c, chi in zip(coeffs, chars))
                target = 1.0 if order_bf(a, p) == m // w else 0.0
                assert abs(val - target) <= 1e-10


def test_occupancy():
    assert occupancy(10, 3).tolist() == [3, 4, 3]
    assert occupancy(2, 5).tolist() == [0, 1, 1, 0, 0]
    for N in range(0, 40):
        for n in range(1, 12):
            cnt = occupancy(N, n)
            assert cnt.sum() == N
            assert cnt.tolist() == [sum(1 for a in range(1, N + 1) if a % n == r) for r in range(n)]


def test_S4_examples():
    assert S4(2, 10) == 0
    assert S4(3, 1) == pytest.approx(0.5)
    assert S4(100, 50) == pytest.approx(S4_100_50, rel=1e-9)
    with pytest.raises(CapacityError):
        S4(5001, 10)


def test_S10_examples():
    assert S10(4, 10) == 0
    # mod 15 both-nonprincipal characters have orders 4, 2, 4: 1/4 + 1/2 + 1/4 per ordered pair
    assert S10(5, 1) == pytest.approx(2.0)
    assert S10(50, 100) == pytest.approx(S10_50_100, rel=1e-9)
    with pytest.raises(CapacityError):
        S10(301, 10)


def _E(n):
    lam = carmichael_lambda(factorize(n))
    e = lam // math.prod(factorize(lam).primes) if lam > 1 else 1
    return [a for a in units(n) if pow(a, e, n) == 1 % n]


def test_is_elementary_brute_force():
    for n in list(range(2, 80)) + [9, 91, 120]:
        g = character_group(n)
        E = _E(n)
        for chi in g:
            brute = all(abs(eval_char(chi, a) - 1) < 1e-9 for a in E)
            assert is_elementary(chi) == brute
    assert is_elementary(character_group(9).principal())


def test_squarefree_order_characters_mod_p_are_elementary():
    for p in primes_td(50):
        if p == 2:
            continue
        rad = math.prod(factorize(p - 1).primes)
        for chi in character_group(p):
            if rad % chi.order == 0:
                assert is_elementary(chi)


def test_c_examples():
    g7 = character_group(7)
    assert c_chi(g7.principal()) == pytest.approx(R_of_n(structure_of(7)) / 6)
    sextic = next(chi for chi in g7 if chi.order == 6)
    assert abs(c_chi(sextic)) <= 0.5 + 1e-12
    assert c_bar(sextic) == pytest.approx(0.5)


def test_c_tables_match_direct():
    for n in (7, 8, 15, 36, 45, 64, 105):
        g = character_group(n)
        c, cbar = c_tables(g)
        for chi in g:
            assert c[chi.exponents] == pytest.approx(c_chi(chi), abs=1e-12)
            assert cbar[chi.exponents] == pytest.approx(c_bar(chi))


def test_c_bounded_by_c_bar_up_to_2000():
    failures = []
    for n in range(2, 2001):
        c, cbar = c_tables(character_group(n))
        bad = np.abs(c) > cbar + 1e-12
        if bad.any():
            failures.append(n)
    assert failures == []


def test_c_vanishes_on_non_elementary():
    for n in range(2, 300):
        c, cbar = c_tables(character_group(n))
        assert np.all(np.abs(c[cbar == 0]) <= 1e-12)


def test_group_cap():
    with pytest.raises(DomainError):
        character_group(1)
    with pytest.raises(CapacityError):
        character_group(10**6 + 1)


def test_cmath_consistency():
    chi = character_group(11).character([1])
    g = 2
    assert chi(g) == pytest.approx(cmath.exp(2j * math.pi / 10))
