"""Multiplicative orders, Carmichael's lambda and the primary decomposition of
(Z/nZ)*, with the lambda-primitive-root counts built on top of it."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm

import numpy as np

from .arith import (
    Factorization,
    check_cap,
    crt_pair,
    factorize,
    is_prime,
    powmod_array,
    primitive_root,
    smallest_prime_factors,
)
from .errors import DomainError


def power_sequence(g: int, m: int, n: int) -> np.ndarray:
    """g**k mod n for k = 0..m-1, built baby-step/giant-step so the Python work
    is O(log m) and the rest is array arithmetic."""
    if m <= 0:
        return np.zeros(0, dtype=np.int64)
    b = max(1, int(np.sqrt(m)) + 1)
    baby = _geometric(g, b, n)
    giant = _geometric(pow(g, b, n), -(-m // b), n)
    return ((giant[:, None] * baby[None, :]) % n).ravel()[:m]


def _geometric(g: int, length: int, n: int) -> np.ndarray:
    arr = np.array([1 % n], dtype=np.int64)
    while len(arr) < length:
        step = pow(g, len(arr), n)
        arr = np.concatenate([arr, arr * step % n])
    return arr[:length]


@dataclass(frozen=True)
class OrderTable:
    """ord[r] = multiplicative order of r mod p for 1 <= r < p; ord[0] = 0."""

    p: int
    ord: np.ndarray
    generator: int
    dlog: np.ndarray

    def __getitem__(self, r):
        return self.ord[r]

    def class_counts(self) -> dict[int, int]:
        vals, counts = np.unique(self.ord[1:], return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))


def _cyclic_table(modulus: int, g: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    dtype = np.int32 if modulus < 2**31 else np.int64
    pows = power_sequence(g, m, modulus)
    ords = np.zeros(modulus, dtype=dtype)
    ords[pows] = m // gcd_with_range(m)
    dlog = np.full(modulus, -1, dtype=dtype)
    dlog[pows] = np.arange(m, dtype=dtype)
    return ords, dlog


def gcd_with_range(m: int) -> np.ndarray:
    """gcd(k, m) for k = 0..m-1, built by strided multiplication over q**j | m."""
    out = np.ones(m, dtype=np.int64)
    for q, e in factorize(m).factors if m > 1 else ():
        for j in range(1, e + 1):
            out[:: q**j] *= q
    return out


def order_table(p: int, fact_pm1: Factorization | None = None) -> OrderTable:
    if p == 2:
        return OrderTable(2, np.array([0, 1], dtype=np.int32), 1, np.array([-1, 0], dtype=np.int32))
    g = primitive_root(p, fact_pm1)
    ords, dlog = _cyclic_table(p, g, p - 1)
    ords.flags.writeable = False
    dlog.flags.writeable = False
    return OrderTable(p, ords, g, dlog)


def prime_power_order_table(p: int, e: int) -> np.ndarray:
    """Orders of every residue mod p**e (0 for non-units)."""
    q = p**e
    if p == 2:
        r = np.arange(q, dtype=np.int64)
        ords = np.zeros(q, dtype=np.int64)
        odd = r % 2 == 1
        cur = r[odd]
        o = np.ones(len(cur), dtype=np.int64)
        for _ in range(e):
            live = cur != 1
            o[live] *= 2
            cur = cur * cur % q
        ords[odd] = o
        return ords
    g = _prime_power_generator(p, e)
    ords, _ = _cyclic_table(q, g, (p - 1) * p ** (e - 1))
    return ords


def mult_order(a: int, p: int, fact_pm1: Factorization | None = None) -> int:
    """Least e >= 1 with a**e = 1 (mod p), by stripping primes from p-1."""
    if a % p == 0:
        raise DomainError(f"order of {a} mod {p} is undefined")
    if fact_pm1 is None:
        fact_pm1 = factorize(p - 1)
    e = p - 1
    for q, k in fact_pm1.factors:
        for _ in range(k):
            if pow(a, e // q, p) == 1:
                e //= q
            else:
                break
    return e


def _lambda_prime_power(p: int, e: int) -> int:
    if p == 2:
        return 1 if e == 1 else 2 if e == 2 else 2 ** (e - 2)
    return (p - 1) * p ** (e - 1)


def carmichael_lambda(fact: Factorization) -> int:
    out = 1
    for p, e in fact.factors:
        out = lcm(out, _lambda_prime_power(p, e))
    return out


def lambda_sieve(x: int) -> np.ndarray:
    """lam[n] = lambda(n) for 0 <= n <= x (lam[0] is 0)."""
    check_cap(x, "lambda sieve")
    spf = smallest_prime_factors(x).astype(np.int64)
    lam = np.ones(x + 1, dtype=np.int64)
    lam[0] = 0
    idx = np.arange(2, x + 1, dtype=np.int64)
    rest = idx.copy()
    while len(idx):
        p = spf[rest]
        pe = np.ones_like(p)
        e = np.zeros_like(p)
        while True:
            div = rest % p == 0
            if not div.any():
                break
            rest = np.where(div, rest // p, rest)
            pe = np.where(div, pe * p, pe)
            e += div
        lam_pe = np.where(p == 2, np.where(e == 1, 1, np.where(e == 2, 2, pe // 4)), pe // p * (p - 1))
        lam[idx] = np.lcm(lam[idx], lam_pe)
        live = rest > 1
        idx, rest = idx[live], rest[live]
    return lam


def _prime_power_generator(p: int, e: int) -> int:
    g = primitive_root(p)
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


@dataclass(frozen=True)
class UnitGroupStructure:
    """(Z/nZ)* as a direct product of cyclic groups.

    `basis` lists (generator, order) pairs, one per odd prime power of n and
    <-1>, <5> for the 2-part, each lifted by CRT; `primary_factors` splits
    those cyclic orders into prime powers.
    """

    n: int
    basis: tuple[tuple[int, int], ...]
    primary_factors: tuple[int, ...]
    lam: int
    phi: int

    @cached_property
    def delta(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for q in _primes_of(self.phi):
            top = q ** _val(self.lam, q)
            out[q] = sum(1 for f in self.primary_factors if f == top)
        return out


def _val(n: int, q: int) -> int:
    v = 0
    while n % q == 0:
        n //= q
        v += 1
    return v


def _primes_of(n: int) -> tuple[int, ...]:
    return factorize(n).primes if n > 1 else ()


def _prime_power_split(m: int) -> list[int]:
    return [p**e for p, e in factorize(m).factors] if m > 1 else []


def unit_group_structure(fact: Factorization) -> UnitGroupStructure:
    n = fact.n
    local: list[tuple[int, int, int]] = []  # (generator mod p^e, order, p^e)
    for p, e in fact.factors:
        q = p**e
        if p == 2:
            if e >= 2:
                local.append((q - 1, 2, q))
            if e >= 3:
                local.append((5, 2 ** (e - 2), q))
        else:
            local.append((_prime_power_generator(p, e), (p - 1) * p ** (e - 1), q))
    basis = []
    for g, order, q in local:
        other = n // q
        basis.append((crt_pair(g, q, 1, other) if other > 1 else g % n, order))
    primary = sorted(pp for _, m in basis for pp in _prime_power_split(m))
    return UnitGroupStructure(
        n=n,
        basis=tuple(basis),
        primary_factors=tuple(primary),
        lam=carmichael_lambda(fact),
        phi=fact.phi(),
    )


def structure_of(n: int) -> UnitGroupStructure:
    return unit_group_structure(factorize(n))


def delta_q(s: UnitGroupStructure, q: int) -> int:
    """Number of primary cyclic factors whose order is the full q-part of lambda(n)."""
    if not is_prime(q) or s.phi % q:
        raise DomainError(f"{q} is not a prime dividing phi({s.n}) = {s.phi}")
    return s.delta[q]


def R_of_n(s: UnitGroupStructure) -> int:
    """Number of lambda-primitive roots mod n, from the product over q | phi(n)."""
    num, den = s.phi, 1
    for q, d in s.delta.items():
        num *= q**d - 1
        den *= q**d
    assert num % den == 0
    return num // den


def rho_n(s: UnitGroupStructure, h: int) -> int:
    """Number of elementary characters mod n of squarefree order h."""
    if h < 1 or s.phi % h:
        raise DomainError(f"{h} does not divide phi({s.n}) = {s.phi}")
    out = 1
    for q, e in (factorize(h).factors if h > 1 else ()):
        if e > 1:
            raise DomainError(f"{h} is not squarefree")
        out *= q ** s.delta[q] - 1
    return out


def is_lambda_primitive_root(a: int, s: UnitGroupStructure) -> bool:
    n = s.n
    if gcd(a, n) != 1:
        raise DomainError(f"{a} is not a unit mod {n}")
    return all(pow(a, s.lam // q, n) != 1 for q in _primes_of(s.lam))


def lambda_primitive_mask(s: UnitGroupStructure, residues: np.ndarray) -> np.ndarray:
    """Vectorized is_lambda_primitive_root; non-units map to False."""
    residues = np.asarray(residues, dtype=np.int64)
    ok = np.gcd(residues, s.n) == 1
    if s.n <= 2:
        return ok
    for q in _primes_of(s.lam):
        ok &= powmod_array(residues, s.lam // q, s.n) != 1
    return ok
