"""Integer primitives: sieving, deterministic primality, 64-bit factorization,
modular arithmetic and least primitive roots."""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_SIEVE_CAP = 10**8
TRIAL_DIVISION_LIMIT = 10**6

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def sieve_cap() -> int:
    """Current sieve cap in entries; ORDERSTATS_SIEVE_CAP overrides the default."""
    raw = os.environ.get("ORDERSTATS_SIEVE_CAP")
    if raw is None:
        return DEFAULT_SIEVE_CAP
    try:
        cap = int(float(raw))
    except ValueError:
        raise CapacityError(f"ORDERSTATS_SIEVE_CAP={raw!r} is not a number") from None
    if cap < 2:
        raise CapacityError("ORDERSTATS_SIEVE_CAP must be at least 2")
    return cap


def check_cap(x: int, what: str = "sieve") -> None:
    cap = sieve_cap()
    if x > cap:
        raise CapacityError(f"{what} limit {x} exceeds sieve cap {cap}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors}")
            last = p
            prod *= p**e
        if prod != self.n:
            raise ValueError(f"factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def phi(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= (p - 1) * p ** (e - 1)
        return out

    def divisors(self) -> list[int]:
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray
    smallest_prime_factor: np.ndarray | None = None

    def __len__(self):
        return len(self.primes)

    def __contains__(self, n):
        i = np.searchsorted(self.primes, n)
        return bool(i < len(self.primes) and self.primes[i] == n)

    def factorize(self, n: int) -> Factorization:
        """Factor n <= limit by walking the smallest-prime-factor array."""
        spf = self.smallest_prime_factor
        if spf is None or n > self.limit:
            return factorize(n)
        factors = []
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            factors.append((p, e))
        return Factorization(_prod(factors), tuple(factors))


def _prod(factors) -> int:
    out = 1
    for p, e in factors:
        out *= p**e
    return out


def _prime_mask(x: int) -> np.ndarray:
    mask = np.ones(x + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, isqrt(x) + 1, 2):
        if mask[p]:
            mask[p * p :: 2 * p] = False
    return mask


def sieve_primes(x: int, with_spf: bool | None = None) -> PrimeTable:
    """All primes <= x; the smallest-prime-factor array is attached when x is
    within the sieve cap (or when explicitly requested)."""
    if x < 2:
        raise DomainError("sieve_primes needs x >= 2")
    check_cap(x)
    mask = _prime_mask(x)
    primes = np.flatnonzero(mask).astype(np.int64)
    spf = None
    if with_spf is None or with_spf:
        spf = smallest_prime_factors(x, primes)
    return PrimeTable(x, _frozen(primes), None if spf is None else _frozen(spf))


def smallest_prime_factors(x: int, primes: np.ndarray | None = None) -> np.ndarray:
    check_cap(x)
    dtype = np.int32 if x < 2**31 else np.int64
    spf = np.zeros(x + 1, dtype=dtype)
    if primes is None:
        primes = np.flatnonzero(_prime_mask(x))
    for p in primes:
        p = int(p)
        if p * p > x:
            break
        block = spf[p * p :: p]
        block[block == 0] = p
    rest = spf == 0
    spf[rest] = np.arange(x + 1, dtype=dtype)[rest]
    spf[0] = 0
    return spf


_SMALL_PRIMES: np.ndarray | None = None


def _small_primes() -> list[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = np.flatnonzero(_prime_mask(TRIAL_DIVISION_LIMIT))
    return _SMALL_PRIMES


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit n (and well beyond)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        y = pow(a, d, n)
        if y == 1 or y == n - 1:
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """A nontrivial factor of the odd composite n (Brent's cycle variant)."""
    for c in range(1, n):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _brent_rho(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> Factorization:
    """Exact prime factorization of 1 <= n < 2**64."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    orig = n
    found: dict[int, int] = {}
    for p in _small_primes():
        p = int(p)
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e
    if n > 1:
        if n < TRIAL_DIVISION_LIMIT**2 or is_prime(n):
            found[n] = found.get(n, 0) + 1
        else:
            _split(n, found)
    return Factorization(orig, tuple(sorted(found.items())))


def mod_pow(a: int, e: int, n: int) -> int:
    if n < 1:
        raise DomainError("modulus must be >= 1")
    if e < 0:
        raise DomainError("negative exponent")
    return pow(a, e, n)


def powmod_array(base: np.ndarray, e: int, n: int) -> np.ndarray:
    """Elementwise base**e mod n for an int64 array; requires n**2 < 2**63."""
    if n >= 3_037_000_499:
        raise CapacityError(f"vectorized powmod needs n < 3.04e9, got {n}")
    result = np.ones_like(base, dtype=np.int64) % n
    b = np.asarray(base, dtype=np.int64) % n
    while e:
        if e & 1:
            result = result * b % n
        e >>= 1
        if e:
            b = b * b % n
    return result


def primitive_root(p: int, fact: Factorization | None = None) -> int:
    """Least generator of (Z/pZ)*."""
    if p == 2:
        return 1
    if fact is None:
        fact = factorize(p - 1)
    exps = [(p - 1) // q for q in fact.primes]
    for g in range(2, p):
        if all(pow(g, e, p) != 1 for e in exps):
            return g
    raise DomainError(f"{p} has no primitive root; is it prime?")


def euler_phi(n: int) -> int:
    return factorize(n).phi()


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); moduli coprime."""
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2) % m2)) % (m1 * m2)
