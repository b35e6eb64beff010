"""Ordered-factorization counts tau_r and the summatory bounds they satisfy."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .arith import Factorization, check_cap, factorize, smallest_prime_factors
from .errors import CapacityError, DomainError

# Largest N for which all N**r ordered r-tuples are enumerated.
TUPLE_GUARDS = {1: 10**6, 2: 40, 3: 15}


@dataclass(frozen=True)
class TauSumCheck:
    N: int
    r: int
    c: float | None
    lhs: int
    bound: float | int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.bound

    def as_row(self) -> dict:
        return {"N": self.N, "r": self.r, "c": self.c, "lhs": self.lhs,
                "bound": self.bound, "holds": self.holds}


def tau_r(a: int, r: int, fact: Factorization | None = None) -> int:
    if a < 1 or r < 1:
        raise DomainError("tau_r needs a >= 1 and r >= 1")
    fact = fact or factorize(a)
    out = 1
    for _, e in fact.factors:
        out *= math.comb(e + r - 1, r - 1)
    return out


def tau_r_sieve(N: int, r: int) -> np.ndarray:
    """tau_r(a) for 0 <= a <= N (entry 0 unused), from the smallest-prime-factor sieve."""
    if r < 1:
        raise DomainError("r must be >= 1")
    check_cap(N, "tau sieve")
    out = np.ones(N + 1, dtype=np.int64)
    out[0] = 0
    if N < 2 or r == 1:
        return out
    spf = smallest_prime_factors(N).astype(np.int64)
    binom = np.array([math.comb(e + r - 1, r - 1) for e in range(64)], dtype=np.int64)
    idx = np.arange(2, N + 1, dtype=np.int64)
    rest = idx.copy()
    while len(idx):
        p = spf[rest]
        e = np.zeros_like(rest)
        while True:
            div = rest % p == 0
            if not div.any():
                break
            rest = np.where(div, rest // p, rest)
            e += div
        out[idx] *= binom[e]
        live = rest > 1
        idx, rest = idx[live], rest[live]
    return out


def sum_tau_r(N: int, r: int) -> int:
    if N < 1:
        raise DomainError("N must be >= 1")
    return int(tau_r_sieve(N, r)[1:].sum())


def lemma_bound(N: int, r: int) -> float:
    """N (log N + r - 1)**(r-1) / (r-1)!"""
    return N * (math.log(N) + r - 1) ** (r - 1) / math.factorial(r - 1)


def check_tau_bound(N: int, r: int) -> TauSumCheck:
    return TauSumCheck(N, r, None, sum_tau_r(N, r), lemma_bound(N, r))


def corollary_bound(N: int, r: int, c: float) -> float:
    return (1 + c) ** (r - 1) * N * math.log(N) ** (r - 1) / math.factorial(r - 1)


def check_corollary_211(N: int, r: int, c: float) -> TauSumCheck:
    if c <= 0:
        raise DomainError("c must be positive")
    if r - 1 > c * math.log(N):
        raise DomainError(f"r - 1 = {r - 1} exceeds c log N = {c * math.log(N):.6g}")
    return TauSumCheck(N, r, c, sum_tau_r(N, r), corollary_bound(N, r, c))


def _check_tuple_guard(N: int, r: int) -> None:
    limit = TUPLE_GUARDS.get(r)
    if limit is None:
        ok = N**r <= 15**3
    else:
        ok = N <= limit
    if not ok:
        raise CapacityError(f"tau' enumeration guard exceeded for N={N}, r={r}")


def tau_prime_square_sum(N: int, r: int) -> int:
    """sum_{a <= N**r} tau'_r(a)**2, i.e. the number of pairs of r-tuples from
    [1, N] with equal products."""
    if N < 1 or r < 1:
        raise DomainError("N and r must be >= 1")
    _check_tuple_guard(N, r)
    counts = Counter(math.prod(t) for t in itertools.product(range(1, N + 1), repeat=r))
    return sum(v * v for v in counts.values())


def check_lemma_22(N: int, r: int) -> TauSumCheck:
    return TauSumCheck(N, r, None, tau_prime_square_sum(N, r), sum_tau_r(N, r) ** r)
