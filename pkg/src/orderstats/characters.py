"""Dirichlet characters as exponent vectors against a fixed generator basis.

Bulk quantities (inner sums over a <= N, the coefficients c(chi)) are taken
as multidimensional DFTs over the exponent grid, so every character of a
modulus is handled in one O(phi log phi) transform.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .arith import factorize, is_prime, sieve_primes
from .errors import CapacityError, DomainError
from .orders import (
    UnitGroupStructure,
    lambda_primitive_mask,
    order_table,
    power_sequence,
    rho_n,
    structure_of,
)

GROUP_CAP = 10**6
S4_MAX_X, S4_MAX_N = 5000, 10**5
S10_MAX_X, S10_MAX_N = 300, 10**4


class CharacterGroup:
    """All characters mod n, with a full discrete-log table."""

    def __init__(self, n: int, structure: UnitGroupStructure | None = None):
        if n < 2:
            raise DomainError("character groups need n >= 2")
        if n > GROUP_CAP:
            raise CapacityError(f"modulus {n} exceeds the table cap {GROUP_CAP}")
        self.n = n
        self.structure = structure or structure_of(n)
        self.basis = self.structure.basis
        self.orders = tuple(m for _, m in self.basis)
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        grid = np.array(1 % n, dtype=np.int64)
        for g, m in self.basis:
            grid = (grid[..., None] * power_sequence(g, m, n)) % n
        self.grid = grid
        self.grid.flags.writeable = False
        k = len(self.basis)
        dlog = np.full((n, max(k, 1)), -1, dtype=np.int64)
        if k == 0:
            dlog[1, 0] = 0
        else:
            flat = grid.ravel()
            for i, coord in enumerate(np.indices(self.orders)):
                dlog[flat, i] = coord.ravel()
        self.dlog = dlog[:, :k] if k else dlog[:, :0]
        self._unit = dlog[:, 0] >= 0
        self.dlog.flags.writeable = False

    def __len__(self):
        return self.structure.phi

    def __repr__(self):
        return f"CharacterGroup(n={self.n}, basis={list(self.basis)})"

    def is_unit(self, a: int) -> bool:
        return bool(self._unit[a % self.n])

    def log(self, a: int) -> tuple[int, ...]:
        a %= self.n
        if not self._unit[a]:
            raise DomainError(f"{a} is not a unit mod {self.n}")
        return tuple(int(v) for v in self.dlog[a])

    def character(self, exponents) -> Character:
        return Character(self, tuple(int(t) % m for t, m in zip(exponents, self.orders)))

    def principal(self) -> Character:
        return Character(self, (0,) * len(self.orders))

    def __iter__(self):
        for t in itertools.product(*(range(m) for m in self.orders)):
            yield Character(self, t)

    @cached_property
    def order_grid(self) -> np.ndarray:
        """ord(chi_t) for every exponent vector t on the grid."""
        out = np.ones(self.orders, dtype=np.int64)
        for i, (t, m) in enumerate(zip(np.indices(self.orders), self.orders)):
            out = np.lcm(out, m // np.gcd(t, m))
        return out


def character_group(n: int) -> CharacterGroup:
    return CharacterGroup(n)


@dataclass(frozen=True)
class Character:
    group: CharacterGroup
    exponents: tuple[int, ...]

    @property
    def order(self) -> int:
        return reduce(
            math.lcm,
            (m // math.gcd(t, m) for t, m in zip(self.exponents, self.group.orders)),
            1,
        )

    @property
    def is_principal(self) -> bool:
        return not any(self.exponents)

    def phase(self, a: int) -> Fraction | None:
        """chi(a) = exp(2 pi i * phase); None off the units."""
        g = self.group
        if not g.is_unit(a):
            return None
        L = g.exponent
        num = sum(t * k * (L // m) for t, k, m in zip(self.exponents, g.log(a), g.orders))
        return Fraction(num % L, L)

    def __call__(self, a: int) -> complex:
        return eval_char(self, a)


def eval_char(chi: Character, a: int) -> complex:
    ph = chi.phase(a)
    if ph is None:
        return 0j
    if ph == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * ph)


def c_w(chi: Character, p: int, w: int) -> complex:
    """(1/(p-1)) * sum of chi(a) over the residues of order (p-1)/w."""
    g = chi.group
    if g.n != p or not is_prime(p):
        raise DomainError("c_w is defined for characters modulo a prime")
    if w < 1 or (p - 1) % w:
        raise DomainError(f"{w} does not divide p - 1 = {p - 1}")
    table = order_table(p)
    cls = np.flatnonzero(table.ord == (p - 1) // w)
    vals = [eval_char(chi, int(a)) for a in cls]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)) / (p - 1)


def c_w_principal_exact(p: int, w: int) -> Fraction:
    if w < 1 or (p - 1) % w:
        raise DomainError(f"{w} does not divide p - 1 = {p - 1}")
    table = order_table(p)
    return Fraction(int(np.count_nonzero(table.ord == (p - 1) // w)), p - 1)


def occupancy(N: int, n: int) -> np.ndarray:
    """cnt[r] = #{1 <= a <= N : a = r (mod n)} for r = 0..n-1."""
    r = np.arange(n, dtype=np.int64)
    r_eff = np.where(r == 0, n, r)
    return np.where(r_eff <= N, (N - r_eff) // n + 1, 0)


def _prime_inner_sums(p: int, N: int):
    """|sum_{a<=N} chi_t(a)| and ord(chi_t) for all t mod p."""
    m = p - 1
    table = order_table(p)
    cnt = occupancy(N, p)
    A = np.zeros(m, dtype=np.float64)
    A[table.dlog[1:]] = cnt[1:]
    t = np.arange(m, dtype=np.int64)
    return np.abs(np.fft.fft(A)), m // np.gcd(t, m), table


def S4(x: int, N: int) -> float:
    """Sum over p <= x and non-principal chi mod p of |sum_{a<=N} chi(a)| / ord(chi)."""
    if x > S4_MAX_X or N > S4_MAX_N:
        raise CapacityError(f"S4 guard is x <= {S4_MAX_X}, N <= {S4_MAX_N}")
    if x < 3 or N < 1:
        return 0.0
    parts = []
    for p in sieve_primes(x).primes[1:]:
        mags, ords, _ = _prime_inner_sums(int(p), N)
        parts.append(math.fsum((mags[1:] / ords[1:]).tolist()))
    return math.fsum(parts)


def S10(x: int, N: int) -> float:
    """Ordered pairs p != q <= x; characters mod pq with both components
    non-principal."""
    if x > S10_MAX_X or N > S10_MAX_N:
        raise CapacityError(f"S10 guard is x <= {S10_MAX_X}, N <= {S10_MAX_N}")
    if x < 5 or N < 1:
        return 0.0
    odd = [int(p) for p in sieve_primes(x).primes[1:]]
    tables = {p: order_table(p) for p in odd}
    a = np.arange(1, N + 1, dtype=np.int64)
    parts = []
    for i, p in enumerate(odd):
        tp = tables[p]
        mp = p - 1
        ord_p = mp // np.gcd(np.arange(mp), mp)
        for q in odd[i + 1 :]:
            tq = tables[q]
            mq = q - 1
            ord_q = mq // np.gcd(np.arange(mq), mq)
            units = a[(a % p != 0) & (a % q != 0)]
            idx = tp.dlog[units % p].astype(np.int64) * mq + tq.dlog[units % q]
            A = np.bincount(idx, minlength=mp * mq).reshape(mp, mq).astype(np.float64)
            mags = np.abs(np.fft.fft2(A))[1:, 1:]
            ords = np.lcm(ord_p[1:, None], ord_q[None, 1:])
            parts.append(2.0 * math.fsum((mags / ords).ravel().tolist()))
    return math.fsum(parts)


def _elementary_exponent(s: UnitGroupStructure) -> int:
    rad = math.prod(factorize(s.lam).primes) if s.lam > 1 else 1
    return s.lam // rad


def elementary_generators(group: CharacterGroup) -> list[int]:
    """Residues generating E(n) = {a : a**(lambda/rad(lambda)) = 1}, one per basis factor."""
    L = _elementary_exponent(group.structure)
    return [pow(g, m // math.gcd(m, L), group.n) for g, m in group.basis]


def is_elementary(chi: Character, s: UnitGroupStructure | None = None) -> bool:
    return all(chi.phase(e) == 0 for e in elementary_generators(chi.group))


def lambda_primitive_roots(group: CharacterGroup) -> np.ndarray:
    r = np.arange(group.n, dtype=np.int64)
    return r[lambda_primitive_mask(group.structure, r)]


def c_chi(chi: Character, s: UnitGroupStructure | None = None) -> complex:
    """(1/phi(n)) * sum of chi(b) over the lambda-primitive roots b mod n."""
    vals = [eval_char(chi, int(b)) for b in lambda_primitive_roots(chi.group)]
    phi = chi.group.structure.phi
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals)) / phi


def c_bar(chi: Character, s: UnitGroupStructure | None = None) -> float:
    if not is_elementary(chi):
        return 0.0
    return 1.0 / rho_n(chi.group.structure, chi.order)


def c_tables(group: CharacterGroup) -> tuple[np.ndarray, np.ndarray]:
    """(c, c_bar) for every character of the group, indexed by exponent vector."""
    s = group.structure
    if not group.orders:
        return np.ones((), dtype=complex), np.ones(())
    indicator = lambda_primitive_mask(s, group.grid).astype(np.float64)
    c = np.fft.ifftn(indicator)
    L = _elementary_exponent(s)
    elem = np.ones(group.orders, dtype=bool)
    for t, m in zip(np.indices(group.orders), group.orders):
        elem &= t % math.gcd(m, L) == 0
    ords = group.order_grid
    cbar = np.zeros(group.orders)
    for h in np.unique(ords[elem]).tolist():
        cbar[elem & (ords == h)] = 1.0 / rho_n(s, int(h))
    return c, cbar
