"""Exact left-hand sides of the averaged order statistics and their main terms.

Every statistic over primes is assembled from per-prime order tables. For
the averaged forms only the occupancy-weighted order classes of each prime
matter, so per-prime results are exact integers; the per-a (variance) forms
accumulate vectors over primes in a fixed chunk order, so reports do not
depend on the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import factorize, sieve_primes, smallest_prime_factors
from .characters import occupancy
from .constants import artin_constant, li, stephens_constant
from .errors import CapacityError, DomainError
from .orders import lambda_sieve, order_table, prime_power_order_table

CHUNK = 256  # primes per work unit; fixes the reduction order

AVG_MAX_X = 10**6
VAR_MAX_X, VAR_MAX_N = 10**5, 10**4
PAIR_MAX_X, PAIR_MAX_N = 10**5, 10**4
PAIR_VAR_MAX_X, PAIR_VAR_MAX_N = 2 * 10**4, 10**3
LAMBDA_MAX_X, LAMBDA_MAX_Y = 10**5, 10**5


@dataclass
class StatReport:
    theorem: str
    params: dict
    lhs: float
    main_term: float
    runtime_ms: float = 0.0
    worker_count: int = 1
    extra: dict = field(default_factory=dict)
    per_prime: dict | None = field(default=None, repr=False)

    @property
    def diff(self) -> float:
        return self.lhs - self.main_term

    @property
    def ratio(self) -> float | None:
        return self.lhs / self.main_term if self.main_term else None

    def to_dict(self, meta: bool = True) -> dict:
        out = {
            "theorem": self.theorem,
            "params": self.params,
            "lhs": self.lhs,
            "main_term": self.main_term,
            "diff": self.diff,
            "ratio": self.ratio,
            "worker_count": self.worker_count,
            **self.extra,
        }
        if meta:
            out["runtime_ms"] = self.runtime_ms
        return out


def _guard(cond: bool, msg: str) -> None:
    if not cond:
        raise CapacityError(msg)


def _stephens() -> float:
    return stephens_constant().value


def main_term_C(x: float) -> float:
    return _stephens() * li(x) if x > 2 else 0.0


def _primes_upto(x: int) -> list[int]:
    return [] if x < 2 else [int(p) for p in sieve_primes(x, with_spf=False).primes]


def _chunks(seq, size=CHUNK):
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _map(fn, tasks, workers):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks))


def _divisor_matrix(m: int) -> tuple[np.ndarray, np.ndarray]:
    divs = np.array(factorize(m).divisors(), dtype=np.int64)
    return divs, (divs[:, None] % divs[None, :] == 0)


def _scan_chunk(task) -> dict:
    """Occupancy-weighted order-class data for each prime in a chunk."""
    primes, N, want_vectors = task
    ord_sum, prim, pairs = [], [], []
    a = np.arange(1, N + 1, dtype=np.int64) if want_vectors else None
    xs = np.zeros(N) if want_vectors else None
    xc = np.zeros(N) if want_vectors else None
    pa = np.zeros(N, dtype=np.int64) if want_vectors else None
    for p in primes:
        ords = order_table(p).ord
        cnt = occupancy(N, p)
        ord_sum.append(int(np.dot(cnt[1:], ords[1:].astype(np.int64))))
        prim.append(int(cnt[1:][ords[1:] == p - 1].sum()))
        divs, dmat = _divisor_matrix(p - 1)
        cls = np.bincount(ords[1:], weights=cnt[1:], minlength=p)[divs].astype(np.int64)
        pairs.append(int(cls @ (dmat.astype(np.int64) @ cls)) + int(cnt[0]) ** 2)
        if want_vectors:
            oa = ords[a % p]
            _neumaier_add(xs, xc, oa / (p - 1))
            pa += oa == p - 1
    out = {"ord_sum": ord_sum, "prim": prim, "pairs": pairs}
    if want_vectors:
        out.update(x=xs + xc, pa=pa)
    return out


def _neumaier_add(s: np.ndarray, c: np.ndarray, v: np.ndarray) -> None:
    t = s + v
    big = np.abs(s) >= np.abs(v)
    c += np.where(big, (s - t) + v, (v - t) + s)
    s[:] = t


@dataclass
class PrimeScan:
    primes: list[int]
    N: int
    ord_sum: list[int]
    prim: list[int]
    pairs: list[int]
    x_vec: np.ndarray | None = None
    pa_vec: np.ndarray | None = None


def scan_primes(x: int, N: int, vectors: bool = False, workers: int = 1) -> PrimeScan:
    primes = _primes_upto(x)
    parts = _map(_scan_chunk, [(c, N, vectors) for c in _chunks(primes)], workers)
    scan = PrimeScan(primes, N, [], [], [])
    if vectors:
        s, c = np.zeros(N), np.zeros(N)
        scan.pa_vec = np.zeros(N, dtype=np.int64)
    for part in parts:
        scan.ord_sum += part["ord_sum"]
        scan.prim += part["prim"]
        scan.pairs += part["pairs"]
        if vectors:
            _neumaier_add(s, c, part["x"])
            scan.pa_vec += part["pa"]
    if vectors:
        scan.x_vec = s + c
    return scan


def _report(theorem, params, lhs, main, t0, workers, **extra) -> StatReport:
    return StatReport(theorem, params, lhs, main, (time.perf_counter() - t0) * 1e3, workers, extra)


def _avg_terms(scan: PrimeScan) -> list[float]:
    return [s / (p - 1) / scan.N for p, s in zip(scan.primes, scan.ord_sum)]


def avg_order_stat(N: int, x: int, workers: int = 1) -> StatReport:
    """N^-1 sum_{a<=N} sum_{p<=x} l_a(p)/(p-1) against C Li(x)."""
    _check_N(N)
    _guard(x <= AVG_MAX_X, f"avg-order guard is x <= {AVG_MAX_X}")
    t0 = time.perf_counter()
    scan = scan_primes(x, N, workers=workers)
    terms = _avg_terms(scan)
    rep = _report("thm1.1", {"N": N, "x": x}, math.fsum(terms), main_term_C(x), t0, workers)
    rep.per_prime = {"p": scan.primes, "term": terms}
    return rep


def _check_N(N: int) -> None:
    if N < 1:
        raise DomainError("N must be >= 1")


def variance_stat(N: int, x: int, workers: int = 1) -> StatReport:
    """N^-1 sum_{a<=N} (sum_{p<=x} l_a(p)/(p-1) - C Li(x))**2.

    The reported main_term is the scale (C Li(x))**2, so ratio is the
    normalized variance.
    """
    _check_N(N)
    _guard(x <= VAR_MAX_X and N <= VAR_MAX_N, f"variance guard is x <= {VAR_MAX_X}, N <= {VAR_MAX_N}")
    t0 = time.perf_counter()
    scan = scan_primes(x, N, vectors=True, workers=workers)
    mean = main_term_C(x)
    lhs = math.fsum(((scan.x_vec - mean) ** 2).tolist()) / N
    return _report("thm1.2", {"N": N, "x": x}, lhs, mean * mean, t0, workers, center=mean)


def primitive_root_stat(N: int, x: int, workers: int = 1) -> StatReport:
    """N^-1 sum_{a<=N} P_a(x) against A pi(x)."""
    _check_N(N)
    _guard(x <= AVG_MAX_X, f"primroot-avg guard is x <= {AVG_MAX_X}")
    t0 = time.perf_counter()
    scan = scan_primes(x, N, workers=workers)
    main = artin_constant().value * len(scan.primes)
    rep = _report("eq3", {"N": N, "x": x}, sum(scan.prim) / N, main, t0, workers)
    rep.per_prime = {"p": scan.primes, "term": [c / N for c in scan.prim]}
    return rep


def variance_primitive_root_stat(N: int, x: int, workers: int = 1) -> StatReport:
    _check_N(N)
    _guard(x <= VAR_MAX_X and N <= VAR_MAX_N, f"primroot-var guard is x <= {VAR_MAX_X}, N <= {VAR_MAX_N}")
    t0 = time.perf_counter()
    scan = scan_primes(x, N, vectors=True, workers=workers)
    mean = artin_constant().value * len(scan.primes)
    lhs = math.fsum(((scan.pa_vec - mean) ** 2).tolist()) / N
    return _report("eq4", {"N": N, "x": x}, lhs, mean * mean, t0, workers, center=mean)


def power_divisor_stat(N: int, x: int, workers: int = 1) -> StatReport:
    """N^-2 sum_{a,b<=N} #{p <= x : p | a**n - b for some n >= 1}.

    Per prime this counts pairs with l_b(p) | l_a(p), plus the pairs where p
    divides both a and b.
    """
    _check_N(N)
    _guard(x <= PAIR_MAX_X and N <= PAIR_MAX_N, f"divides guard is x <= {PAIR_MAX_X}, N <= {PAIR_MAX_N}")
    t0 = time.perf_counter()
    scan = scan_primes(x, N, workers=workers)
    rep = _report("thm1.3", {"N": N, "x": x}, sum(scan.pairs) / N**2, main_term_C(x), t0, workers)
    rep.per_prime = {"p": scan.primes, "term": [c / N**2 for c in scan.pairs]}
    return rep


def _pair_chunk(task) -> np.ndarray:
    primes, N = task
    a = np.arange(1, N + 1, dtype=np.int64)
    counts = np.zeros((N, N), dtype=np.int32)
    for p in primes:
        ords = order_table(p).ord
        divs, dmat = _divisor_matrix(p - 1)
        # class index 0 marks p | a; divisors shift to 1..len(divs)
        pos = np.zeros(p, dtype=np.int64)
        pos[divs] = np.arange(1, len(divs) + 1)
        cls = pos[ords[a % p]]
        hit = np.zeros((len(divs) + 1, len(divs) + 1), dtype=np.int32)
        hit[0, 0] = 1
        hit[1:, 1:] = dmat
        counts += hit[cls[:, None], cls[None, :]]
    return counts


def pair_counts(N: int, x: int, workers: int = 1) -> np.ndarray:
    """counts[a-1, b-1] = #{p <= x : p | a**n - b for some n >= 1}."""
    total = np.zeros((N, N), dtype=np.int32)
    for part in _map(_pair_chunk, [(c, N) for c in _chunks(_primes_upto(x))], workers):
        total += part
    return total


def variance_power_divisor_stat(N: int, x: int, workers: int = 1) -> StatReport:
    _check_N(N)
    _guard(x <= PAIR_VAR_MAX_X and N <= PAIR_VAR_MAX_N,
           f"divides-var guard is x <= {PAIR_VAR_MAX_X}, N <= {PAIR_VAR_MAX_N}")
    t0 = time.perf_counter()
    mean = main_term_C(x)
    counts = pair_counts(N, x, workers)
    lhs = math.fsum(((counts - mean) ** 2).ravel().tolist()) / N**2
    return _report("thm1.4", {"N": N, "x": x}, lhs, mean * mean, t0, workers, center=mean)


def local_order_average(p: int) -> tuple[Fraction, Fraction]:
    """(mean of l_a(p)/(p-1) over a mod p from the table, divisor-sum closed form)."""
    table = order_table(p)
    from_table = Fraction(int(table.ord[1:].astype(np.int64).sum()), (p - 1) ** 2)
    m = p - 1
    formula = sum(
        (Fraction(factorize(m // w).phi(), w * m) for w in factorize(m).divisors()),
        Fraction(0),
    )
    return from_table, formula


# --- lambda-primitive roots -------------------------------------------------


def primary_factors_of(factors) -> list[int]:
    """Orders of the primary cyclic factors of (Z/nZ)* from n's factorization."""
    out = []
    for p, e in factors:
        if p == 2:
            cyc = [2] if e == 2 else [2, 2 ** (e - 2)] if e >= 3 else []
        else:
            cyc = [(p - 1) * p ** (e - 1)]
        for m in cyc:
            for q, k in factorize(m).factors:
                out.append(q**k)
    return out


def R_from_primary(primary: list[int], phi: int) -> int:
    top: dict[int, int] = {}
    mult: dict[int, int] = {}
    for f in primary:
        q = int(factorize(f).primes[0])
        if f > top.get(q, 0):
            top[q], mult[q] = f, 1
        elif f == top[q]:
            mult[q] += 1
    num, den = phi, 1
    for q, d in mult.items():
        num *= q**d - 1
        den *= q**d
    return num // den


def _factor_with_spf(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def lambda_main_term(x: int) -> tuple[float, list[int]]:
    """sum_{n<=x} R(n)/n, and the list R(1..x)."""
    spf = smallest_prime_factors(max(x, 2))
    Rs = []
    for n in range(1, x + 1):
        f = _factor_with_spf(n, spf)
        phi = math.prod((p - 1) * p ** (e - 1) for p, e in f)
        Rs.append(R_from_primary(primary_factors_of(f), phi))
    return math.fsum(R / n for n, R in enumerate(Rs, 1)), Rs


def lambda_counts(y: int, x: int) -> list[int]:
    """counts[n-1] = #{a <= y : a is a lambda-primitive root mod n}, n = 1..x."""
    spf = smallest_prime_factors(max(x, 2))
    lam = lambda_sieve(max(x, 2))
    tables: dict[int, np.ndarray] = {}
    keep_below = x // 2

    def table(p, e):
        q = p**e
        t = tables.get(q)
        if t is None:
            t = prime_power_order_table(p, e)[: min(q, y + 1)].astype(np.int64)
            if q <= keep_below:
                tables[q] = t
        return t

    counts = []
    for n in range(1, x + 1):
        if n == 1:
            counts.append(y)
            continue
        top = min(n, y)
        r = np.arange(1, top + 1, dtype=np.int64)
        w = (y - r) // n + 1
        order = np.ones(top, dtype=np.int64)
        for p, e in _factor_with_spf(n, spf):
            order = np.lcm(order, table(p, e)[r % p**e])
        counts.append(int(w[order == lam[n]].sum()))
    return counts


def lambda_stat(y: int, x: int, workers: int = 1) -> StatReport:
    """y^-1 sum_{a<=y} N_a(x) against sum_{n<=x} R(n)/n."""
    if y < 1 or x < 1:
        raise DomainError("x and y must be >= 1")
    _guard(x <= LAMBDA_MAX_X and y <= LAMBDA_MAX_Y, f"lambda-avg guard is x <= {LAMBDA_MAX_X}, y <= {LAMBDA_MAX_Y}")
    t0 = time.perf_counter()
    main, Rs = lambda_main_term(x)
    counts = lambda_counts(y, x)
    rep = _report("thm1.5", {"y": y, "x": x}, sum(counts) / y, main, t0, workers)
    rep.per_prime = {
        "n": list(range(1, x + 1)),
        "term": [c / y for c in counts],
        "main": [R / n for n, R in enumerate(Rs, 1)],
    }
    return rep


def N_a(a: int, x: int) -> int:
    """#{n <= x : a is a lambda-primitive root mod n}."""
    lam = lambda_sieve(max(x, 2))
    spf = smallest_prime_factors(max(x, 2))
    total = 0
    for n in range(1, x + 1):
        if math.gcd(a, n) != 1:
            continue
        L = int(lam[n])
        if all(pow(a, L // q, n) != 1 for q, _ in _factor_with_spf(L, spf)):
            total += 1
    return total
