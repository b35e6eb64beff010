"""Euler-product constants with tail bounds, the logarithmic integral, and the
exponent functions f1, f2 whose roots fix the admissible ranges of N."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate

from .arith import sieve_primes
from .errors import DomainError

EPS = np.finfo(float).eps
MAIN_TERM_CUTOFF = 10**7
LI_LOWER = 2.0


@dataclass(frozen=True)
class ConstantValue:
    name: str
    value: float
    error_bound: float
    cutoff: int | None = None
    tolerance: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def contains(self, other: float) -> bool:
        return abs(other - self.value) <= self.error_bound


def _euler_product(name: str, cutoff: int, factor: Callable, log_tail: float) -> ConstantValue:
    if cutoff < 2:
        raise DomainError("cutoff must be >= 2")
    p = sieve_primes(cutoff, with_spf=False).primes.astype(np.float64)
    logs = np.log1p(-factor(p))
    total = math.fsum(logs.tolist())
    value = math.exp(total)
    # The full product is value * exp(-T) with 0 <= T <= log_tail.
    rounding = 4 * EPS * (math.fsum(np.abs(logs).tolist()) + len(logs)) * value
    return ConstantValue(name, value, float(value * -math.expm1(-log_tail) + rounding), cutoff=cutoff)


@lru_cache(maxsize=8)
def stephens_constant(cutoff: int = MAIN_TERM_CUTOFF) -> ConstantValue:
    """prod_p (1 - p/(p**3 - 1)) over p <= cutoff.

    Past the cutoff each -log(1 - u) is at most 2/p**2, so the log-tail is
    below 2/cutoff.
    """
    return _euler_product("stephens_C", cutoff, lambda p: p / (p**3 - 1), 2.0 / cutoff)


@lru_cache(maxsize=8)
def artin_constant(cutoff: int = MAIN_TERM_CUTOFF) -> ConstantValue:
    """prod_p (1 - 1/(p(p-1))) over p <= cutoff; log-tail below 1/(cutoff - 1)."""
    tail = 1.0 / (cutoff - 1) if cutoff > 2 else 1.0
    return _euler_product("artin_A", cutoff, lambda p: 1.0 / (p * (p - 1)), tail)


def li_with_error(x: float) -> tuple[float, float]:
    """Integral of 1/log t over [2, x] by adaptive Gauss-Kronrod, after t = e**u."""
    if x < LI_LOWER:
        raise DomainError("li(x) is defined here for x >= 2")
    if x == LI_LOWER:
        return 0.0, 0.0
    val, err = integrate.quad(
        lambda u: math.exp(u) / u, math.log(LI_LOWER), math.log(x),
        epsabs=0.0, epsrel=1e-13, limit=200,
    )
    if err > 1e-9 * (1 + abs(val)):
        raise ArithmeticError(f"quadrature for li({x}) did not converge: err={err}")
    return val, err


def li(x: float) -> float:
    return li_with_error(x)[0]


def _check_K(K: float) -> None:
    if not K > 0:
        raise DomainError("K must be positive")


def f1(K: float) -> float:
    _check_K(K)
    return -K / 4 + math.log1p(2 / K**2) / K - math.log(2) / K + 1 / K + 2 * math.log(K) / K


def f2(K: float) -> float:
    _check_K(K)
    return -K / 4 + 2 * math.log1p(4 / K**2) / K - 2 * math.log(4) / K + 2 / K + 4 * math.log(K) / K


def f1_shifted(K: float) -> float:
    """f1(K) + K/4 in closed form: (log(K**2/2 + 1) + 1) / K."""
    _check_K(K)
    return (math.log1p(K * K / 2) + 1) / K


def g_split(K: float) -> float:
    """-3K/16 + f1(K) + K/4."""
    return -3 * K / 16 + f1(K) + K / 4


FUNCTIONS: dict[str, Callable[[float], float]] = {"f1": f1, "f2": f2, "g": g_split}

# Brackets containing the unique sign change of each function.
ROOT_BRACKETS = {"f1": (3.0, 4.0), "g": (4.0, 4.5), "f2": (4.5, 5.0)}


def solve_root(f: str | Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> ConstantValue:
    """Bisection; the returned error_bound is the half-width of the last bracket."""
    name = f if isinstance(f, str) else getattr(f, "__name__", "f")
    fn = FUNCTIONS[f] if isinstance(f, str) else f
    if tol <= 0:
        raise DomainError("tol must be positive")
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return ConstantValue(f"root_{name}", lo, 0.0, tolerance=tol)
    if fhi == 0:
        return ConstantValue(f"root_{name}", hi, 0.0, tolerance=tol)
    if flo * fhi > 0:
        raise DomainError(f"{name} has no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = fn(mid)
        if fm == 0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return ConstantValue(f"root_{name}", 0.5 * (lo + hi), 0.5 * (hi - lo), tolerance=tol)


def roots(tol: float = 1e-12) -> list[ConstantValue]:
    return [solve_root(name, *ROOT_BRACKETS[name], tol) for name in ("f1", "g", "f2")]


def sign_conditions() -> list[dict]:
    """The four strict inequalities used to place the thresholds 3.42, 4.2 and 4.8365."""
    checks = [
        ("f1(3.42) < 0", f1(3.42)),
        ("f2(4.8365) < 0", f2(4.8365)),
        ("-(3/16)*4.2 + f1(4.18) + 4.18/4 < 0", -3 / 16 * 4.2 + f1(4.18) + 4.18 / 4),
        ("-3.419907/4 + f1(3.419906) + 3.419906/4 < 0", -3.419907 / 4 + f1(3.419906) + 3.419906 / 4),
    ]
    return [{"name": name, "pass": val < 0, "value": val, "bound": 0.0} for name, val in checks]
