"""Command-line front end.

Exit codes: 0 success, 1 a reported check failed (identity-check only),
2 usage or validation error, 3 a size guard was exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import arith, characters, constants, divisors, orders, statistics
from .errors import CapacityError, DomainError
from .report import dumps, envelope, per_prime_rows, ratio_series, rows_to_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _num(text: str):
    """Integers may be written as 1e5 or 10**5."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        if "**" in text:
            base, exp = text.split("**")
            return int(base) ** int(exp)
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    return int(v) if v.is_integer() and "." not in text.lower().split("e")[0] else v


def _int(text: str) -> int:
    v = _num(text)
    if not isinstance(v, int):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return v


def _int_list(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if "-" in part.strip()[1:]:
            lo, hi = part.split("-")
            out.extend(range(_int(lo), _int(hi) + 1))
        else:
            out.append(_int(part))
    return out


# name -> (help, {param: (type, default)})
COMMANDS = {
    "sieve": ("Sieve the primes up to x (the ranges p <= x of every statistic).",
              {"x": (_int, 100)}),
    "factor": ("Factor a 64-bit integer by trial division, Miller-Rabin and Pollard rho.",
               {"n": (_int, None)}),
    "order": ("Multiplicative order l_a(p); without --a, the order-class counts of p (Thm 1.1 ingredient).",
              {"p": (_int, None), "a": (_int, None)}),
    "avg-order": ("Theorem 1.1 / Eq. (1): N^-1 sum_a sum_{p<=x} l_a(p)/(p-1) versus C Li(x).",
                  {"x": (_int, 10**4), "N": (_int, 10**3)}),
    "variance": ("Theorem 1.2 / Eq. (2): mean square deviation of sum_p l_a(p)/(p-1) from C Li(x).",
                 {"x": (_int, 10**4), "N": (_int, 10**3)}),
    "primroot-avg": ("Eq. (3): N^-1 sum_a P_a(x) versus A pi(x).",
                     {"x": (_int, 10**4), "N": (_int, 10**3)}),
    "primroot-var": ("Eq. (4): mean square deviation of P_a(x) from A pi(x).",
                     {"x": (_int, 10**4), "N": (_int, 10**3)}),
    "divides": ("Theorem 1.3 / Eq. (5): N^-2 sum_{a,b} #{p <= x : p | a^n - b} versus C Li(x).",
                {"x": (_int, 10**4), "N": (_int, 10**3)}),
    "divides-var": ("Theorem 1.4 / Eq. (6): mean square deviation of the Eq. (5) counts.",
                    {"x": (_int, 2000), "N": (_int, 100)}),
    "lambda-avg": ("Theorem 1.5 / Eq. (9): y^-1 sum_{a<=y} N_a(x) versus sum_{n<=x} R(n)/n (Eq. 44).",
                   {"x": (_int, 2000), "y": (_int, 1000), "a": (_int, None)}),
    "constants": ("Stephens' constant C and Artin's constant A with tail bounds; optional Li(x).",
                  {"cutoff": (_int, 10**6), "x": (_num, None)}),
    "roots": ("Roots of f1, f2 and -3K/16 + f1(K) + K/4 (thresholds 3.42, 4.2, 4.8365), plus the sign conditions.",
              {"tol": (float, 1e-12)}),
    "tau-check": ("Lemma 2.1 / Eq. (10), Corollary 2.1.1 / Eq. (11) and Lemma 2.2 / Eq. (12) on a grid.",
                  {"N": (_int_list, [10, 100, 1000, 10000]), "r": (_int_list, [1, 2, 3, 4, 5, 6]),
                   "c": (float, 1.0)}),
    "charsum-s4": ("Eq. (14): S4 = sum_{p<=x} sum*_chi |sum_{a<=N} chi(a)| / ord(chi), evaluated exactly.",
                   {"x": (_int, 100), "N": (_int, 50)}),
    "charsum-s10": ("Eq. (15): S10 over ordered pairs p != q <= x and primitive chi mod pq.",
                    {"x": (_int, 50), "N": (_int, 100)}),
    "identity-check": ("Exact identities behind Theorems 1.1/1.3: local order averages, order-class counts "
                       "phi(d), and sum_{d|n} phi(d) = n.",
                       {"pmax": (_int, 1000), "nmax": (_int, 10**4)}),
}

STAT_COMMANDS = {
    "avg-order": statistics.avg_order_stat,
    "variance": statistics.variance_stat,
    "primroot-avg": statistics.primitive_root_stat,
    "primroot-var": statistics.variance_primitive_root_stat,
    "divides": statistics.power_divisor_stat,
    "divides-var": statistics.variance_power_divisor_stat,
}

RATIO_WINDOW = (0.9, 1.1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orderstats", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true", help="print the version and exit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, (help_text, params) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        for key, (typ, default) in params.items():
            shown = "" if default is None else f" (default {default})"
            p.add_argument(f"--{key}", type=typ, default=None, help=f"{key}{shown}")
        p.add_argument("--out", help="write the main output here instead of stdout")
        p.add_argument("--format", choices=["json", "csv", "svg"], default=None)
        p.add_argument("--figure", help="also render the ratio-vs-x figure to this path (.svg/.png/.pdf)")
        p.add_argument("--workers", type=_int, default=None, help="worker processes (default 1)")
        p.add_argument("--config", help="key=value file merged under the flags")
        p.add_argument("--no-meta", action="store_true", help="omit timestamps and runtimes")
    return parser


def read_config(path) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().lstrip("-")] = v.strip()
    return out


def resolve(args) -> dict:
    """Flags override config-file values, which override defaults."""
    _, params = COMMANDS[args.command]
    cfg = read_config(args.config) if args.config else {}
    unknown = set(cfg) - set(params) - {"workers", "format", "out", "figure"}
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {sorted(unknown)}")
    out = {}
    for key, (typ, default) in params.items():
        val = getattr(args, key)
        if val is None and key in cfg:
            try:
                val = typ(cfg[key])
            except argparse.ArgumentTypeError as exc:
                raise UsageError(str(exc)) from None
        out[key] = default if val is None else val
    workers = args.workers if args.workers is not None else _int(cfg.get("workers", "1"))
    if workers < 1:
        raise UsageError("--workers must be positive")
    out["_workers"] = workers
    out["_format"] = args.format or cfg.get("format") or ("csv" if args.command == "tau-check" else "json")
    out["_out"] = args.out or cfg.get("out")
    out["_figure"] = args.figure or cfg.get("figure")
    return out


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


def _emit(text: str | None, path) -> None:
    if text is None:
        return
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _stat(name: str, p: dict):
    _require(p["x"] >= 2, "--x must be >= 2")
    _require(p["N"] >= 1, "--N must be >= 1")
    rep = STAT_COMMANDS[name](p["N"], p["x"], workers=p["_workers"])
    return rep


def run_command(name: str, p: dict, meta: bool):
    """Returns (document, csv rows or None, report or None, exit code)."""
    params = {k: v for k, v in p.items() if not k.startswith("_")}
    checks: list[dict] = []
    rows = None
    rep = None
    code = EXIT_OK

    if name == "sieve":
        _require(p["x"] >= 2, "--x must be >= 2")
        table = arith.sieve_primes(p["x"], with_spf=False)
        results = {"pi_x": len(table), "largest_prime": int(table.primes[-1])}
        rows = [{"p": int(q)} for q in table.primes]
    elif name == "factor":
        _require(p["n"] is not None and 1 <= p["n"] < 2**64, "--n must be in [1, 2**64)")
        f = arith.factorize(p["n"])
        results = {"n": f.n, "factors": [list(t) for t in f.factors]}
        checks.append({"name": "factors are prime", "pass": all(arith.is_prime(q) for q in f.primes)})
    elif name == "order":
        _require(p["p"] is not None and arith.is_prime(p["p"]), "--p must be prime")
        q = p["p"]
        if p["a"] is not None:
            results = {"a": p["a"], "p": q, "order": orders.mult_order(p["a"], q)}
        else:
            _require(q <= characters.GROUP_CAP, f"--p must be <= {characters.GROUP_CAP} for a full table")
            table = orders.order_table(q)
            counts = table.class_counts()
            phi_ok = all(counts.get(d, 0) == arith.euler_phi(d) for d in arith.factorize(q - 1).divisors())
            results = {"p": q, "generator": table.generator,
                       "class_counts": {str(k): v for k, v in sorted(counts.items())}}
            checks.append({"name": "class count = phi(d) for d | p-1", "pass": phi_ok})
            rows = [{"order": k, "count": v} for k, v in sorted(counts.items())]
    elif name in STAT_COMMANDS:
        rep = _stat(name, p)
        results = rep.to_dict(meta)
        if rep.per_prime:
            rows = per_prime_rows(rep)
        if name in ("avg-order", "primroot-avg", "divides"):
            checks.append({"name": "ratio in window", "pass": RATIO_WINDOW[0] <= rep.ratio <= RATIO_WINDOW[1],
                           "value": rep.ratio, "bound": list(RATIO_WINDOW)})
    elif name == "lambda-avg":
        _require(p["x"] >= 1 and p["y"] >= 1, "--x and --y must be >= 1")
        if p["a"] is not None:
            results = {"a": p["a"], "x": p["x"], "N_a": statistics.N_a(p["a"], p["x"])}
        else:
            rep = statistics.lambda_stat(p["y"], p["x"], workers=p["_workers"])
            results = rep.to_dict(meta)
            rows = per_prime_rows(rep)
            checks.append({"name": "ratio in window", "pass": RATIO_WINDOW[0] <= rep.ratio <= RATIO_WINDOW[1],
                           "value": rep.ratio, "bound": list(RATIO_WINDOW)})
    elif name == "constants":
        _require(p["cutoff"] >= 2, "--cutoff must be >= 2")
        vals = [constants.stephens_constant(p["cutoff"]), constants.artin_constant(p["cutoff"])]
        results = [v.to_dict() for v in vals]
        if p["x"] is not None:
            _require(p["x"] >= 2, "--x must be >= 2")
            val, err = constants.li_with_error(float(p["x"]))
            results.append({"name": "Li", "value": val, "error_bound": err, "x": p["x"],
                            "convention": "integral of 1/log t from 2 to x"})
        rows = results
    elif name == "roots":
        _require(p["tol"] > 0, "--tol must be positive")
        vals = constants.roots(p["tol"])
        results = [v.to_dict() for v in vals]
        rows = results
        checks.extend(constants.sign_conditions())
        shifted = [abs(constants.f1(k) + k / 4 - constants.f1_shifted(k)) for k in _grid(0.5, 50, 200)]
        checks.append({"name": "f1(K)+K/4 closed form", "pass": max(shifted) <= 1e-12,
                       "value": max(shifted), "bound": 1e-12})
    elif name == "tau-check":
        rows = []
        for N in p["N"]:
            _require(N >= 1, "--N values must be >= 1")
            for r in p["r"]:
                _require(r >= 1, "--r values must be >= 1")
                chk = divisors.check_tau_bound(N, r)
                rows.append({**chk.as_row(), "statement": "lemma2.1"})
                if N > 1 and r - 1 <= p["c"] * math.log(N):
                    rows.append({**divisors.check_corollary_211(N, r, p["c"]).as_row(), "statement": "cor2.1.1"})
                if r in divisors.TUPLE_GUARDS and N <= divisors.TUPLE_GUARDS[r] and r > 1:
                    rows.append({**divisors.check_lemma_22(N, r).as_row(), "statement": "lemma2.2"})
        results = rows
        checks.append({"name": "all inequalities hold", "pass": all(r["holds"] for r in rows)})
    elif name in ("charsum-s4", "charsum-s10"):
        _require(p["x"] >= 2 and p["N"] >= 1, "--x must be >= 2 and --N >= 1")
        fn = characters.S4 if name == "charsum-s4" else characters.S10
        results = {"x": p["x"], "N": p["N"], "value": fn(p["x"], p["N"])}
    elif name == "identity-check":
        results, checks = identity_checks(p["pmax"], p["nmax"])
        rows = [{"name": c["name"], "pass": c["pass"], "value": c["value"]} for c in checks]
        code = EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAIL
    else:  # pragma: no cover
        raise UsageError(f"unknown command {name}")

    run_meta = None
    if meta:
        run_meta = {"runtime_ms": rep.runtime_ms} if rep else {}
    doc = envelope(name, params, results, checks, meta=run_meta)
    return doc, rows, rep, code


def _grid(lo, hi, n):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def identity_checks(pmax: int, nmax: int):
    _require(pmax >= 2 and nmax >= 1, "--pmax must be >= 2 and --nmax >= 1")
    primes = [int(q) for q in arith.sieve_primes(pmax, with_spf=False).primes]
    local_bad = [q for q in primes if len(set(statistics.local_order_average(q))) != 1]
    class_bad = []
    for q in primes:
        counts = orders.order_table(q).class_counts()
        if any(counts.get(d, 0) != arith.euler_phi(d) for d in arith.factorize(q - 1).divisors()):
            class_bad.append(q)
    phi_bad = _phi_divisor_sum_failures(nmax)
    checks = [
        {"name": "local order average = divisor-sum form", "pass": not local_bad, "value": len(local_bad)},
        {"name": "order-class count = phi(d)", "pass": not class_bad, "value": len(class_bad)},
        {"name": "sum_{d|n} phi(d) = n", "pass": not phi_bad, "value": len(phi_bad)},
    ]
    results = {"primes_checked": len(primes), "n_checked": nmax,
               "mismatches": {"local_average": local_bad, "order_classes": class_bad, "phi_sum": phi_bad}}
    return results, checks


def _phi_divisor_sum_failures(nmax: int) -> list[int]:
    phi = np.arange(nmax + 1, dtype=np.int64)
    for q in arith.sieve_primes(max(nmax, 2), with_spf=False).primes:
        q = int(q)
        phi[q::q] -= phi[q::q] // q
    total = np.zeros(nmax + 1, dtype=np.int64)
    for d in range(1, nmax + 1):
        total[d::d] += phi[d]
    return (np.flatnonzero(total[1:] != np.arange(1, nmax + 1)) + 1).tolist()


def _figure(rep, name: str, path) -> None:
    from .plotting import ratio_figure, save_figure

    xs, ratios = ratio_series(rep)
    xlabel = "x" if rep.theorem != "thm1.5" else "x (n <= x)"
    title = f"{name}: {', '.join(f'{k}={v}' for k, v in rep.params.items())}"
    save_figure(ratio_figure(xs, ratios, title, xlabel, RATIO_WINDOW), path)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.version:
        from . import __version__

        print(__version__)
        return EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        p = resolve(args)
        doc, rows, rep, code = run_command(args.command, p, meta=not args.no_meta)
        fmt = p["_format"]
        if p["_figure"] or fmt == "svg":
            if rep is None or not rep.per_prime:
                raise UsageError(f"{args.command} has no ratio-vs-x figure")
        if p["_figure"]:
            _figure(rep, args.command, p["_figure"])
        if fmt == "json":
            _emit(dumps(doc), p["_out"])
        elif fmt == "csv":
            _require(rows is not None, f"{args.command} has no CSV form")
            _emit(rows_to_csv(rows), p["_out"])
        else:
            _require(p["_out"] is not None, "--format svg needs --out")
            _figure(rep, args.command, p["_out"])
        return code
    except UsageError as exc:
        print(f"orderstats {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"orderstats {args.command}: guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except DomainError as exc:
        print(f"orderstats {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
