"""Serialization of results: the JSON envelope, per-prime CSV, and the
ratio-vs-x series behind the figures."""

from __future__ import annotations

import csv
import io
import json
import math
import time

import numpy as np

from . import __version__
from .constants import artin_constant, li, stephens_constant


def envelope(command: str, params: dict, results, checks=(), meta: dict | None = None) -> dict:
    out = {
        "tool_version": __version__,
        "command": command,
        "params": params,
        "results": results,
        "checks": [_check(**c) for c in checks],
    }
    if meta is not None:
        out["meta"] = {"generated_unix": round(time.time(), 3), **meta}
    return out


def _check(name, pass_=None, value=None, bound=None, **kw) -> dict:
    if pass_ is None:
        pass_ = kw.pop("pass")
    return {"name": name, "pass": bool(pass_), "value": _jsonable(value), "bound": _jsonable(bound)}


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def dumps(doc: dict) -> str:
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def per_prime_rows(report) -> list[dict]:
    pp = report.per_prime or {}
    key = "p" if "p" in pp else "n"
    cum = np.cumsum(pp.get("term", []))
    return [{key: k, "term": t, "cumulative": float(c)} for k, t, c in zip(pp.get(key, []), pp.get("term", []), cum)]


def ratio_series(report, points: int = 40) -> tuple[np.ndarray, np.ndarray]:
    """(x_k, lhs(x_k)/main(x_k)) on a geometric ladder up to the report's x."""
    pp = report.per_prime
    if not pp:
        raise ValueError(f"{report.theorem} keeps no partial sums to plot")
    x = report.params["x"]
    lo = min(10, x)
    ladder = np.unique(np.geomspace(lo, x, points).round().astype(np.int64))
    if "p" in pp:
        keys = np.asarray(pp["p"])
        cum = np.cumsum(pp["term"])
        out = []
        for xk in ladder:
            i = int(np.searchsorted(keys, xk, side="right"))
            if i == 0 or xk <= 2:
                out.append(np.nan)
                continue
            if report.theorem == "eq3":
                main = artin_constant().value * i
            else:
                main = stephens_constant().value * li(float(xk))
            out.append(cum[i - 1] / main)
        return ladder, np.array(out)
    cum = np.cumsum(pp["term"])
    main = np.cumsum(pp["main"])
    return ladder, cum[ladder - 1] / main[ladder - 1]
