"""Benchmark sweeps with log-log fits of the final fragment count.

Every instance runs the oracle on its output; a failing instance aborts the
sweep with ``OracleFailure`` before any report is written.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .depthgraph import worker_count
from .pipeline import DEFAULT_RHO, cut_lines, cut_triangles, cut_triangles_ksensitive
from .scenes import GENERATORS, count_crossings

COLUMNS = ["family", "algorithm", "n", "K", "r", "rho", "strategy", "fragments_T1", "cuts_X", "fragments_T2", "oracle_ok", "wall_ms", "seed"]

# family -> default algorithm
FAMILIES = {
    "random": "triangles",
    "parallel": "triangles",
    "sparse": "triangles-k",
    "dense": "triangles-k",
    "random-segments": "lines",
    "parallel-segments": "lines",
}

ALGORITHMS = {
    "triangles": lambda sc, strategy, seed, rho: cut_triangles(sc, rho=rho, strategy=strategy, seed=seed, workers=1),
    "triangles-k": lambda sc, strategy, seed, rho: cut_triangles_ksensitive(sc, rho=rho, strategy=strategy, seed=seed, workers=1),
    "lines": lambda sc, strategy, seed, rho: cut_lines(sc.segments, rho=rho, strategy=strategy, seed=seed),
}


class OracleFailure(RuntimeError):
    pass


@dataclass
class Row:
    family: str
    algorithm: str
    n: int
    K: int
    r: int
    rho: int
    strategy: str
    fragments_T1: int
    cuts_X: int
    fragments_T2: int
    oracle_ok: bool
    wall_ms: float
    seed: int


@dataclass
class Fit:
    family: str
    algorithm: str
    strategy: str
    slope: float
    intercept: float
    r2: float
    points: int


def run_instance(family: str, n: int, seed: int = 0, strategy: str = "greedy", algorithm: Optional[str] = None, rho: int = DEFAULT_RHO) -> Row:
    algorithm = algorithm or FAMILIES.get(family, "triangles")
    scene = GENERATORS[family](n=n, seed=seed)
    K = count_crossings(scene.objects)
    t0 = time.perf_counter()
    res = ALGORITHMS[algorithm](scene, strategy, seed, rho)
    wall = (time.perf_counter() - t0) * 1000
    st = res.stats
    row = Row(
        family, algorithm, n, K, st.get("r", 0), rho, strategy,
        st.get("T1", st.get("T2", 0)), st.get("X", 0), st["T2"], bool(st.get("oracle_ok")), round(wall, 1), seed,
    )
    if not row.oracle_ok:
        raise OracleFailure(f"{family} n={n} seed={seed} {algorithm}/{strategy}: output has a depth cycle")
    return row


def _job(args):
    return run_instance(*args)


def sweep(families: Sequence[str], ns: Sequence[int], seeds: Sequence[int] = (0,), strategies: Sequence[str] = ("greedy",), algorithm: Optional[str] = None, rho: int = DEFAULT_RHO, workers: Optional[int] = None) -> list:
    """All rows, in (family, n, seed, strategy) order."""
    jobs = [(f, n, s, st, algorithm, rho) for f in families for n in ns for s in seeds for st in strategies]
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_job, jobs))
    else:
        rows = [_job(j) for j in jobs]
    return rows


def fit(rows: Sequence[Row]) -> list:
    """Least-squares slope of log T2 against log n per (family, algorithm, strategy)."""
    groups: dict = {}
    for r in rows:
        groups.setdefault((r.family, r.algorithm, r.strategy), []).append(r)
    out = []
    for (fam, alg, strat), rs in groups.items():
        x = np.log([r.n for r in rs])
        y = np.log([max(r.fragments_T2, 1) for r in rs])
        if len(set(x.tolist())) < 2:
            out.append(Fit(fam, alg, strat, math.nan, math.nan, math.nan, len(rs)))
            continue
        slope, intercept = np.polyfit(x, y, 1)
        pred = slope * x + intercept
        ss_res = float(np.sum((y - pred) ** 2))
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
        out.append(Fit(fam, alg, strat, float(slope), float(intercept), r2, len(rs)))
    return out


def rows_to_csv(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        d = asdict(r)
        w.writerow([d[c] for c in COLUMNS])
    return buf.getvalue()


def fits_to_json(fits: Sequence[Fit]) -> str:
    return json.dumps([asdict(f) for f in fits], indent=1)
