"""Benchmark harness: balance checks over generated directed cycles.

For every (size, weight type, method) cell, a balanced cycle is generated
and checked; wall time covers the check only (generation excluded).  Output
is CSV with the fixed columns ``n,weight_type,method,cpu_seconds,err,verdict``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .balance import Method, check_balance
from .generate import gen_cycle
from .graphs import WeightType

CSV_COLUMNS = ("n", "weight_type", "method", "cpu_seconds", "err", "verdict")

DEFAULT_SIZES = (10, 20, 50, 100, 200, 500)
DEFAULT_TYPES = (WeightType.UNIT_COMPLEX, WeightType.UNIT_DUAL_QUATERNION)
DEFAULT_METHODS = (Method.DIRECT, Method.GAIN_GRAPH)


@dataclass(frozen=True)
class BenchRecord:
    n: int
    weight_type: str
    method: str
    cpu_seconds: float
    err: float
    verdict: str


def run_benchmark(sizes: Sequence[int] = DEFAULT_SIZES,
                  weight_types: Sequence[WeightType | str] = DEFAULT_TYPES,
                  methods: Sequence[Method | str] = DEFAULT_METHODS,
                  repetitions: int = 1,
                  seed: int = 0) -> list[BenchRecord]:
    """One record per (n, weight type, method); times averaged over repetitions.

    Each cell draws its graph from an independent seed stream, so verdicts
    and residuals are deterministic per ``seed`` (timings of course are not).
    """
    records = []
    for ti, weight_type in enumerate(WeightType(t) for t in weight_types):
        for n in sizes:
            rng = np.random.default_rng(np.random.SeedSequence([seed, ti, n]))
            g = gen_cycle(n, weight_type, rng)
            for method in (Method(m) for m in methods):
                times = []
                report = None
                for _ in range(max(1, repetitions)):
                    report = check_balance(g, method)
                    times.append(report.seconds)
                records.append(BenchRecord(
                    n=n,
                    weight_type=weight_type.value,
                    method=method.value,
                    cpu_seconds=float(np.mean(times)),
                    err=report.err if report.err is not None else math.nan,
                    verdict=report.verdict.value,
                ))
    return records


def write_csv(records: Iterable[BenchRecord], stream: IO[str]) -> None:
    writer = csv.writer(stream)
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.n, r.weight_type, r.method,
                         repr(r.cpu_seconds), repr(r.err), r.verdict])


def save_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="") as f:
        write_csv(records, f)
