"""Wall-clock scaling of the quadratic pair loop and the linear tree engine."""

from __future__ import annotations

import gc
import math
import time
from dataclasses import asdict, dataclass, field

from .aggregate import pair_loop_sum
from .closed_forms import tree_mean
from .errors import CapExceeded, InvalidParameter
from .generators import generate
from .shortest_paths import all_pairs_distances

MAX_BENCH_EDGES = 20_000
MAX_TREE_VERTICES = 5_000_000


@dataclass
class BenchRow:
    kind: str
    n: int
    m: int
    apsp_ms: float | None
    pair_loop_ms: float
    value: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    # pair-loop time ratio between consecutive sizes, keyed "m_small->m_large"
    ratios: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows], "ratios": self.ratios}


def scaling_instance(m: int, seed: int = 0, density: float = 2.0):
    """A random connected graph with exactly ``m`` edges and about ``m / density`` vertices."""
    if m < 2:
        raise InvalidParameter(f"need m >= 2, got {m}")
    if m > MAX_BENCH_EDGES:
        raise CapExceeded(f"m={m} exceeds the benchmark cap of {MAX_BENCH_EDGES}")
    n = max(3, int(round(m / density)) + 1)
    return generate("random_connected", n, lo=0.5, hi=2.0, seed=seed, extra_edges=m - (n - 1))


def _best_of(fn, repeats: int):
    # timeit convention: minimum over repeats, collector paused while timing
    best, value = math.inf, None
    enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - t0)
    finally:
        if enabled:
            gc.enable()
    return best * 1e3, value


def bench_pair_loop(
    sizes=(250, 500, 1000),
    seed: int = 0,
    backend: str = "spt",
    workers: int = 1,
    repeats: int = 1,
    instances: int = 1,
) -> BenchReport:
    """Time the pair loop per size.

    Each size sums the loop time over ``instances`` graphs (seeds ``seed``,
    ``seed + 1``, ...), since per-pair cost depends on the instance's mix of
    cases; each instance is timed ``repeats`` times and the best kept.
    ``value`` is the cross sum of the first instance.
    """
    if repeats < 1 or instances < 1:
        raise InvalidParameter(f"repeats and instances must be at least 1, got {repeats}, {instances}")
    sizes = sorted(sizes)
    report = BenchReport()
    for m in sizes:
        apsp_total = loop_total = 0.0
        first = None
        for s in range(seed, seed + instances):
            g = scaling_instance(m, s)
            apsp_ms, dm = _best_of(lambda: all_pairs_distances(g), 1)
            loop_ms, cross = _best_of(lambda: pair_loop_sum(g, dm, backend, workers=workers), repeats)
            apsp_total += apsp_ms
            loop_total += loop_ms
            first = (g, cross) if first is None else first
        g, cross = first
        report.rows.append(BenchRow("random_connected", g.n, g.m, apsp_total, loop_total, cross))
    for a, b in zip(report.rows, report.rows[1:]):
        report.ratios[f"{a.m}->{b.m}"] = b.pair_loop_ms / a.pair_loop_ms
    return report


def bench_tree(n: int = 100_000, seed: int = 0) -> BenchRow:
    if n > MAX_TREE_VERTICES:
        raise CapExceeded(f"n={n} exceeds the tree benchmark cap of {MAX_TREE_VERTICES}")
    t = generate("random_tree", n, lo=0.5, hi=2.0, seed=seed)
    t0 = time.perf_counter()
    value = tree_mean(t)
    t1 = time.perf_counter()
    return BenchRow("random_tree", t.n, t.m, None, (t1 - t0) * 1e3, value)
