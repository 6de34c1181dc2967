"""Whole-graph means: continuous (pairwise edge sum), discrete, Wiener index."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import multiprocessing as mp

import numpy as np

from .errors import EmptyEdgeSet, InvalidParameter
from .graph import WeightedGraph, total_length
from .pair_spt import pair_mean as spt_pair_mean, vertex_edge_mean
from .roof import roof_pair_mean
from .shortest_paths import DistanceMatrix, all_pairs_distances, dijkstra
from .tolerance import DEFAULT_TOL, Tolerance

BACKENDS = ("spt", "roof")
# pairs per reduction chunk; chunk boundaries depend only on m, never on the worker count
CHUNK_PAIRS = 8192
# below this many pairs a worker pool costs more than it saves
POOL_MIN_PAIRS = 50_000


@dataclass
class MeanDistanceResult:
    value: float
    backend: str
    n: int
    m: int
    total_length: float
    contributions: list[tuple[int, int, float]] | None = field(default=None, repr=False)
    detected_class: str | None = None


def _pair_value(backend, g, dm, i, j, tol):
    if backend == "spt":
        return spt_pair_mean(g, dm, i, j, tol)
    e, f = g.edges[i], g.edges[j]
    return roof_pair_mean(dm, e, f, tol)


def row_chunks(m: int, chunk_pairs: int = CHUNK_PAIRS) -> list[tuple[int, int]]:
    """Split rows ``0..m-1`` of the upper-triangular pair loop into fixed blocks."""
    chunks = []
    start = acc = 0
    for i in range(m):
        acc += m - 1 - i
        if acc >= chunk_pairs:
            chunks.append((start, i + 1))
            start, acc = i + 1, 0
    if start < m:
        chunks.append((start, m))
    return chunks


def _chunk_sum(backend, g, dm, rows, tol, table=None):
    lengths = g.lengths()
    terms = []
    for i in range(*rows):
        li = lengths[i]
        for j in range(i + 1, g.m):
            mu = _pair_value(backend, g, dm, i, j, tol)
            if table is not None:
                table.append((i, j, mu))
            terms.append(mu * li * lengths[j])
    return math.fsum(terms)


_WORKER_STATE: dict = {}


def _init_worker(backend, g, dm, tol):
    _WORKER_STATE.update(backend=backend, g=g, dm=dm, tol=tol)


def _worker_chunk(rows):
    s = _WORKER_STATE
    return _chunk_sum(s["backend"], s["g"], s["dm"], rows, s["tol"])


def default_workers() -> int:
    env = os.environ.get("CONTMEAN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InvalidParameter(f"CONTMEAN_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def pair_loop_sum(
    g: WeightedGraph,
    dm: DistanceMatrix,
    backend: str = "spt",
    *,
    workers: int = 1,
    tol: Tolerance = DEFAULT_TOL,
    table: list | None = None,
) -> float:
    """``sum over unordered pairs i < j of mu(e_i, e_j) |e_i| |e_j|``.

    Each fixed chunk is reduced with ``math.fsum`` and the chunk sums are
    reduced again in chunk order, so the result is bit-identical for any
    number of workers.
    """
    if backend not in BACKENDS:
        raise InvalidParameter(f"unknown backend {backend!r}")
    chunks = row_chunks(g.m)
    npairs = g.m * (g.m - 1) // 2
    if workers <= 1 or table is not None or npairs < POOL_MIN_PAIRS or len(chunks) < 2:
        sums = [_chunk_sum(backend, g, dm, rows, tol, table) for rows in chunks]
    else:
        ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
        with ProcessPoolExecutor(
            max_workers=min(workers, len(chunks)),
            mp_context=ctx,
            initializer=_init_worker,
            initargs=(backend, g, dm, tol),
        ) as pool:
            sums = list(pool.map(_worker_chunk, chunks))
    return math.fsum(sums)


def continuous_mean(
    g: WeightedGraph,
    backend: str = "spt",
    *,
    dm: DistanceMatrix | None = None,
    workers: int = 1,
    tol: Tolerance = DEFAULT_TOL,
    with_table: bool = False,
) -> MeanDistanceResult:
    """Continuous mean distance over all ordered pairs of points of the graph.

    Distinct edge pairs are weighted by ``|e||f|``; each edge with itself
    contributes ``|e|^3 / 3``; the sum is divided by the squared total length.
    """
    if g.m == 0:
        raise EmptyEdgeSet("continuous mean needs at least one edge")
    if dm is None:
        dm = all_pairs_distances(g)
    total = total_length(g)
    table = [] if with_table else None
    cross = pair_loop_sum(g, dm, backend, workers=workers, tol=tol, table=table)
    same = math.fsum(e.length ** 3 / 3.0 for e in g.edges)
    value = (2.0 * cross + same) / (total * total)
    return MeanDistanceResult(value, backend, g.n, g.m, total, table)


def _tree_wiener(g: WeightedGraph) -> float:
    # each edge is crossed by size * (n - size) vertex pairs
    n = g.n
    adj = g.adjacency
    parent = [-1] * n
    parent_w = [0.0] * n
    order = []
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        x = stack.pop()
        order.append(x)
        for y, _, w in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                parent_w[y] = w
                stack.append(y)
    size = [1] * n
    terms = []
    for x in reversed(order[1:]):
        size[parent[x]] += size[x]
        terms.append(parent_w[x] * size[x] * (n - size[x]))
    return math.fsum(terms)


def wiener_index(g: WeightedGraph, dm: DistanceMatrix | None = None) -> float:
    """Sum of distances over unordered vertex pairs.

    Trees use the O(n) edge-cut formula; other graphs use the supplied
    matrix or stream one Dijkstra row at a time.
    """
    if g.n <= 1:
        return 0.0
    if dm is not None:
        iu = np.triu_indices(g.n, 1)
        return math.fsum(dm.array[iu].tolist())
    if g.is_tree():
        return _tree_wiener(g)
    rows = []
    for s in range(g.n):
        rows.append(math.fsum(dijkstra(g, s)[0][s + 1 :]))
    return math.fsum(rows)


def discrete_mean(g: WeightedGraph, dm: DistanceMatrix | None = None) -> float:
    """Mean of the n x n distance matrix, ``2 W / n^2`` (0 for one vertex)."""
    if g.n == 1:
        return 0.0
    return 2.0 * wiener_index(g, dm) / (g.n * g.n)


def vertex_graph_mean(
    g: WeightedGraph,
    dm: DistanceMatrix,
    v: int,
    edge_subset=None,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Length-weighted average of the vertex-to-edge means over ``edge_subset`` (default all)."""
    idx = range(g.m) if edge_subset is None else list(edge_subset)
    if len(idx) == 0:
        raise EmptyEdgeSet("vertex_graph_mean needs a non-empty edge subset")
    num = math.fsum(vertex_edge_mean(dm, v, g.edges[i], tol) * g.edges[i].length for i in idx)
    den = math.fsum(g.edges[i].length for i in idx)
    return num / den


def scale_graph(g: WeightedGraph, beta: float) -> WeightedGraph:
    """Multiply every edge length by ``beta > 0``; all means scale by ``beta``."""
    if not (beta > 0 and math.isfinite(beta)):
        raise InvalidParameter(f"scale factor must be positive, got {beta!r}")
    if beta == 1:
        return g
    return WeightedGraph(g.n, [(u, v, w * beta) for u, v, w in g.edges], g.labels)
