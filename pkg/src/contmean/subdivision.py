"""Edge subdivisions and the bounds tying their discrete means to the continuous mean.

The canonical k-th subdivision inserts a midpoint (blue vertex) on every
edge and then splits each half into ``2^(k-1)`` equal parts (red
vertices).  Its Wiener index is bounded above by a closed expression in
Wiener sums of the midpoint graph only, attained by all trees.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as sparse_dijkstra

from .aggregate import _tree_wiener, discrete_mean, wiener_index
from .errors import CapExceeded, InvalidParameter, NotATree, NotUniform
from .graph import Edge, WeightedGraph, total_length
from .shortest_paths import DistanceMatrix
from .tolerance import DEFAULT_TOL, Tolerance

DEFAULT_CAP = 2**20
BLACK, BLUE, RED = "black", "blue", "red"


# --- edge-pair and line-graph bounds -----------------------------------------


def edge_distance(dm: DistanceMatrix, e: Edge, f: Edge) -> float:
    return dm.edge_distance(e, f)


def pair_bounds(dm: DistanceMatrix, e: Edge, f: Edge) -> tuple[float, float]:
    """``d(e,f) + (|e|+|f|)/4 <= mu(e,f) <= d(e,f) + (|e|+|f|)/2``."""
    d = edge_distance(dm, e, f)
    s = e.length + f.length
    return d + s / 4.0, d + s / 2.0


@dataclass(frozen=True)
class LineGraphBounds:
    lower: float
    upper: float
    alpha: float
    mu_d_line: float
    edge_wiener: float


def uniform_length(g: WeightedGraph, tol: Tolerance = DEFAULT_TOL) -> float:
    """The common edge length of an alpha-uniform graph."""
    if g.m == 0:
        raise NotUniform("graph has no edges")
    alpha = g.edges[0].length
    for i, e in enumerate(g.edges):
        if abs(e.length - alpha) > tol.eps(alpha):
            raise NotUniform(f"edge {i} has length {e.length!r}, expected {alpha!r}")
    return alpha


def line_graph_adjacency(g: WeightedGraph) -> list[list[int]]:
    """Edges of ``g`` as vertices, adjacent when they share an endpoint."""
    at: list[list[int]] = [[] for _ in range(g.n)]
    for i, e in enumerate(g.edges):
        at[e.u].append(i)
        at[e.v].append(i)
    adj: list[set[int]] = [set() for _ in range(g.m)]
    for group in at:
        for i in group:
            adj[i].update(j for j in group if j != i)
    return [sorted(s) for s in adj]


def edge_wiener_index(g: WeightedGraph, alpha: float = 1.0) -> float:
    """Wiener index of the alpha-uniform line graph (BFS from every edge)."""
    adj = line_graph_adjacency(g)
    total = 0
    for s in range(g.m):
        dist = [-1] * g.m
        dist[s] = 0
        q = deque([s])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    q.append(y)
        total += sum(dist[s + 1 :])
    return alpha * total


def line_graph_bounds(g: WeightedGraph, tol: Tolerance = DEFAULT_TOL) -> LineGraphBounds:
    """Sandwich of the continuous mean of an alpha-uniform graph by its line graph's discrete mean."""
    alpha = uniform_length(g, tol)
    m = g.m
    w = edge_wiener_index(g, alpha)
    mu = 2.0 * w / (m * m)
    upper = mu + alpha / (3.0 * m)
    lower = upper - (m - 1) * alpha / (2.0 * m)
    return LineGraphBounds(lower, upper, alpha, mu, w)


# --- arbitrary tree subdivision ---------------------------------------------


def _placements(k: int, rng: random.Random, rule: str) -> list[float]:
    if rule == "uniform":
        return [(j + 1) / (k + 1) for j in range(k)]
    if rule != "random":
        raise InvalidParameter(f"unknown placement rule {rule!r}")
    min_gap = 1e-9
    for _ in range(1000):
        pts = sorted(rng.random() for _ in range(k))
        gaps = [b - a for a, b in zip([0.0] + pts, pts + [1.0])]
        if min(gaps) >= min_gap:
            return pts
    raise InvalidParameter("could not place points with the minimum spacing")


def subdivide_tree_arbitrary(t: WeightedGraph, k: int, placement: str = "random", seed: int = 0) -> WeightedGraph:
    """Insert ``k`` vertices in every edge of a tree.

    ``placement`` is ``"random"`` (i.i.d. uniform, sorted, resampled until
    every piece is at least ``1e-9 |e|``) or ``"uniform"`` (equal spacing).
    """
    if not t.is_tree():
        raise NotATree("subdivide_tree_arbitrary needs a tree")
    if k < 1:
        raise InvalidParameter(f"k must be at least 1, got {k}")
    rng = random.Random(seed)
    edges = []
    nxt = t.n
    for e in t.edges:
        pts = _placements(k, rng, placement)
        chain = [e.u] + list(range(nxt, nxt + k)) + [e.v]
        nxt += k
        cuts = [0.0] + pts + [1.0]
        for a, b, x, y in zip(chain, chain[1:], cuts, cuts[1:]):
            edges.append((a, b, (y - x) * e.length))
    return WeightedGraph(nxt, edges)


@dataclass(frozen=True)
class TreeSubdivisionReport:
    n: int
    k: int
    mu_d_tree: float
    mu_d_subdivided: float
    factor: float
    bound: float
    margin: float


def tree_subdivision_bound_check(
    t: WeightedGraph, k: int, placement: str = "random", seed: int = 0
) -> TreeSubdivisionReport:
    """Check ``mu_d(T^(k)) < n / (n - 2k/(k+1)) * mu_d(T)`` and report the margin."""
    sub = subdivide_tree_arbitrary(t, k, placement, seed)
    n = t.n
    mu_t = discrete_mean(t)
    mu_s = discrete_mean(sub)
    factor = n / (n - 2.0 * k / (k + 1))
    bound = factor * mu_t
    report = TreeSubdivisionReport(n, k, mu_t, mu_s, factor, bound, bound - mu_s)
    if not mu_s < bound:
        raise AssertionError(f"subdivision bound violated: {mu_s!r} >= {bound!r}")
    return report


# --- canonical k-th subdivision ----------------------------------------------


@dataclass
class SubdividedGraph:
    base: WeightedGraph
    k: int
    result: WeightedGraph
    roles: list[str]
    # vertex sequence of each base edge's subdivided path, from its first endpoint
    paths: list[list[int]]

    def vertices(self, role: str) -> list[int]:
        return [x for x, r in enumerate(self.roles) if r == role]


def subdivision_vertex_count(n: int, m: int, k: int) -> int:
    return n + m * (2**k - 1)


def canonical_subdivision(g: WeightedGraph, k: int, cap: int = DEFAULT_CAP) -> SubdividedGraph:
    if k < 1:
        raise InvalidParameter(f"k must be at least 1, got {k}")
    size = subdivision_vertex_count(g.n, g.m, k)
    if size > cap:
        raise CapExceeded(f"G^{k} would have {size} vertices, above the cap of {cap}")
    parts = 2**k
    roles = [BLACK] * g.n
    labels = list(g.labels)
    taken = set(labels)
    edges = []
    paths = []
    for i, e in enumerate(g.edges):
        inner = list(range(len(roles), len(roles) + parts - 1))
        for j in range(1, parts):
            roles.append(BLUE if j == parts // 2 else RED)
            lab = f"{g.labels[e.u]}~{g.labels[e.v]}#{i}.{j}"
            while lab in taken:
                lab = "_" + lab
            taken.add(lab)
            labels.append(lab)
        path = [e.u] + inner + [e.v]
        step = e.length / parts
        edges += [(a, b, step) for a, b in zip(path, path[1:])]
        paths.append(path)
    result = WeightedGraph(len(roles), edges, labels, validate=False)
    return SubdividedGraph(g, k, result, roles, paths)


def _sparse_distances(g: WeightedGraph, sources=None) -> np.ndarray:
    # parallel edges must collapse to their minimum, not their sum
    best: dict[tuple[int, int], float] = {}
    for u, v, w in g.edges:
        key = (u, v) if u < v else (v, u)
        if key not in best or w < best[key]:
            best[key] = w
    rows = [a for a, _ in best] + [b for _, b in best]
    cols = [b for _, b in best] + [a for a, _ in best]
    vals = list(best.values()) * 2
    mat = coo_matrix((vals, (rows, cols)), shape=(g.n, g.n)).tocsr()
    return sparse_dijkstra(mat, directed=False, indices=sources)


def fast_wiener_index(g: WeightedGraph) -> float:
    """Wiener index for large graphs: O(n) on trees, compiled Dijkstra otherwise."""
    if g.n <= 1:
        return 0.0
    if g.is_tree():
        return _tree_wiener(g)
    total = []
    block = max(1, 2_000_000 // g.n)
    for start in range(0, g.n, block):
        idx = np.arange(start, min(g.n, start + block))
        d = _sparse_distances(g, idx)
        for r, s in enumerate(idx):
            total.append(math.fsum(d[r, s + 1 :].tolist()))
    return math.fsum(total)


def midpoint_sums(g: WeightedGraph) -> tuple[float, float, float, np.ndarray]:
    """``W(V^1)``, ``W(B)``, ``W(B; V)`` on the midpoint graph, plus its distance matrix."""
    sub = canonical_subdivision(g, 1)
    d = _sparse_distances(sub.result)
    n, m = g.n, g.m
    iu = np.triu_indices(n + m, 1)
    w_all = math.fsum(d[iu].tolist())
    blue = d[n:, n:]
    w_blue = math.fsum(blue[np.triu_indices(m, 1)].tolist())
    w_blue_black = math.fsum(d[n:, :n].ravel().tolist())
    return w_all, w_blue, w_blue_black, d


@dataclass(frozen=True)
class SandwichBounds:
    k: int
    omega: float
    omega_lower: float
    lower: float
    upper: float
    rho: float
    w_v1: float
    w_blue: float
    w_blue_black: float
    vertex_count: int
    mu_d_actual: float | None = None


def omega_value(w_v1: float, w_blue: float, w_blue_black: float, total: float, k: int) -> float:
    p = 2.0**k
    return w_v1 + (p - 2) * (p * w_blue + w_blue_black) + total * (2.0 ** (2 * k - 1) / 3 - p / 2 + 1.0 / 3)


def omega_sandwich(
    g: WeightedGraph, k: int, *, materialize: bool = False, cap: int = DEFAULT_CAP
) -> SandwichBounds:
    """Closed-form bounds on ``mu_d(G^k)`` from Wiener sums of the midpoint graph.

    Nothing of size ``G^k`` is built unless ``materialize`` is set, in which
    case the actual discrete mean is filled in (subject to ``cap``).
    """
    if g.m < 2:
        raise InvalidParameter(f"need at least 2 edges, got {g.m}")
    if k < 2:
        raise InvalidParameter(f"k must be at least 2, got {k}")
    n, m = g.n, g.m
    w_v1, w_blue, w_bv, _ = midpoint_sums(g)
    total = total_length(g)
    rho = max(g.lengths())
    omega = omega_value(w_v1, w_blue, w_bv, total, k)
    slack = rho * (3 * math.comb(m, 2) + m * (n - 2)) * (2.0 ** (k - 2) - 0.5)
    size = subdivision_vertex_count(n, m, k)
    actual = None
    if materialize:
        sub = canonical_subdivision(g, k, cap)
        actual = 2.0 * fast_wiener_index(sub.result) / (size * size)
    return SandwichBounds(
        k=k,
        omega=omega,
        omega_lower=omega - slack,
        lower=2.0 * (omega - slack) / (size * size),
        upper=2.0 * omega / (size * size),
        rho=rho,
        w_v1=w_v1,
        w_blue=w_blue,
        w_blue_black=w_bv,
        vertex_count=size,
        mu_d_actual=actual,
    )


def materialized_mean(g: WeightedGraph, k: int, cap: int = DEFAULT_CAP) -> float:
    """``mu_d(G^k)`` computed on the materialized subdivision."""
    sub = canonical_subdivision(g, k, cap)
    size = sub.result.n
    return 2.0 * fast_wiener_index(sub.result) / (size * size)


def wiener_decomposition(sub: SubdividedGraph) -> dict[str, float]:
    """Brute-force the four Wiener sums that add up to ``W(G^k)`` for ``k >= 2``.

    Keys: ``V1`` (black and blue), ``R`` (red pairs), ``R;V`` (red-black),
    ``R;B`` (red-blue), and ``total`` for the direct Wiener index.
    """
    d = _sparse_distances(sub.result)
    roles = np.array(sub.roles)
    black = np.flatnonzero(roles == BLACK)
    blue = np.flatnonzero(roles == BLUE)
    red = np.flatnonzero(roles == RED)
    v1 = np.concatenate([black, blue])

    def within(idx):
        block = d[np.ix_(idx, idx)]
        return math.fsum(block[np.triu_indices(len(idx), 1)].tolist())

    def across(a, b):
        return math.fsum(d[np.ix_(a, b)].ravel().tolist())

    out = {
        "V1": within(v1),
        "R": within(red),
        "R;V": across(red, black),
        "R;B": across(red, blue),
    }
    out["total"] = math.fsum(d[np.triu_indices(sub.result.n, 1)].tolist())
    return out


@dataclass(frozen=True)
class SubdivisionLimits:
    mu_d_blue: float
    upper_limit: float
    tree_exact: float | None
    uniform_upper: float | None


def subdivision_limits(g: WeightedGraph, tol: Tolerance = DEFAULT_TOL) -> SubdivisionLimits:
    """Limits of ``mu_d(G^k)`` as ``k`` grows: an upper bound, exact for trees."""
    if g.m < 2:
        raise InvalidParameter(f"need at least 2 edges, got {g.m}")
    m = g.m
    _, w_blue, _, _ = midpoint_sums(g)
    mu_blue = 2.0 * w_blue / (m * m)
    total = total_length(g)
    upper = mu_blue + total / (3.0 * m * m)
    tree_exact = None
    if g.is_tree() and g.n >= 3:
        tree_exact = mu_blue + total / (3.0 * (g.n - 1) ** 2)
    uniform = None
    try:
        alpha = uniform_length(g, tol)
        uniform = mu_blue + alpha / (3.0 * m)
    except NotUniform:
        pass
    return SubdivisionLimits(mu_blue, upper, tree_exact, uniform)


def discrete_mean_sequence(g: WeightedGraph, ks, cap: int = DEFAULT_CAP) -> list[float]:
    """``mu_d(G^k)`` for each ``k`` in ``ks`` (materialized)."""
    return [materialized_mean(g, k, cap) for k in ks]


__all__ = [
    "BLACK",
    "BLUE",
    "RED",
    "LineGraphBounds",
    "SandwichBounds",
    "SubdividedGraph",
    "SubdivisionLimits",
    "TreeSubdivisionReport",
    "canonical_subdivision",
    "discrete_mean_sequence",
    "edge_distance",
    "edge_wiener_index",
    "fast_wiener_index",
    "line_graph_bounds",
    "materialized_mean",
    "midpoint_sums",
    "omega_sandwich",
    "pair_bounds",
    "subdivide_tree_arbitrary",
    "subdivision_limits",
    "subdivision_vertex_count",
    "tree_subdivision_bound_check",
    "uniform_length",
    "wiener_decomposition",
    "wiener_index",
]
