"""All-pairs distances plus the continuous shortest-path tree built on top of them."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Edge, WeightedGraph
from .tolerance import DEFAULT_TOL, Tolerance


def dijkstra(g: WeightedGraph, source: int) -> tuple[list[float], list[int], list[int]]:
    """Single-source shortest paths with a binary heap.

    Returns ``(dist, parent, parent_edge)``; the root and unreachable
    vertices get parent ``-1``.  Among equally short paths the parent with
    the lowest vertex index wins, which makes the tree deterministic.
    """
    n = g.n
    adj = g.adjacency
    dist = [math.inf] * n
    parent = [-1] * n
    pedge = [-1] * n
    dist[source] = 0.0
    done = [False] * n
    heap = [(0.0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, x = pop(heap)
        if done[x]:
            continue
        done[x] = True
        for y, i, w in adj[x]:
            if done[y]:
                continue
            nd = d + w
            dy = dist[y]
            if nd < dy:
                dist[y] = nd
                parent[y] = x
                pedge[y] = i
                push(heap, (nd, y))
            elif nd == dy and (x < parent[y] or (x == parent[y] and i < pedge[y])):
                parent[y] = x
                pedge[y] = i
    return dist, parent, pedge


class DistanceMatrix:
    """Symmetric all-pairs vertex distance matrix.

    ``dm.array`` is a read-only ``numpy`` array; ``dm.rows`` is the same data
    as nested Python lists, which is much faster for the scalar pair loop.
    """

    __slots__ = ("array", "_rows")

    def __init__(self, array: np.ndarray):
        a = np.array(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("distance matrix must be square")
        a.setflags(write=False)
        self.array = a
        self._rows = None

    @property
    def n(self) -> int:
        return self.array.shape[0]

    @property
    def rows(self) -> list[list[float]]:
        if self._rows is None:
            self._rows = self.array.tolist()
        return self._rows

    def __call__(self, u: int, v: int) -> float:
        return self.rows[u][v]

    def vertex_edge_distance(self, v: int, e: Edge) -> float:
        """d(v, e): distance from a vertex to the closest point of an edge."""
        r = self.rows[v]
        return min(r[e.u], r[e.v])

    def edge_distance(self, e: Edge, f: Edge) -> float:
        """d(e, f): minimum over the four endpoint pairs."""
        ru, rv = self.rows[e.u], self.rows[e.v]
        return min(ru[f.u], ru[f.v], rv[f.u], rv[f.v])

    def diameter(self) -> float:
        return float(self.array.max()) if self.array.size else 0.0

    def check_invariants(self, g: WeightedGraph | None = None, tol: Tolerance = DEFAULT_TOL) -> None:
        """Assert symmetry, zero diagonal, triangle inequality and edge bounds."""
        a = self.array
        assert np.array_equal(a, a.T), "distance matrix is not symmetric"
        assert not np.any(np.diag(a)), "distance matrix has a non-zero diagonal"
        assert np.all(a >= 0), "negative distance"
        scale = max(self.diameter(), 1.0)
        slack = tol.eps(scale)
        for v in range(self.n):
            # d(u, w) <= d(u, v) + d(v, w) for all u, w
            assert np.all(a <= a[:, v : v + 1] + a[v : v + 1, :] + slack), f"triangle inequality fails via {v}"
        if g is not None:
            for e in g.edges:
                assert a[e.u, e.v] <= e.length + tol.eps(e.length), "edge shorter than its distance"


def all_pairs_distances(g: WeightedGraph) -> DistanceMatrix:
    """Exact vertex-to-vertex distances by repeated Dijkstra.

    The two directed computations of each entry can differ in the last bit,
    so the matrix is symmetrized by taking the smaller (both are path
    lengths).
    """
    n = g.n
    a = np.empty((n, n), dtype=float)
    for s in range(n):
        a[s] = dijkstra(g, s)[0]
    np.minimum(a, a.T, out=a)
    np.fill_diagonal(a, 0.0)
    return DistanceMatrix(a)


def break_point(dm: DistanceMatrix, v: int, e: Edge) -> float:
    """Parameter of the point of ``e`` reached from ``v`` equally via both ends.

    ``(|ab| + d(v,b) - d(v,a)) / (2|ab|)`` clamped to ``[0, 1]``; the clamp
    only acts on floating-point noise under the metric-edge assumption.
    """
    r = dm.rows[v]
    lam = (e.length + r[e.v] - r[e.u]) / (2.0 * e.length)
    return min(1.0, max(0.0, lam))


def edge_in_tree(dm: DistanceMatrix, v: int, e: Edge, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``e`` can be a tree edge of a shortest-path tree rooted at ``v``.

    ``e = ab`` is out of every such tree iff ``|d(v,b) - d(v,a)| < |ab|``.
    Boundary cases (equality within tolerance) count as tree edges.
    """
    r = dm.rows[v]
    da, db = r[e.u], r[e.v]
    return abs(db - da) >= e.length - tol.eps(max(e.length, da, db))


def same_component_property(
    dm: DistanceMatrix,
    g: WeightedGraph,
    u: int,
    v: int,
    e: Edge,
    through: int,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """Both ``u`` and ``v`` are reached from edge ``e = ab`` through endpoint ``through``.

    With ``through = b`` this tests ``d(a,u) = |ab| + d(b,u)`` and
    ``d(a,v) = |ab| + d(b,v)``.
    """
    if through == e.v:
        a, b = e.u, e.v
    elif through == e.u:
        a, b = e.v, e.u
    else:
        raise ValueError("`through` must be an endpoint of e")
    ra, rb = dm.rows[a], dm.rows[b]
    w = e.length
    for x in (u, v):
        target = w + rb[x]
        if abs(ra[x] - target) > tol.eps(target):
            return False
    return True


@dataclass(frozen=True)
class ContinuousSPT:
    root: int
    # vertex -> (parent vertex, tree edge index); the root is absent
    parent: dict[int, tuple[int, int]]
    # non-tree edge index -> lambda, measured from edge.u towards edge.v
    break_points: dict[int, float] = field(default_factory=dict)

    def tree_edges(self) -> set[int]:
        return {i for _, i in self.parent.values()}

    def break_point_position(self, g: WeightedGraph, i: int) -> float:
        return self.break_points[i] * g.edges[i].length


def continuous_spt(g: WeightedGraph, dm: DistanceMatrix, root: int) -> ContinuousSPT:
    """Shortest-path tree from ``root`` plus a break point on every non-tree edge."""
    _, parent, pedge = dijkstra(g, root)
    par = {x: (parent[x], pedge[x]) for x in range(g.n) if x != root}
    in_tree = set(pedge) - {-1}
    bps = {i: break_point(dm, root, e) for i, e in enumerate(g.edges) if i not in in_tree}
    return ContinuousSPT(root, par, bps)
