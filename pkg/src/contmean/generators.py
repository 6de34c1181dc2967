"""Seeded instance factory for the graph classes used in tests and benchmarks."""

from __future__ import annotations

import random
from typing import Sequence

from .errors import InvalidParameter
from .graph import WeightedGraph, metric_violations
from .shortest_paths import all_pairs_distances

KINDS = ("path", "cycle", "star", "complete", "random_tree", "random_cactus", "random_connected")


class _Weights:
    def __init__(self, alpha, lo, hi, lengths, rng):
        given = sum(x is not None for x in (alpha, lengths)) + (lo is not None or hi is not None)
        if given > 1:
            raise InvalidParameter("give exactly one of alpha, lo/hi, lengths")
        if lo is not None or hi is not None:
            if lo is None or hi is None or not (0 < lo <= hi):
                raise InvalidParameter(f"need 0 < lo <= hi, got lo={lo!r} hi={hi!r}")
        elif lengths is None:
            alpha = 1.0 if alpha is None else alpha
            if not alpha > 0:
                raise InvalidParameter(f"alpha must be positive, got {alpha!r}")
        if lengths is not None and any(not w > 0 for w in lengths):
            raise InvalidParameter("explicit lengths must be positive")
        self.alpha, self.lo, self.hi = alpha, lo, hi
        self.lengths = list(lengths) if lengths is not None else None
        self.rng = rng
        self._next = 0

    @property
    def uniform(self) -> bool:
        return self.lengths is None and self.lo is None

    def draw(self) -> float:
        if self.lengths is not None:
            if self._next >= len(self.lengths):
                raise InvalidParameter(f"only {len(self.lengths)} explicit lengths given")
            w = self.lengths[self._next]
            self._next += 1
            return float(w)
        if self.lo is not None:
            return self.rng.uniform(self.lo, self.hi)
        return float(self.alpha)

    def finish(self) -> None:
        if self.lengths is not None and self._next != len(self.lengths):
            raise InvalidParameter(f"expected {self._next} explicit lengths, got {len(self.lengths)}")


def _cycle_lengths(k: int, weights: _Weights) -> list[float]:
    # a cycle edge longer than the rest of the cycle would be shortcut
    for _ in range(1000):
        ws = [weights.draw() for _ in range(k)]
        if max(ws) * 2 <= sum(ws) or weights.lengths is not None:
            return ws
    raise InvalidParameter("could not draw metric cycle lengths; narrow the weight range")


def _random_tree_edges(n, rng, weights):
    return [(rng.randrange(i), i, weights.draw()) for i in range(1, n)]


def _clamp_to_metric(n: int, edges: list[tuple[int, int, float]]) -> list[tuple[int, int, float]]:
    # shortening an edge to the distance between its endpoints never changes any distance
    g = WeightedGraph(n, edges)
    if not metric_violations(g):
        return edges
    dm = all_pairs_distances(g)
    return [(u, v, min(w, dm(u, v))) for u, v, w in edges]


def generate(
    kind: str,
    n: int,
    *,
    alpha: float | None = None,
    lo: float | None = None,
    hi: float | None = None,
    lengths: Sequence[float] | None = None,
    seed: int = 0,
    extra_edges: int | None = None,
    parallel: int = 0,
) -> WeightedGraph:
    """Build a validated instance of ``kind`` on ``n`` vertices.

    Weights are uniform ``alpha`` (default 1), i.i.d. in ``[lo, hi]``, or the
    explicit ``lengths`` in edge order.  Random lengths are resampled (cycles,
    cactus cycles, complete graphs) or clamped (general graphs) so that no
    edge is shortcut by another path.  ``parallel`` duplicates that many
    random edges with equal length, producing a multigraph.
    """
    if kind not in KINDS:
        raise InvalidParameter(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if n < 2 or (kind == "cycle" and n < 3):
        raise InvalidParameter(f"n={n} too small for {kind}")
    rng = random.Random(seed)
    weights = _Weights(alpha, lo, hi, lengths, rng)
    if kind == "path":
        edges = [(i, i + 1, weights.draw()) for i in range(n - 1)]
    elif kind == "star":
        edges = [(0, i, weights.draw()) for i in range(1, n)]
    elif kind == "cycle":
        ws = _cycle_lengths(n, weights)
        edges = [(i, (i + 1) % n, ws[i]) for i in range(n)]
    elif kind == "complete":
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        edges = [(i, j, weights.draw()) for i, j in pairs]
        if not weights.uniform and weights.lengths is None:
            for _ in range(1000):
                bad = metric_violations(WeightedGraph(n, edges))
                if not bad:
                    break
                for k in bad:
                    i, j, _ = edges[k]
                    edges[k] = (i, j, weights.draw())
            edges = _clamp_to_metric(n, edges)
    elif kind == "random_tree":
        edges = _random_tree_edges(n, rng, weights)
    elif kind == "random_cactus":
        edges = []
        count = 1
        while count < n:
            at = rng.randrange(count)
            room = n - count
            if room >= 2 and rng.random() < 0.5:
                k = rng.randint(3, min(6, room + 1))
                ring = [at] + list(range(count, count + k - 1))
                ws = _cycle_lengths(k, weights)
                edges += [(ring[t], ring[(t + 1) % k], ws[t]) for t in range(k)]
                count += k - 1
            else:
                edges.append((at, count, weights.draw()))
                count += 1
    else:  # random_connected
        edges = _random_tree_edges(n, rng, weights)
        present = {(min(u, v), max(u, v)) for u, v, _ in edges}
        free = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in present]
        if extra_edges is None:
            extra_edges = rng.randint(0, min(len(free), 2 * n))
        if extra_edges > len(free):
            raise InvalidParameter(f"at most {len(free)} extra edges fit on {n} vertices")
        for i, j in rng.sample(free, extra_edges):
            edges.append((i, j, weights.draw()))
        edges = _clamp_to_metric(n, edges)
    weights.finish()
    if parallel:
        if parallel < 0:
            raise InvalidParameter("parallel must be non-negative")
        for _ in range(parallel):
            u, v, w = edges[rng.randrange(len(edges))]
            edges.append((u, v, w))
    return WeightedGraph(n, edges)
