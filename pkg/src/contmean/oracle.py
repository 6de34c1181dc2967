"""Brute-force reference values by midpoint quadrature.

The integrand is the distance between a point at arclength ``x`` on ``e``
and one at ``y`` on ``f``: the smallest of the four routes through a pair
of endpoints, ``x_off + d(P, Q) + y_off``.  Nothing from the exact
backends is used, only the distance matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyEdgeSet, InvalidParameter
from .graph import Edge, WeightedGraph
from .shortest_paths import DistanceMatrix


@dataclass(frozen=True)
class OracleConfig:
    N: int = 512
    scheme: str = "midpoint"

    def __post_init__(self):
        if self.N < 2:
            raise InvalidParameter(f"grid resolution must be at least 2, got {self.N}")
        if self.scheme != "midpoint":
            raise InvalidParameter(f"unknown quadrature scheme {self.scheme!r}")


def _nodes(length: float, N: int) -> np.ndarray:
    return (np.arange(N) + 0.5) * (length / N)


def oracle_pair_mean(
    dm: DistanceMatrix, e: Edge, f: Edge, cfg: OracleConfig = OracleConfig(), same_edge: bool = False
) -> float:
    """Grid average of ``d(p, q)`` for ``p`` on ``e`` and ``q`` on ``f``.

    ``same_edge`` means ``e`` and ``f`` are one edge (parallel edges are
    distinct edges and must not set it); the integrand is then ``|x - y|``.
    """
    x = _nodes(e.length, cfg.N)[:, None]
    if same_edge:
        return float(np.abs(x - x.T).mean())
    y = _nodes(f.length, cfg.N)[None, :]
    to_u, to_v = x, e.length - x
    to_a, to_b = y, f.length - y
    d = dm.array
    z = np.minimum(
        np.minimum(to_u + d[e.u, f.u] + to_a, to_u + d[e.u, f.v] + to_b),
        np.minimum(to_v + d[e.v, f.u] + to_a, to_v + d[e.v, f.v] + to_b),
    )
    # pairwise summation inside numpy keeps the reduction deterministic
    return float(z.mean())


def oracle_graph_mean(g: WeightedGraph, dm: DistanceMatrix, cfg: OracleConfig = OracleConfig()) -> float:
    """Continuous mean with every edge-pair mean taken from the grid oracle."""
    if g.m == 0:
        raise EmptyEdgeSet("oracle needs at least one edge")
    lengths = g.lengths()
    terms = []
    for i, e in enumerate(g.edges):
        terms.append(oracle_pair_mean(dm, e, e, cfg, same_edge=True) * lengths[i] ** 2)
        for j in range(i + 1, g.m):
            terms.append(2.0 * oracle_pair_mean(dm, e, g.edges[j], cfg) * lengths[i] * lengths[j])
    total = math.fsum(lengths)
    return math.fsum(terms) / (total * total)


def convergence_errors(target: float, evaluate, grids=(64, 128, 256, 512)) -> list[tuple[int, float]]:
    """``[(N, |evaluate(N) - target|)]`` for each grid size."""
    return [(N, abs(evaluate(OracleConfig(N)) - target)) for N in grids]
