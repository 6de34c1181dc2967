"""Edge-pair mean distances by shortest-path-tree case analysis.

A pair of distinct edges is either *linear* (every shortest path between
the two edges leaves one of them through the same endpoint) or a *cycle*
pair.  A cycle pair is cut at the break points of the second edge's
endpoints into at most four linear pieces and one rectangular block.

Positions on the first edge ``uv`` are measured from ``u``; positions on
the second edge ``ab`` from ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .graph import Edge, WeightedGraph
from .shortest_paths import DistanceMatrix, edge_in_tree, same_component_property
from .tolerance import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class SameEdge:
    length: float


@dataclass(frozen=True)
class Linear:
    """Every path between the edges crosses ``crossed`` and leaves it at ``via``."""

    via_vertex: int
    # 0: the crossed edge is the first (lower-index) edge of the pair, 1: the second
    orientation: int


@dataclass(frozen=True)
class Rectangular:
    theta: float
    lam: float

    @property
    def mean(self) -> float:
        return rectangular_mean(self.theta, self.lam)


@dataclass(frozen=True)
class Cycle:
    """Break points of ``ab``'s endpoints on ``uv`` and their mirrors on ``ab``.

    ``near`` is the endpoint of ``ab`` whose break point is closer to ``u``;
    the ``_a`` fields refer to it and the ``_b`` fields to the other
    endpoint.  Break points are parameters on ``uv`` measured from ``u``;
    mirror points are parameters on ``ab`` measured from ``near``.
    """

    near: int
    break_point_a: float
    break_point_b: float
    mirror_a: float
    mirror_b: float
    theta: float

    def rectangular_block(self, uv_length: float) -> Rectangular | None:
        lam = (self.break_point_b - self.break_point_a) * uv_length
        return Rectangular(self.theta, lam) if lam > 0 else None


EdgePairCase = Union[SameEdge, Linear, Cycle, Rectangular]


def rectangular_mean(theta: float, lam: float) -> float:
    """Two equal segments of length ``lam`` closed into a cycle by two paths of length ``theta``."""
    return theta + 2.0 * lam / 3.0


def linear_mean(crossed_length: float, junction_mean: float) -> float:
    """Mean when every path leaves a segment through one end: half the segment plus the rest."""
    return crossed_length / 2.0 + junction_mean


def point_segment_mean(da: float, db: float, length: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Mean distance from a point to a segment given its distances to the two ends.

    If one end is reached through the other the profile is a single ramp;
    otherwise it rises from both ends to the break point and the mean is the
    length-weighted average of the two ramps.
    """
    if abs(db - da) >= length - tol.eps(max(length, da, db)):
        return min(da, db) + length / 2.0
    near_a = (length + db - da) / 2.0
    near_b = (length + da - db) / 2.0
    return ((da + near_a / 2.0) * near_a + (db + near_b / 2.0) * near_b) / length


def vertex_edge_mean(dm: DistanceMatrix, v: int, e: Edge, tol: Tolerance = DEFAULT_TOL) -> float:
    """Mean distance from vertex ``v`` to the points of edge ``e``."""
    r = dm.rows[v]
    da, db = r[e.u], r[e.v]
    if edge_in_tree(dm, v, e, tol):
        return min(da, db) + e.length / 2.0
    return point_segment_mean(da, db, e.length, tol)


def _canonical(g: WeightedGraph, i: int, j: int) -> tuple[Edge, Edge]:
    if i > j:
        i, j = j, i
    return g.edges[i], g.edges[j]


def _find_linear(g, dm, e: Edge, f: Edge, tol: Tolerance) -> list[Linear]:
    hits = []
    for orientation, (crossed, other) in enumerate(((e, f), (f, e))):
        if other.u in (crossed.u, crossed.v) or other.v in (crossed.u, crossed.v):
            continue
        for through in (crossed.u, crossed.v):
            if same_component_property(dm, g, other.u, other.v, crossed, through, tol):
                hits.append(Linear(through, orientation))
    return hits


def _cycle_geometry(dm: DistanceMatrix, e: Edge, f: Edge, tol: Tolerance) -> Cycle:
    ru, rv = dm.rows[e.u], dm.rows[e.v]
    lu, la = e.length, f.length
    a, b = f.u, f.v
    t_a = min(lu, max(0.0, (lu + rv[a] - ru[a]) / 2.0))
    t_b = min(lu, max(0.0, (lu + rv[b] - ru[b]) / 2.0))
    if t_a > t_b:
        a, b, t_a, t_b = b, a, t_b, t_a
    # mirror of the near break point: antipode on the cycle uv + (v..a) + ab + (b..u)
    s_a = t_a + (la + ru[b] - lu - rv[a]) / 2.0
    s_a = min(la, max(0.0, s_a))
    s_b = min(la, s_a + (t_b - t_a))
    # both connecting paths of the rectangular block; equal in exact arithmetic
    theta_1 = lu - t_b + rv[a] + s_a
    theta_2 = t_a + ru[b] + la - s_b
    assert abs(theta_1 - theta_2) <= 1e3 * tol.eps(max(theta_1, theta_2, lu, la)), (theta_1, theta_2)
    theta = 0.5 * (theta_1 + theta_2)
    return Cycle(a, t_a / lu, t_b / lu, s_a / la, s_b / la, theta)


def classify_pair(
    g: WeightedGraph, dm: DistanceMatrix, i: int, j: int, tol: Tolerance = DEFAULT_TOL
) -> EdgePairCase:
    """Classify the distinct edges ``i`` and ``j`` as a linear or a cycle pair."""
    if i == j:
        raise ValueError("classify_pair needs two distinct edge indices")
    e, f = _canonical(g, i, j)
    hits = _find_linear(g, dm, e, f, tol)
    if hits:
        return hits[0]
    return _cycle_geometry(dm, e, f, tol)


def _linear_value(dm, e: Edge, f: Edge, case: Linear, tol: Tolerance) -> float:
    crossed, other = (e, f) if case.orientation == 0 else (f, e)
    return linear_mean(crossed.length, vertex_edge_mean(dm, case.via_vertex, other, tol))


def _cycle_value(dm: DistanceMatrix, e: Edge, f: Edge, c: Cycle, tol: Tolerance) -> float:
    lu, la = e.length, f.length
    a = c.near
    b = f.v if a == f.u else f.u
    ru, rv = dm.rows[e.u], dm.rows[e.v]
    t_a, t_b = c.break_point_a * lu, c.break_point_b * lu
    mu_u = vertex_edge_mean(dm, e.u, f, tol)
    mu_v = vertex_edge_mean(dm, e.v, f, tol)

    if t_b - t_a <= tol.eps(lu):
        # break points coincide: two linear pieces, no rectangular block
        t = 0.5 * (t_a + t_b)
        total = 0.0
        if t > 0:
            total += t * linear_mean(t, mu_u)
        if lu - t > 0:
            total += (lu - t) * linear_mean(lu - t, mu_v)
        return total / lu

    lam = t_b - t_a
    s_a, s_b = c.mirror_a * la, c.mirror_b * la
    # segment M = [t_a, t_b] of uv against the three pieces of ab
    middle = 0.0
    if s_a > 0:
        # points of M reach [a, s_a] through v and then a
        mu_a_m = point_segment_mean(lu - t_a + rv[a], lu - t_b + rv[a], lam, tol)
        middle += s_a * linear_mean(s_a, mu_a_m)
    middle += lam * rectangular_mean(c.theta, lam)
    if la - s_b > 0:
        # points of M reach [s_b, b] through u and then b
        mu_b_m = point_segment_mean(t_a + ru[b], t_b + ru[b], lam, tol)
        middle += (la - s_b) * linear_mean(la - s_b, mu_b_m)
    middle /= la

    total = lam * middle
    if t_a > 0:
        total += t_a * linear_mean(t_a, mu_u)
    if lu - t_b > 0:
        total += (lu - t_b) * linear_mean(lu - t_b, mu_v)
    return total / lu


def pair_mean(g: WeightedGraph, dm: DistanceMatrix, i: int, j: int, tol: Tolerance = DEFAULT_TOL) -> float:
    """Mean distance between the points of edges ``i`` and ``j`` (``i == j`` allowed)."""
    if i == j:
        return g.edges[i].length / 3.0
    e, f = _canonical(g, i, j)
    hits = _find_linear(g, dm, e, f, tol)
    if hits:
        value = _linear_value(dm, e, f, hits[0], tol)
        if len(hits) > 1:
            for other in hits[1:]:
                alt = _linear_value(dm, e, f, other, tol)
                assert abs(alt - value) <= 1e3 * tol.eps(value), (hits, value, alt)
        return value
    return _cycle_value(dm, e, f, _cycle_geometry(dm, e, f, tol), tol)


def case_value(g: WeightedGraph, dm: DistanceMatrix, i: int, j: int, case: EdgePairCase,
               tol: Tolerance = DEFAULT_TOL) -> float:
    """Evaluate an already computed classification (used by reports)."""
    if isinstance(case, SameEdge):
        return case.length / 3.0
    if isinstance(case, Rectangular):
        return case.mean
    e, f = _canonical(g, i, j)
    if isinstance(case, Linear):
        return _linear_value(dm, e, f, case, tol)
    return _cycle_value(dm, e, f, case, tol)
