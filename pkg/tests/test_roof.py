import random

import pytest

from contmean.errors import InvalidParameter
from contmean.generators import generate
from contmean.graph import parse_graph
from contmean.roof import (
    build_roof,
    clip_halfplane,
    corner_planes,
    polygon_area_centroid,
    roof_mean,
    roof_pair_mean,
    same_edge_mean,
)
from contmean.shortest_paths import all_pairs_distances
from conftest import random_graph


def _planes(roof):
    return sorted((p.cx, p.cy, p.c0) for p in roof.planes)


def test_incident_triangle_edges_two_planes():
    k3 = generate("complete", 3)
    dm = all_pairs_distances(k3)
    e, f = k3.edges[0], k3.edges[1]  # 0-1 and 0-2 share vertex 0
    roof = build_roof(dm, e, f)
    # through the shared vertex: x + y; through the far ends: (1-x) + 1 + (1-y)
    assert _planes(roof) == [(-1.0, -1.0, 3.0), (1.0, 1.0, 0.0)]
    assert roof_mean(roof) == pytest.approx(23 / 24, rel=1e-12)


def test_four_cycle_opposite_edges_four_planes():
    c4 = generate("cycle", 4)
    dm = all_pairs_distances(c4)
    e, f = c4.edges[0], c4.edges[2]
    assert sorted(p.weight for p in corner_planes(dm, e, f)) == [1.0, 1.0, 2.0, 2.0]
    roof = build_roof(dm, e, f)
    assert roof_mean(roof) == pytest.approx(5 / 3, rel=1e-12)


def test_k4_non_incident_edges():
    k4 = generate("complete", 4)
    dm = all_pairs_distances(k4)
    e, f = k4.edges[0], k4.edges[5]  # 0-1 and 2-3
    roof = build_roof(dm, e, f)
    assert len(roof.planes) == 4 and all(p.weight == 1.0 for p in roof.planes)
    assert roof_mean(roof) == pytest.approx(1.5, rel=1e-12)


def test_single_dominant_plane():
    # unit edges joined only through u - u' by a path of length theta
    g = parse_graph("v u 1\nu x 0.75\nx y 0.75\ny w 1")
    dm = all_pairs_distances(g)
    e, f = g.edges[0], g.edges[3]
    roof = build_roof(dm, e, f)
    assert len(roof.regions) == 1
    assert roof_mean(roof) == pytest.approx(1.5 + 1.0, rel=1e-12)


def test_same_edge_mean():
    assert same_edge_mean(1.0) == pytest.approx(1 / 3)
    assert same_edge_mean(3.0) == 1.0
    assert same_edge_mean(0.5) == pytest.approx(1 / 6)
    with pytest.raises(InvalidParameter):
        same_edge_mean(0.0)


def test_clip_and_area_helpers():
    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    tri = clip_halfplane(square, 1.0, 1.0, -1.0)  # x + y <= 1
    area, cx, cy = polygon_area_centroid(tri)
    assert area == pytest.approx(0.5)
    assert (cx, cy) == pytest.approx((1 / 3, 1 / 3))
    assert clip_halfplane(square, 1.0, 0.0, 5.0) == []


def _roofs(graphs, extra_seeds=40):
    gs = list(graphs.values()) + [random_graph(s, n_max=9, parallel=s % 2 == 0) for s in range(extra_seeds)]
    for g in gs:
        dm = all_pairs_distances(g)
        for i in range(g.m):
            for j in range(i + 1, g.m):
                yield dm, g.edges[i], g.edges[j], build_roof(dm, g.edges[i], g.edges[j])


def test_regions_tile_rectangle(graphs):
    for _, e, f, roof in _roofs(graphs):
        total = sum(r.area for r in roof.regions)
        assert total == pytest.approx(e.length * f.length, rel=1e-9)


def test_envelope_minimality(graphs):
    rng = random.Random(5)
    for _, e, f, roof in _roofs(graphs, extra_seeds=10):
        scale = max(p.weight for p in roof.planes) + e.length + f.length
        for reg in roof.regions:
            pts = reg.polygon
            for _ in range(100):
                # random convex combination of the region's corners
                ws = [rng.random() for _ in pts]
                s = sum(ws)
                x = sum(w * p[0] for w, p in zip(ws, pts)) / s
                y = sum(w * p[1] for w, p in zip(ws, pts)) / s
                own = roof.planes[reg.plane](x, y)
                assert all(own <= q(x, y) + 1e-9 * scale for q in roof.planes)


def test_prism_rule_agrees_with_centroid(graphs):
    for _, e, f, roof in _roofs(graphs, extra_seeds=10):
        assert roof_mean(roof, "prism") == pytest.approx(roof_mean(roof), rel=1e-12)


def test_dropped_planes_never_minimal(graphs):
    # every corner plane that was pruned is dominated at all four corners
    for dm, e, f, roof in _roofs(graphs, extra_seeds=10):
        kept = {(p.cx, p.cy, p.c0) for p in roof.planes}
        corners = [(0, 0), (e.length, 0), (0, f.length), (e.length, f.length)]
        env = [min(p(x, y) for p in roof.planes) for x, y in corners]
        for p in corner_planes(dm, e, f):
            if (p.cx, p.cy, p.c0) not in kept:
                assert all(p(x, y) >= z - 1e-9 for (x, y), z in zip(corners, env))


def test_unknown_method():
    k3 = generate("complete", 3)
    dm = all_pairs_distances(k3)
    with pytest.raises(ValueError):
        roof_mean(build_roof(dm, k3.edges[0], k3.edges[1]), "simpson")


def test_roof_pair_mean_is_symmetric(graphs):
    g = graphs["k4_random"]
    dm = all_pairs_distances(g)
    for i in range(g.m):
        for j in range(i + 1, g.m):
            a = roof_pair_mean(dm, g.edges[i], g.edges[j])
            b = roof_pair_mean(dm, g.edges[j], g.edges[i])
            assert a == pytest.approx(b, rel=1e-12)
