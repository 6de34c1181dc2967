import json

import pytest
from hypothesis import given, settings, strategies as st

from contmean.errors import InvalidParameter, MetricEdgeViolation, ParseError, ValidationError
from contmean.generators import KINDS, generate
from contmean.graph import (
    WeightedGraph,
    metric_violations,
    parse_graph,
    serialize,
    total_length,
)
from conftest import floyd_warshall


def test_parse_two_edge_path():
    g = parse_graph("a b 1\nb c 1")
    assert (g.n, g.m, total_length(g)) == (3, 2, 2.0)
    assert g.labels == ("a", "b", "c")


def test_triangle_with_tied_long_edge_accepted():
    g = parse_graph("a b 1\nb c 1\na c 2")
    d = floyd_warshall(g)
    assert d[0, 2] == 2.0 == g.edges[2].length


def test_shortcut_edge_rejected_and_named():
    with pytest.raises(MetricEdgeViolation) as exc:
        parse_graph("a b 1\nb c 1\na c 3")
    assert exc.value.edges == [2]
    assert "a-c" in str(exc.value)


def test_shortcut_edge_warn_mode():
    with pytest.warns(UserWarning):
        g = parse_graph("a b 1\nb c 1\na c 3", shortcut_edges="warn")
    assert g.shortcut_edges == (2,)


def test_comments_blank_lines_and_json():
    g = parse_graph("# header\n\nx y 0.5  # trailing\ny z 1.5\n")
    assert (g.n, g.m) == (3, 2)
    h = parse_graph(json.dumps({"edges": [["x", "y", 0.5], ["y", "z", 1.5]]}))
    assert h == g


@pytest.mark.parametrize(
    "text, exc",
    [
        ("a b", ParseError),
        ("a b c d", ParseError),
        ("a b x", ParseError),
        ("", ParseError),
        ("{not json", ParseError),
        ('{"edges": [["a", "b"]]}', ParseError),
        ("a a 1", ValidationError),
        ("a b 0", ValidationError),
        ("a b -1", ValidationError),
        ("a b inf", ValidationError),
        ("a b 1\nc d 1", ValidationError),
    ],
)
def test_malformed_inputs(text, exc):
    with pytest.raises(exc):
        parse_graph(text)


def test_parallel_edges_allowed():
    g = parse_graph("a b 1\na b 1\nb c 2")
    assert g.m == 3 and not g.is_tree()


def test_total_length_examples():
    assert total_length(generate("path", 4, lengths=[2, 1, 1])) == 4
    assert total_length(generate("complete", 3)) == 3
    assert total_length(generate("complete", 4, alpha=2)) == 12


def test_generate_examples():
    p = generate("path", 4, lengths=[2, 1, 1])
    assert [e.length for e in p.edges] == [2, 1, 1]
    k3 = generate("complete", 3)
    assert k3.m == 3 and all(k3.degree(x) == 2 for x in range(3))
    t = generate("random_tree", 50, lo=0.5, hi=2, seed=7)
    assert t.m == 49 and t.is_connected() and t.is_tree()


def test_generate_is_deterministic():
    a = generate("random_connected", 12, lo=0.5, hi=2, seed=5)
    b = generate("random_connected", 12, lo=0.5, hi=2, seed=5)
    assert a == b


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(kind="path", n=1),
        dict(kind="cycle", n=2),
        dict(kind="tree", n=5),
        dict(kind="path", n=3, alpha=0),
        dict(kind="path", n=3, lo=0, hi=1),
        dict(kind="path", n=3, lengths=[1.0]),
    ],
)
def test_generate_rejects_bad_parameters(kwargs):
    with pytest.raises(InvalidParameter):
        generate(**kwargs)


@pytest.mark.parametrize("kind", KINDS)
def test_generated_instances_validate(kind):
    # 1000 seeded draws per kind, each re-validated from scratch
    for seed in range(1000):
        n = 3 + seed % 8
        g = generate(kind, n, lo=0.5, hi=2.0, seed=seed)
        again = WeightedGraph(g.n, list(g.edges), g.labels)
        assert again.is_connected()
        assert metric_violations(again) == []
        d = floyd_warshall(g)
        for u, v, w in g.edges:
            assert d[u, v] >= w - 1e-9 * w


def _brute_violations(g):
    # an edge is shortcut iff the graph without it has a strictly shorter path
    bad = []
    for i, (u, v, w) in enumerate(g.edges):
        rest = [e for j, e in enumerate(g.edges) if j != i]
        h = WeightedGraph(g.n, rest, validate=False)
        d = floyd_warshall(h)
        if d[u, v] < w - 1e-9 * w:
            bad.append(i)
    return bad


@settings(max_examples=150, deadline=None)
@given(
    n=st.integers(2, 8),
    data=st.data(),
)
def test_metric_violation_iff_shorter_alternative(n, data):
    tree = [(data.draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    extra = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    pairs = tree + [(a, b) for a, b in extra if a != b]
    weights = data.draw(st.lists(st.sampled_from([0.5, 1.0, 1.5, 2.0, 3.0, 5.0]), min_size=len(pairs), max_size=len(pairs)))
    g = WeightedGraph(n, [(a, b, w) for (a, b), w in zip(pairs, weights)])
    assert metric_violations(g) == _brute_violations(g)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 10**6), fmt=st.sampled_from(["edgelist", "json"]))
def test_serialize_round_trip(seed, fmt):
    g = generate("random_connected", 2 + seed % 9, lo=0.1, hi=3.0, seed=seed, parallel=seed % 3)
    h = parse_graph(serialize(g, fmt))
    assert h == g


def test_round_trip_up_to_relabeling():
    g = parse_graph("q r 1.25\nr s 0.5\ns q 1.0")
    h = parse_graph(serialize(g))
    assert sorted((h.labels[u], h.labels[v], w) for u, v, w in h.edges) == sorted(
        (g.labels[u], g.labels[v], w) for u, v, w in g.edges
    )


def test_weighted_graph_accessors():
    g = parse_graph("a b 1\nb c 2")
    assert g.index_of("c") == 2
    assert g.degree(1) == 2
    assert g.lengths() == [1.0, 2.0]
    assert hash(g) == hash(parse_graph("a b 1\nb c 2"))
    with pytest.raises(ValidationError):
        WeightedGraph(2, [(0, 1, 1.0)], ["x", "x"])
