"""End-to-end acceptance suite: one verdict line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the verdicts are repeated in
the terminal summary.  Where a criterion has a part that does not hold, that
part is recorded as FAIL and asserted in its own strict-xfail test, while
the parts that do hold are asserted normally.
"""

import io
import json
import random
import time

import pytest

from contmean.aggregate import continuous_mean
from contmean.bench import bench_pair_loop
from contmean.cli import run
from contmean.closed_forms import cactus_mean, tree_mean
from contmean.generators import generate
from contmean.graph import WeightedGraph, serialize
from contmean.oracle import OracleConfig, convergence_errors, oracle_graph_mean, oracle_pair_mean
from contmean.pair_spt import pair_mean
from contmean.shortest_paths import all_pairs_distances
from contmean.subdivision import (
    line_graph_bounds,
    materialized_mean,
    omega_sandwich,
    pair_bounds,
    subdivision_limits,
    tree_subdivision_bound_check,
)
from conftest import corpus, random_graph, record, rel_close

P211 = [2.0, 1.0, 1.0]


def _backends_close(g, target, rel=1e-9):
    return all(rel_close(continuous_mean(g, b).value, target, rel=rel) for b in ("spt", "roof"))


def test_criterion_01_paths():
    rng = random.Random(101)
    t0 = time.perf_counter()
    bad = 0
    for seed in range(50):
        g = generate("path", rng.randint(2, 15), lo=0.1, hi=5.0, seed=seed)
        bad += not _backends_close(g, sum(g.lengths()) / 3)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 1.0
    record(1, ok, "path formula", f"{50 - bad}/50 paths match t/3, {dt:.2f} s")
    assert ok


def test_criterion_02_cycles():
    rng = random.Random(102)
    bad = 0
    for seed in range(20):
        g = generate("cycle", rng.randint(3, 15), lo=0.1, hi=5.0, seed=seed)
        bad += not _backends_close(g, sum(g.lengths()) / 4)
    record(2, bad == 0, "cycle formula", f"{20 - bad}/20 cycles match c/4")
    assert bad == 0


def test_criterion_03_complete_graphs():
    worst = 0.0
    ok = True
    for n in range(3, 9):
        want = (9 * n * n - 22 * n + 12) / (6 * n * (n - 1))
        got = continuous_mean(generate("complete", n)).value
        worst = max(worst, abs(got - want) / want)
        ok &= rel_close(got, want)
    ok &= rel_close(continuous_mean(generate("complete", 3)).value, 0.75)
    record(3, ok, "complete graphs", f"n=3..8, worst relative error {worst:.1e}; K3 = 3/4")
    assert ok


def _criterion_04_values():
    p = generate("path", 4, lengths=P211)
    t0 = time.perf_counter()
    mu_c = continuous_mean(p).value
    exact = subdivision_limits(p).tree_exact
    mu6 = materialized_mean(p, 6)
    return mu_c, exact, mu6, time.perf_counter() - t0


def test_criterion_04_non_convergence():
    mu_c, exact, mu6, dt = _criterion_04_values()
    gap = abs(mu6 - 34 / 27)
    exact_parts = abs(mu_c - 4 / 3) <= 1e-12 and abs(exact - 34 / 27) <= 1e-12 and dt < 1.0
    record(
        4,
        exact_parts and gap <= 5e-3,
        "non-convergence example",
        f"mu_c = {mu_c!r}, limit = {exact!r}, |mu_d(G^6) - 34/27| = {gap:.3e} (budget 5e-3), {dt:.2f} s",
    )
    assert exact_parts


@pytest.mark.xfail(strict=True, reason="mu_d(G^6) of the 2,1,1 path is 7.7e-3 from its limit; see decisions ledger")
def test_criterion_04_g6_within_tolerance():
    _, _, mu6, _ = _criterion_04_values()
    assert abs(mu6 - 34 / 27) <= 5e-3


def test_criterion_05_backend_equivalence():
    t0 = time.perf_counter()
    bad = []
    multigraphs = 0
    for seed in range(500):
        g = random_graph(5000 + seed, n_max=12, parallel=seed % 3 == 0)
        multigraphs += len({(min(u, v), max(u, v)) for u, v, _ in g.edges}) < g.m
        a = continuous_mean(g, "spt").value
        b = continuous_mean(g, "roof").value
        if not rel_close(a, b):
            bad.append(seed)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60 and multigraphs > 0
    record(5, ok, "backend equivalence", f"{500 - len(bad)}/500 agree ({multigraphs} multigraphs), {dt:.1f} s")
    assert ok, bad[:10]


def _halving_targets():
    path = generate("path", 2)
    k3 = generate("complete", 3)
    c4 = generate("cycle", 4)
    k4 = generate("complete", 4)
    p211 = generate("path", 4, lengths=P211)
    out = []
    for g, i, j, target in ((path, 0, 0, 1 / 3), (k3, 0, 1, 23 / 24), (c4, 0, 2, 5 / 3)):
        dm = all_pairs_distances(g)
        out.append((target, lambda cfg, g=g, dm=dm, i=i, j=j: oracle_pair_mean(dm, g.edges[i], g.edges[j], cfg, i == j)))
    for g, target in ((k4, 17 / 18), (p211, 4 / 3)):
        dm = all_pairs_distances(g)
        out.append((target, lambda cfg, g=g, dm=dm: oracle_graph_mean(g, dm, cfg)))
    return out


def _error_ratios():
    ratios = []
    for target, evaluate in _halving_targets():
        errs = [e for _, e in convergence_errors(target, evaluate)]
        ratios += [a / b for a, b in zip(errs, errs[1:])]
    return ratios


def test_criterion_06_oracle_agreement():
    cfg = OracleConfig(512)
    worst = 0.0
    for seed in range(50):
        g = random_graph(6000 + seed, n_max=8)
        dm = all_pairs_distances(g)
        ref = oracle_graph_mean(g, dm, cfg)
        for b in ("spt", "roof"):
            worst = max(worst, abs(continuous_mean(g, b, dm=dm).value - ref) / ref)
    ratios = _error_ratios()
    halves = all(2 / 1.5 <= r <= 2 * 1.5 for r in ratios)
    at_least_first_order = all(r >= 1.5 for r in ratios)
    record(
        6,
        worst <= 5e-3 and halves,
        "oracle agreement",
        f"worst relative gap {worst:.1e} on 50 graphs; error ratios per doubling "
        f"{min(ratios):.2f}..{max(ratios):.2f} (halving expects 1.33..3)",
    )
    assert worst <= 5e-3 and at_least_first_order


@pytest.mark.xfail(strict=True, reason="midpoint error falls fourfold per doubling, not twofold; see decisions ledger")
def test_criterion_06_error_halves():
    assert all(2 / 1.5 <= r <= 2 * 1.5 for r in _error_ratios())


def test_criterion_07_closed_forms():
    rng = random.Random(107)
    bad = 0
    for seed in range(500):
        g = generate("random_tree", rng.randint(2, 60), lo=0.1, hi=3.0, seed=seed)
        bad += not rel_close(tree_mean(g), continuous_mean(g).value)
    for seed in range(300):
        g = generate("random_cactus", rng.randint(2, 40), lo=0.5, hi=2.0, seed=seed)
        bad += not rel_close(cactus_mean(g), continuous_mean(g).value)
    big = generate("random_tree", 100_000, lo=0.5, hi=2.0, seed=7)
    t0 = time.perf_counter()
    tree_mean(big)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 1.0
    record(7, ok, "closed-form engines", f"{800 - bad}/800 match; tree_mean at n=1e5 in {dt:.2f} s")
    assert ok


def test_criterion_08_bounds():
    graphs = list(corpus().values()) + [random_graph(8000 + s, n_max=10, parallel=s % 2 == 0) for s in range(40)]
    pairs = violations = 0
    for g in graphs:
        dm = all_pairs_distances(g)
        for i in range(g.m):
            for j in range(i + 1, g.m):
                lo, hi = pair_bounds(dm, g.edges[i], g.edges[j])
                mu = pair_mean(g, dm, i, j)
                pairs += 1
                violations += not (lo - 1e-9 * hi <= mu <= hi * (1 + 1e-9))
    p4 = generate("path", 4)
    dm = all_pairs_distances(p4)
    upper_tight = rel_close(pair_mean(p4, dm, 0, 2), pair_bounds(dm, p4.edges[0], p4.edges[2])[1])
    k4 = generate("complete", 4)
    dm = all_pairs_distances(k4)
    lower_tight = rel_close(pair_mean(k4, dm, 0, 5), pair_bounds(dm, k4.edges[0], k4.edges[5])[0])
    lg_bad = 0
    for seed in range(200):
        g = random_graph(8100 + seed, n_max=10)
        g = WeightedGraph(g.n, [(u, v, 1.0) for u, v, _ in g.edges], validate=False)
        b = line_graph_bounds(g)
        mu = continuous_mean(g).value
        lg_bad += not (b.lower * (1 - 1e-9) <= mu <= b.upper * (1 + 1e-9))
    path_eq = all(rel_close(line_graph_bounds(generate("path", n)).upper, (n - 1) / 3) for n in range(3, 12))
    ok = violations == 0 and upper_tight and lower_tight and lg_bad == 0 and path_eq
    record(
        8,
        ok,
        "edge-pair and line-graph bounds",
        f"{pairs - violations}/{pairs} pairs inside; tight upper {upper_tight}, tight lower {lower_tight}; "
        f"line-graph {200 - lg_bad}/200; path equality {path_eq}",
    )
    assert ok


def test_criterion_09_tree_subdivision():
    rng = random.Random(109)
    bad = 0
    worst = float("inf")
    for seed in range(300):
        t = generate("random_tree", rng.randint(2, 15), lo=0.1, hi=3.0, seed=seed)
        try:
            r = tree_subdivision_bound_check(t, rng.randint(1, 4), "random", seed)
            worst = min(worst, r.margin)
        except AssertionError:
            bad += 1
    record(9, bad == 0, "tree subdivision bound", f"{300 - bad}/300 strict, smallest margin {worst:.2e}")
    assert bad == 0


def _criterion_10_instances():
    for seed in range(100):
        g = random_graph(10_000 + seed, n_max=9)
        if g.m < 2:
            g = generate("path", 3, lo=0.5, hi=2.0, seed=seed)
        for k in (2, 3, 4):
            yield g, k, omega_sandwich(g, k, materialize=True)


def test_criterion_10_sandwich():
    upper_bad = lower_bad = tree_bad = trees = 0
    for g, k, b in _criterion_10_instances():
        upper_bad += b.mu_d_actual > b.upper * (1 + 1e-9)
        lower_bad += not b.lower < b.mu_d_actual
        if g.is_tree():
            trees += 1
            tree_bad += not rel_close(b.mu_d_actual, b.upper)
    record(
        10,
        upper_bad == lower_bad == tree_bad == 0,
        "subdivision sandwich",
        f"upper holds on {300 - upper_bad}/300, lower strict on {300 - lower_bad}/300, "
        f"tree equality on {trees - tree_bad}/{trees}",
    )
    assert upper_bad == 0 and tree_bad == 0


@pytest.mark.xfail(strict=True, reason="lower bound exceeds the actual mean on dense graphs; see decisions ledger")
def test_criterion_10_lower_strict():
    assert all(b.lower < b.mu_d_actual for _, _, b in _criterion_10_instances())


def test_criterion_11_extremality():
    bad = 0
    for n in (5, 10, 20):
        lo = continuous_mean(generate("star", n)).value
        hi = continuous_mean(generate("path", n)).value
        for seed in range(200):
            mu = tree_mean(generate("random_tree", n, seed=11_000 + seed))
            bad += not (lo * (1 - 1e-12) <= mu <= hi * (1 + 1e-12))
    record(11, bad == 0, "star/path extremality", f"{600 - bad}/600 trees between star and path")
    assert bad == 0


def _mean_output(text, threads):
    out = io.StringIO()
    code = run(["mean", "--threads", str(threads)], io.StringIO(text), out, io.StringIO())
    assert code == 0
    report = json.loads(out.getvalue())
    report.pop("elapsed_ms")
    return json.dumps(report, sort_keys=True)


def test_criterion_12_determinism():
    fixtures = list(corpus().values())
    fixtures.append(generate("random_cactus", 60, lo=0.5, hi=2.0, seed=12))
    # large enough that the pair loop goes through the worker pool
    fixtures.append(generate("random_connected", 220, lo=0.5, hi=2.0, seed=4, extra_edges=110))
    assert len(fixtures) == 20
    differing = 0
    for g in fixtures:
        text = serialize(g)
        differing += len({_mean_output(text, t) for t in (1, 2, 8)}) != 1
    record(12, differing == 0, "determinism", f"{20 - differing}/20 fixtures bit-identical across 1/2/8 threads")
    assert differing == 0


def test_criterion_13_scaling():
    rep = bench_pair_loop((250, 500, 1000), seed=13, backend="spt", workers=1, instances=3)
    ratios = list(rep.ratios.values())
    ok = all(2.0 <= r <= 6.0 for r in ratios)
    shown = ", ".join(f"{k}: {v:.2f}x" for k, v in rep.ratios.items())
    record(13, ok, "pair-loop scaling", f"{shown} (expected 4x within 50%)")
    assert ok
