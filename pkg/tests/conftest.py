import math
import random

import numpy as np
import pytest

from contmean.generators import generate
from contmean.graph import WeightedGraph


def rel_close(a, b, rel=1e-9, abs_=1e-12):
    return abs(a - b) <= max(abs_, rel * max(abs(a), abs(b)))


def floyd_warshall(g: WeightedGraph) -> np.ndarray:
    """Independent all-pairs oracle, O(n^3) in numpy."""
    d = np.full((g.n, g.n), math.inf)
    np.fill_diagonal(d, 0.0)
    for u, v, w in g.edges:
        if w < d[u, v]:
            d[u, v] = d[v, u] = w
    for k in range(g.n):
        d = np.minimum(d, d[:, k : k + 1] + d[k : k + 1, :])
    return d


def random_graph(seed: int, n_max: int = 10, parallel: bool = False) -> WeightedGraph:
    r = random.Random(seed)
    n = r.randint(2, n_max)
    kind = r.choice(["random_connected", "random_tree", "random_cactus"] + (["cycle"] if n >= 3 else []))
    extra = {"extra_edges": r.randint(0, min(n, (n * (n - 1)) // 2 - (n - 1)))} if kind == "random_connected" else {}
    return generate(kind, n, lo=0.5, hi=2.0, seed=seed, parallel=r.randint(0, 2) if parallel else 0, **extra)


def corpus() -> dict[str, WeightedGraph]:
    """Small fixed graphs used across modules."""
    out = {
        "path211": generate("path", 4, lengths=[2, 1, 1]),
        "unit_triangle": generate("complete", 3),
        "triangle_112": WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 2.0)]),
        "unit_c4": generate("cycle", 4),
        "unit_k4": generate("complete", 4),
        "unit_k5": generate("complete", 5),
        "star3": generate("star", 4),
        "triangle_pendant": WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)]),
        "bowtie": WeightedGraph(5, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (2, 4, 1.0)]),
        "parallel_pair": WeightedGraph(3, [(0, 1, 1.0), (0, 1, 1.0), (1, 2, 0.5)]),
        "weighted_c5": generate("cycle", 5, lengths=[1.0, 1.3, 0.7, 1.1, 0.9]),
        "k4_random": generate("complete", 4, lo=0.5, hi=2.0, seed=3),
    }
    for s in range(6):
        out[f"random_{s}"] = random_graph(1000 + s, n_max=8, parallel=s % 2 == 1)
    return out


@pytest.fixture(scope="session")
def graphs():
    return corpus()


# one verdict line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool, title: str, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
