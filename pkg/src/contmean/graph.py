"""Weighted graph model, edge-list/JSON parsing, and serialization.

Vertices are dense integers ``0..n-1``; the original string labels are kept
in :attr:`WeightedGraph.labels` so that reports can use them.  An edge is an
``(u, v, length)`` triple whose first endpoint ``u`` is the origin of the
edge parametrization ``p = lam * v + (1 - lam) * u``.
"""

from __future__ import annotations

import heapq
import json
import math
import warnings
from typing import Iterable, NamedTuple, Sequence

from .errors import MetricEdgeViolation, ParseError, ValidationError
from .tolerance import DEFAULT_TOL, Tolerance


class Edge(NamedTuple):
    u: int
    v: int
    length: float


class EdgeRef(NamedTuple):
    """An edge index plus the orientation used to parametrize it.

    With ``reversed=False`` the parameter runs from ``edge.u`` to ``edge.v``.
    """

    index: int
    reversed: bool = False

    def endpoints(self, g: "WeightedGraph") -> tuple[int, int]:
        e = g.edges[self.index]
        return (e.v, e.u) if self.reversed else (e.u, e.v)


class ShortcutEdgeWarning(UserWarning):
    pass


class WeightedGraph:
    """Connected undirected graph with strictly positive edge lengths.

    Parallel edges are allowed, self-loops are not.  Instances are treated as
    immutable; the adjacency list is built on first use and cached.
    """

    __slots__ = ("n", "edges", "labels", "shortcut_edges", "_adj", "_label_index")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int, float]],
        labels: Sequence[str] | None = None,
        *,
        validate: bool = True,
    ):
        self.n = int(n)
        self.edges: tuple[Edge, ...] = tuple(Edge(int(u), int(v), float(w)) for u, v, w in edges)
        if labels is None:
            labels = [str(i) for i in range(self.n)]
        self.labels: tuple[str, ...] = tuple(labels)
        # indices of edges that violate the metric-edge assumption (warn mode only)
        self.shortcut_edges: tuple[int, ...] = ()
        self._adj = None
        self._label_index = None
        if validate:
            self._validate()

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m}, total_length={total_length(self):g})"

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges and self.labels == other.labels

    def __hash__(self):
        return hash((self.n, self.edges))

    def _validate(self) -> None:
        if self.n < 1:
            raise ValidationError("graph must have at least one vertex")
        if len(self.labels) != self.n:
            raise ValidationError(f"expected {self.n} labels, got {len(self.labels)}")
        if len(set(self.labels)) != self.n:
            raise ValidationError("vertex labels must be unique")
        for i, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValidationError(f"edge {i} has an endpoint outside 0..{self.n - 1}")
            if u == v:
                raise ValidationError(f"edge {i} ({self.labels[u]}) is a self-loop")
            if not (w > 0 and math.isfinite(w)):
                raise ValidationError(
                    f"edge {i} ({self.labels[u]} {self.labels[v]}) has non-positive or non-finite length {w!r}"
                )
        if not self.is_connected():
            raise ValidationError("graph is disconnected")

    @property
    def adjacency(self) -> list[list[tuple[int, int, float]]]:
        """``adj[x]`` lists ``(neighbour, edge_index, length)`` in edge order."""
        if self._adj is None:
            adj: list[list[tuple[int, int, float]]] = [[] for _ in range(self.n)]
            for i, (u, v, w) in enumerate(self.edges):
                adj[u].append((v, i, w))
                adj[v].append((u, i, w))
            self._adj = adj
        return self._adj

    def degree(self, x: int) -> int:
        return len(self.adjacency[x])

    def index_of(self, label: str) -> int:
        if self._label_index is None:
            self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._label_index[label]
        except KeyError:
            raise ValidationError(f"unknown vertex label {label!r}") from None

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        adj = self.adjacency
        while stack:
            x = stack.pop()
            for y, _, _ in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    count += 1
                    stack.append(y)
        return count == self.n

    def is_tree(self) -> bool:
        return self.m == self.n - 1

    def lengths(self) -> list[float]:
        return [e.length for e in self.edges]


def total_length(g: WeightedGraph) -> float:
    """Sum of all edge lengths, ``|E|``."""
    return math.fsum(e.length for e in g.edges)


def metric_violations(g: WeightedGraph, tol: Tolerance = DEFAULT_TOL) -> list[int]:
    """Indices of edges strictly longer than the graph distance between their endpoints.

    Runs one Dijkstra per vertex, truncated at the longest incident edge, so
    sparse graphs are checked in near-linear time.  Trees are skipped: every
    edge is the only path between its endpoints.
    """
    if g.is_tree():
        return []
    adj = g.adjacency
    bad: set[int] = set()
    for s in range(g.n):
        if not adj[s]:
            continue
        radius = max(w for _, _, w in adj[s])
        dist = {s: 0.0}
        heap = [(0.0, s)]
        done = set()
        while heap:
            d, x = heapq.heappop(heap)
            if x in done:
                continue
            done.add(x)
            for y, _, w in adj[x]:
                nd = d + w
                if nd <= radius and nd < dist.get(y, math.inf):
                    dist[y] = nd
                    heapq.heappush(heap, (nd, y))
        for t, i, w in adj[s]:
            if dist.get(t, math.inf) < w - tol.eps(w):
                bad.add(i)
    return sorted(bad)


def check_metric_edges(g: WeightedGraph, mode: str = "error", tol: Tolerance = DEFAULT_TOL) -> WeightedGraph:
    """Enforce the metric-edge assumption.

    ``mode="error"`` raises :class:`MetricEdgeViolation`; ``mode="warn"``
    emits a :class:`ShortcutEdgeWarning` and records the offending edges in
    ``g.shortcut_edges`` so downstream reports can flag them.
    """
    if mode not in ("error", "warn"):
        raise ValueError(f"unknown shortcut-edge mode {mode!r}")
    bad = metric_violations(g, tol)
    if not bad:
        return g
    names = ", ".join(
        f"{g.labels[g.edges[i].u]}-{g.labels[g.edges[i].v]} (length {g.edges[i].length:g})" for i in bad
    )
    msg = f"edge(s) shortcut by a shorter path: {names}"
    if mode == "error":
        raise MetricEdgeViolation(msg, bad)
    warnings.warn(msg, ShortcutEdgeWarning, stacklevel=2)
    g.shortcut_edges = tuple(bad)
    return g


def _build(triples: list[tuple[str, str, float]], extra_labels: Sequence[str] = ()) -> WeightedGraph:
    index: dict[str, int] = {}
    labels: list[str] = []

    def intern(tok: str) -> int:
        if tok not in index:
            index[tok] = len(labels)
            labels.append(tok)
        return index[tok]

    for lab in extra_labels:
        intern(lab)
    edges = [(intern(a), intern(b), w) for a, b, w in triples]
    if not labels:
        raise ValidationError("graph has no vertices")
    return WeightedGraph(len(labels), edges, labels)


def _parse_weight(tok: str, where: str) -> float:
    try:
        w = float(tok)
    except ValueError:
        raise ParseError(f"{where}: weight {tok!r} is not a number") from None
    if math.isnan(w):
        raise ParseError(f"{where}: weight is NaN")
    return w


def parse_graph(text: str, *, shortcut_edges: str = "error", tol: Tolerance = DEFAULT_TOL) -> WeightedGraph:
    """Parse an edge-list or JSON document into a validated graph.

    Edge-list lines are ``<u> <v> <w>``; ``#`` starts a comment.  A JSON
    document is an object with ``"edges": [[u, v, w], ...]`` and optionally
    ``"vertices": [...]`` (needed only for a single-vertex graph).
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        if not isinstance(doc, dict) or "edges" not in doc:
            raise ParseError('JSON graph must be an object with an "edges" list')
        triples = []
        for k, item in enumerate(doc["edges"]):
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise ParseError(f"edges[{k}]: expected [u, v, w]")
            a, b, w = item
            if isinstance(w, bool) or not isinstance(w, (int, float, str)):
                raise ParseError(f"edges[{k}]: weight must be a number")
            triples.append((str(a), str(b), _parse_weight(str(w), f"edges[{k}]")))
        extra = [str(x) for x in doc.get("vertices", [])]
        g = _build(triples, extra)
    else:
        triples = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            if len(toks) != 3:
                raise ParseError(f"line {lineno}: expected '<u> <v> <w>', got {raw.strip()!r}")
            triples.append((toks[0], toks[1], _parse_weight(toks[2], f"line {lineno}")))
        if not triples:
            raise ParseError("no edges found")
        g = _build(triples)
    return check_metric_edges(g, shortcut_edges, tol)


def read_graph(path: str, **kwargs) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), **kwargs)


def serialize(g: WeightedGraph, fmt: str = "edgelist") -> str:
    """Render ``g`` as an edge list (default) or JSON, using original labels."""
    if fmt == "json":
        doc = {
            "vertices": list(g.labels),
            "edges": [[g.labels[u], g.labels[v], w] for u, v, w in g.edges],
        }
        return json.dumps(doc)
    if fmt != "edgelist":
        raise ValueError(f"unknown format {fmt!r}")
    return "".join(f"{g.labels[u]} {g.labels[v]} {w!r}\n" for u, v, w in g.edges)
