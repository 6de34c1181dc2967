"""Linear-time continuous means for special graph classes.

Everything here rests on one identity: if a graph splits at a cut vertex
into two parts, every path between the parts passes through that vertex,
so the mean of the whole follows from each part's length and mean plus
its mean distance from the cut vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import EmptyEdgeSet, InvalidParameter, NotACactus, NotATree
from .graph import WeightedGraph, total_length
from .tolerance import DEFAULT_TOL, Tolerance

CLASSES = ("path", "cycle", "tree", "cactus", "complete_uniform", "general")


@dataclass(frozen=True)
class SubtreeSummary:
    """A component hanging at a vertex, summarised by its length and two means (overall and from the vertex)."""

    length: float
    mean: float
    root_mean: float


EMPTY = SubtreeSummary(0.0, 0.0, 0.0)


def merge_at_cut_vertex(a: SubtreeSummary, b: SubtreeSummary) -> SubtreeSummary:
    """Combine two components that share only their common root vertex."""
    if a.length == 0:
        return b
    if b.length == 0:
        return a
    total = a.length + b.length
    fa, fb = a.length / total, b.length / total
    mean = fa * fa * a.mean + fb * fb * b.mean + 2.0 * fa * fb * (a.root_mean + b.root_mean)
    root_mean = fa * a.root_mean + fb * b.root_mean
    return SubtreeSummary(total, mean, root_mean)


def extend_across_edge(child: SubtreeSummary, length: float) -> SubtreeSummary:
    """Attach ``child`` (rooted at the far end) to an edge; re-root at the near end."""
    edge = SubtreeSummary(length, length / 3.0, length / 2.0)
    if child.length == 0:
        return edge
    joined = merge_at_cut_vertex(edge, child)
    total = joined.length
    root_mean = (length * (length / 2.0) + child.length * (length + child.root_mean)) / total
    return SubtreeSummary(total, joined.mean, root_mean)


def path_mean(length: float) -> float:
    return length / 3.0


def cycle_mean(length: float) -> float:
    return length / 4.0


def tree_summary(g: WeightedGraph, root: int = 0) -> SubtreeSummary:
    if not g.is_tree():
        raise NotATree(f"graph has {g.m} edges on {g.n} vertices; a tree has {g.n - 1}")
    if g.m == 0:
        raise EmptyEdgeSet("a single vertex has no continuous mean")
    adj = g.adjacency
    n = g.n
    parent = [-1] * n
    parent_w = [0.0] * n
    order = []
    seen = [False] * n
    seen[root] = True
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y, _, w in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                parent_w[y] = w
                stack.append(y)
    # unnormalized accumulators: length, double integral of distance, integral of distance from the root
    L = [0.0] * n
    I = [0.0] * n
    S = [0.0] * n
    for x in reversed(order):
        if x == root:
            continue
        w = parent_w[x]
        lc, ic, sc = L[x], I[x], S[x]
        # extend x's component across its parent edge
        ie = ic + w * w * w / 3.0 + 2.0 * w * sc + lc * w * w
        se = w * w / 2.0 + sc + lc * w
        le = lc + w
        p = parent[x]
        # merge at the parent, a cut vertex between its children
        I[p] += ie + 2.0 * (L[p] * se + le * S[p])
        S[p] += se
        L[p] += le
    total = L[root]
    return SubtreeSummary(total, I[root] / (total * total), S[root] / total)


def tree_mean(g: WeightedGraph) -> float:
    """Continuous mean of a weighted tree in O(n)."""
    return tree_summary(g).mean


# --- block decomposition ---------------------------------------------------


@dataclass
class Block:
    kind: str  # "edge" or "cycle"
    vertices: list[int]  # cyclic order for cycles
    edges: list[int]
    length: float
    # arclength of each vertex from vertices[0] along the cycle
    positions: list[float] = field(default_factory=list)


@dataclass
class BlockDecomposition:
    blocks: list[Block]
    cut_vertices: set[int]
    # vertex -> indices of the blocks containing it (block-cut tree adjacency)
    vertex_blocks: list[list[int]]
    is_cactus: bool


def biconnected_edge_blocks(g: WeightedGraph) -> list[list[int]]:
    """Edge sets of the biconnected components (iterative, multigraph-safe)."""
    n = g.n
    adj = g.adjacency
    disc = [-1] * n
    low = [0] * n
    blocks: list[list[int]] = []
    edge_stack: list[int] = []
    timer = 0
    for s in range(n):
        if disc[s] != -1:
            continue
        disc[s] = low[s] = timer
        timer += 1
        # frames: (vertex, edge used to enter it, next adjacency position)
        stack = [[s, -1, 0]]
        while stack:
            frame = stack[-1]
            x, via, k = frame
            if k < len(adj[x]):
                frame[2] += 1
                y, i, _ = adj[x][k]
                if i == via:
                    continue
                if disc[y] == -1:
                    edge_stack.append(i)
                    disc[y] = low[y] = timer
                    timer += 1
                    stack.append([y, i, 0])
                elif disc[y] < disc[x]:
                    edge_stack.append(i)
                    low[x] = min(low[x], disc[y])
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[x])
                if low[x] >= disc[p]:
                    comp = []
                    while True:
                        i = edge_stack.pop()
                        comp.append(i)
                        if i == via:
                            break
                    blocks.append(comp)
    return blocks


def _cycle_order(g: WeightedGraph, edge_ids: list[int]) -> tuple[list[int], list[float]]:
    incident: dict[int, list[int]] = {}
    for i in edge_ids:
        e = g.edges[i]
        incident.setdefault(e.u, []).append(i)
        incident.setdefault(e.v, []).append(i)
    start = g.edges[edge_ids[0]].u
    order, pos = [start], [0.0]
    used = set()
    x, at = start, 0.0
    for _ in range(len(edge_ids) - 1):
        i = next(i for i in incident[x] if i not in used)
        used.add(i)
        e = g.edges[i]
        x = e.v if e.u == x else e.u
        at += e.length
        order.append(x)
        pos.append(at)
    return order, pos


def block_decomposition(g: WeightedGraph) -> BlockDecomposition:
    blocks = []
    cactus = True
    vertex_blocks: list[list[int]] = [[] for _ in range(g.n)]
    for comp in biconnected_edge_blocks(g):
        verts = {x for i in comp for x in (g.edges[i].u, g.edges[i].v)}
        length = math.fsum(g.edges[i].length for i in comp)
        if len(comp) == 1:
            e = g.edges[comp[0]]
            block = Block("edge", [e.u, e.v], comp, length, [0.0, e.length])
        elif len(comp) == len(verts) and all(
            sum(1 for i in comp if x in (g.edges[i].u, g.edges[i].v)) == 2 for x in verts
        ):
            order, pos = _cycle_order(g, comp)
            block = Block("cycle", order, comp, length, pos)
        else:
            cactus = False
            block = Block("other", sorted(verts), comp, length)
        for x in block.vertices:
            vertex_blocks[x].append(len(blocks))
        blocks.append(block)
    cuts = {x for x in range(g.n) if len(vertex_blocks[x]) > 1}
    return BlockDecomposition(blocks, cuts, vertex_blocks, cactus)


def _weighted_cycle_pair_sum(pos: list[float], wts: list[float], c: float) -> float:
    """``sum_{i<j} w_i w_j d(i, j)`` for points on a circle of length ``c``, in O(k)."""
    k = len(pos)
    if k < 2:
        return 0.0
    P = pos + [p + c for p in pos]
    W = wts + wts
    cw = [0.0]
    cwp = [0.0]
    for p, w in zip(P, W):
        cw.append(cw[-1] + w)
        cwp.append(cwp[-1] + w * p)
    half = c / 2.0
    total = 0.0
    t = 0
    for i in range(k):
        if t < i:
            t = i
        while t + 1 < i + k and P[t + 1] - P[i] <= half:
            t += 1
        near_w = cw[t + 1] - cw[i + 1]
        near_wp = cwp[t + 1] - cwp[i + 1]
        far_w = cw[i + k] - cw[t + 1]
        far_wp = cwp[i + k] - cwp[t + 1]
        s = (near_wp - P[i] * near_w) + ((c + P[i]) * far_w - far_wp)
        total += wts[i] * s
    return total / 2.0


def _block_distance(block: Block, i: int, j: int) -> float:
    arc = abs(block.positions[i] - block.positions[j])
    if block.kind == "edge":
        return arc
    return min(arc, block.length - arc)


def _block_summary(block: Block, parent_idx: int, hang: list[SubtreeSummary]) -> SubtreeSummary:
    """Summary of a block plus the components hanging at its other vertices, rooted at the parent."""
    lb = block.length
    if block.kind == "edge":
        self_mean = lb / 3.0
        point_mean = lb / 2.0  # mean distance from either endpoint
    else:
        self_mean = point_mean = lb / 4.0  # same triangle-wave profile from every point
    lengths = [h.length for h in hang]
    lh = math.fsum(lengths)
    if lh == 0:
        return SubtreeSummary(lb, self_mean, point_mean)
    total = lb + lh
    terms = [lb * lb * self_mean]
    root_terms = [lb * point_mean]
    for idx, h in enumerate(hang):
        if h.length == 0:
            continue
        terms.append(h.length * h.length * h.mean)
        terms.append(2.0 * lb * h.length * (point_mean + h.root_mean))
        # hanging-to-hanging root terms: 2 sum_{w<w'} L_w L_w' (R_w + R_w')
        terms.append(2.0 * h.length * h.root_mean * (lh - h.length))
        root_terms.append(h.length * (_block_distance(block, parent_idx, idx) + h.root_mean))
    if block.kind == "cycle":
        terms.append(2.0 * _weighted_cycle_pair_sum(block.positions, lengths, lb))
    return SubtreeSummary(total, math.fsum(terms) / (total * total), math.fsum(root_terms) / total)


def cactus_summary(g: WeightedGraph, root: int = 0, decomposition: BlockDecomposition | None = None) -> SubtreeSummary:
    if g.m == 0:
        raise EmptyEdgeSet("a single vertex has no continuous mean")
    bd = decomposition or block_decomposition(g)
    if not bd.is_cactus:
        raise NotACactus("some block is neither a bridge nor a simple cycle")
    # breadth-first over the block-cut tree, then fold blocks bottom-up
    parent_vertex = [-1] * len(bd.blocks)
    order = []
    seen_block = [False] * len(bd.blocks)
    frontier = [(root, -1)]
    while frontier:
        x, from_block = frontier.pop()
        for b in bd.vertex_blocks[x]:
            if b == from_block or seen_block[b]:
                continue
            seen_block[b] = True
            parent_vertex[b] = x
            order.append(b)
            for y in bd.blocks[b].vertices:
                if y != x:
                    frontier.append((y, b))
    hanging = [EMPTY] * g.n
    for b in reversed(order):
        block = bd.blocks[b]
        p = parent_vertex[b]
        pidx = block.vertices.index(p)
        hang = [EMPTY if y == p else hanging[y] for y in block.vertices]
        summary = _block_summary(block, pidx, hang)
        hanging[p] = merge_at_cut_vertex(hanging[p], summary)
    return hanging[root]


def cactus_mean(g: WeightedGraph) -> float:
    """Continuous mean of a weighted cactus (every edge on at most one cycle) in O(n)."""
    return cactus_summary(g).mean


def complete_uniform_mean(n: int, alpha: float = 1.0) -> float:
    """Continuous mean of K_n with every edge of length ``alpha``."""
    if n < 2:
        raise InvalidParameter(f"K_n needs n >= 2, got {n}")
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha!r}")
    return alpha * (9 * n * n - 22 * n + 12) / (6 * (n * n - n))


def _is_uniform(g: WeightedGraph, tol: Tolerance) -> bool:
    w0 = g.edges[0].length
    return all(abs(e.length - w0) <= tol.eps(w0) for e in g.edges)


def detect_class(g: WeightedGraph, tol: Tolerance = DEFAULT_TOL) -> str:
    """Most specific class with a linear-time engine, in O(n + m)."""
    if g.m == 0:
        return "general"
    if g.is_tree():
        return "path" if all(g.degree(x) <= 2 for x in range(g.n)) else "tree"
    if g.m == g.n and all(g.degree(x) == 2 for x in range(g.n)):
        return "cycle"
    if g.m == g.n * (g.n - 1) // 2 and _is_uniform(g, tol):
        pairs = {(min(e.u, e.v), max(e.u, e.v)) for e in g.edges}
        if len(pairs) == g.m:
            return "complete_uniform"
    if block_decomposition(g).is_cactus:
        return "cactus"
    return "general"


def closed_form_mean(g: WeightedGraph, cls: str | None = None) -> float:
    """Dispatch to the engine for ``cls`` (detected when omitted)."""
    cls = cls or detect_class(g)
    if cls == "path":
        return path_mean(total_length(g))
    if cls == "cycle":
        return cycle_mean(total_length(g))
    if cls == "tree":
        return tree_mean(g)
    if cls == "cactus":
        return cactus_mean(g)
    if cls == "complete_uniform":
        return complete_uniform_mean(g.n, math.fsum(g.lengths()) / g.m)
    raise InvalidParameter(f"no closed form for class {cls!r}")
