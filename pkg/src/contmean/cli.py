"""Command-line front end.

Exit codes: 0 on success, 2 for usage and validation errors, 1 when an
internal consistency assertion fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
import warnings

from . import __version__
from .aggregate import continuous_mean, discrete_mean, wiener_index
from .bench import bench_pair_loop, bench_tree
from .closed_forms import closed_form_mean, detect_class
from .config import RunConfig, read_config_file, resolve
from .errors import ContMeanError, InvalidParameter, NotUniform
from .generators import KINDS, generate
from .graph import ShortcutEdgeWarning, WeightedGraph, parse_graph, serialize, total_length
from .oracle import OracleConfig, oracle_graph_mean
from .pair_spt import Cycle, Linear, classify_pair, pair_mean
from .roof import build_roof, roof_mean
from .shortest_paths import all_pairs_distances
from .subdivision import (
    line_graph_bounds,
    omega_sandwich,
    pair_bounds,
    subdivision_limits,
)


# --- argument parsing --------------------------------------------------------


def _int_at_least(lo):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}, got {v}")
        return v

    return conv


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _common() -> argparse.ArgumentParser:
    # every option defaults to None so that config-file values can fill the gaps
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", "-i", help="graph file (edge list or JSON); '-' or omitted reads stdin")
    p.add_argument("--format", choices=("json", "table"))
    p.add_argument("--threads", type=_int_at_least(1), help="worker processes (default: $CONTMEAN_THREADS, then CPUs)")
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--tol-rel", dest="tol_rel", type=_positive_float)
    p.add_argument("--tol-abs", dest="tol_abs", type=_positive_float)
    p.add_argument("--allow-shortcut-edges", dest="allow_shortcut_edges", choices=("warn", "error"))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="contmean", description="Continuous mean distance of weighted graphs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("mean", parents=[common], help="continuous and discrete mean distance")
    p.add_argument("--backend", choices=("spt", "roof", "auto"))
    p.add_argument("--mode", choices=("continuous", "discrete", "both"))

    sub.add_parser("distances", parents=[common], help="all-pairs distance matrix as CSV")

    for name, helptext in (("edge-pair", "classification and mean of one edge pair"),
                           ("roof", "roof diagram regions of one edge pair")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--pair", nargs=2, type=int, required=True, metavar=("I", "J"))

    p = sub.add_parser("bounds", parents=[common], help="edge-pair and line-graph bounds")
    p.add_argument("--pair", nargs=2, type=int, metavar=("I", "J"))

    p = sub.add_parser("subdivide", parents=[common], help="k-th subdivision bounds and limits")
    p.add_argument("--k", type=_int_at_least(2))
    p.add_argument("--materialize", action="store_true", help="build G^k and compute its discrete mean")

    p = sub.add_parser("oracle", parents=[common], help="grid-quadrature reference mean")
    p.add_argument("--n", type=_int_at_least(2), help="grid points per axis (default 512)")

    p = sub.add_parser("generate", parents=[common], help="write a generated graph as an edge list")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=_int_at_least(2), required=True, help="vertex count")
    p.add_argument("--alpha", type=_positive_float)
    p.add_argument("--lo", type=_positive_float)
    p.add_argument("--hi", type=_positive_float)
    p.add_argument("--lengths", help="comma-separated explicit edge lengths")
    p.add_argument("--extra-edges", dest="extra_edges", type=_int_at_least(0))
    p.add_argument("--parallel", type=_int_at_least(0), default=0)
    p.add_argument("--json", action="store_true", help="emit JSON instead of an edge list")

    p = sub.add_parser("bench", parents=[common], help="pair-loop scaling and tree engine timing")
    p.add_argument("--sizes", nargs="+", type=_int_at_least(2), default=[250, 500, 1000], metavar="M")
    p.add_argument("--backend", choices=("spt", "roof"))
    p.add_argument("--repeats", type=_int_at_least(1), default=1, help="time each instance this many times, keep the best")
    p.add_argument("--instances", type=_int_at_least(1), default=1, help="graphs per size, times summed")
    p.add_argument("--tree-n", dest="tree_n", type=_int_at_least(0), default=100_000,
                   help="tree size for the closed-form timing (0 skips it)")
    return parser


# --- helpers -----------------------------------------------------------------


def _load_graph(cfg: RunConfig, stdin) -> WeightedGraph:
    if cfg.input in (None, "-"):
        text = stdin.read()
    else:
        try:
            with open(cfg.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidParameter(f"--input: cannot read {cfg.input}: {exc.strerror}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ShortcutEdgeWarning)
        g = parse_graph(text, shortcut_edges=cfg.allow_shortcut_edges, tol=cfg.tol)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return g


def _edge_json(g: WeightedGraph, i: int) -> list:
    e = g.edges[i]
    return [g.labels[e.u], g.labels[e.v], e.length]


def _check_pair(g: WeightedGraph, pair) -> tuple[int, int]:
    i, j = pair
    for x in (i, j):
        if not 0 <= x < g.m:
            raise InvalidParameter(f"--pair: edge index {x} out of range 0..{g.m - 1}")
    return i, j


def _flatten(prefix: str, value, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    else:
        out.append((prefix, value))


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    rows: list = []
    _flatten("", report, rows)
    width = max(len(k) for k, _ in rows) if rows else 0
    lines = []
    for k, v in rows:
        text = json.dumps(v) if isinstance(v, (list, tuple)) else ("null" if v is None else str(v))
        lines.append(f"{k.ljust(width)}  {text}")
    return "\n".join(lines)


def _flags(g: WeightedGraph, report: dict) -> dict:
    if g.shortcut_edges:
        report["shortcut_edges"] = [_edge_json(g, i) for i in g.shortcut_edges]
    return report


# --- subcommands -------------------------------------------------------------


def cmd_mean(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    t0 = time.perf_counter()
    cont = disc = wien = None
    detected = None
    backend = cfg.backend
    dm = None
    if cfg.mode in ("continuous", "both"):
        if backend == "auto":
            detected = detect_class(g, cfg.tol)
            if detected == "general":
                backend = "spt"
            else:
                backend = f"closed-form:{detected}"
                cont = closed_form_mean(g, detected)
        if cont is None:
            dm = all_pairs_distances(g)
            cont = continuous_mean(g, backend, dm=dm, workers=cfg.threads, tol=cfg.tol).value
    if cfg.mode in ("discrete", "both"):
        wien = wiener_index(g, dm)
        disc = 2.0 * wien / (g.n * g.n) if g.n > 1 else 0.0
    elapsed = (time.perf_counter() - t0) * 1e3
    report = {
        "continuous_mean": cont,
        "discrete_mean": disc,
        "wiener": wien,
        "n": g.n,
        "m": g.m,
        "total_length": total_length(g),
        "backend": backend,
        "elapsed_ms": elapsed,
    }
    if cfg.backend == "auto":
        report["detected_class"] = detected if detected is not None else detect_class(g, cfg.tol)
    return _flags(g, report)


def cmd_distances(args, cfg: RunConfig, stdin) -> str:
    g = _load_graph(cfg, stdin)
    dm = all_pairs_distances(g)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(g.labels))
    for lab, row in zip(g.labels, dm.rows):
        w.writerow([lab] + [repr(x) for x in row])
    return buf.getvalue()


def _case_json(case) -> dict:
    if isinstance(case, Linear):
        return {"kind": "linear", "via_vertex": case.via_vertex, "orientation": case.orientation}
    if isinstance(case, Cycle):
        return {
            "kind": "cycle",
            "near": case.near,
            "break_point_a": case.break_point_a,
            "break_point_b": case.break_point_b,
            "mirror_a": case.mirror_a,
            "mirror_b": case.mirror_b,
            "theta": case.theta,
        }
    raise AssertionError(f"unexpected case {case!r}")


def cmd_edge_pair(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    i, j = _check_pair(g, args.pair)
    dm = all_pairs_distances(g)
    value = pair_mean(g, dm, i, j, cfg.tol)
    roof_value = value if i == j else roof_mean(build_roof(dm, g.edges[i], g.edges[j], cfg.tol))
    if i == j:
        case = {"kind": "same_edge", "length": g.edges[i].length}
    else:
        case = _case_json(classify_pair(g, dm, i, j, cfg.tol))
        if "via_vertex" in case:
            case["via_vertex"] = g.labels[case["via_vertex"]]
        if "near" in case:
            case["near"] = g.labels[case["near"]]
    report = {
        "pair": [i, j],
        "edges": [_edge_json(g, i), _edge_json(g, j)],
        "case": case,
        "mean": value,
        "mean_roof": roof_value,
    }
    return _flags(g, report)


def cmd_roof(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    i, j = _check_pair(g, args.pair)
    if i == j:
        raise InvalidParameter("--pair: roof diagrams need two distinct edges")
    dm = all_pairs_distances(g)
    roof = build_roof(dm, g.edges[i], g.edges[j], cfg.tol)
    report = {
        "pair": [i, j],
        "edges": [_edge_json(g, i), _edge_json(g, j)],
        "width": roof.width,
        "height": roof.height,
        "planes": [
            {"cx": p.cx, "cy": p.cy, "c0": p.c0, "corner": [g.labels[p.corner[0]], g.labels[p.corner[1]]]}
            for p in roof.planes
        ],
        "regions": [
            {"plane": r.plane, "polygon": [list(pt) for pt in r.polygon], "area": r.area, "volume": r.volume}
            for r in roof.regions
        ],
        "mean": roof_mean(roof),
    }
    return _flags(g, report)


def cmd_bounds(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    dm = all_pairs_distances(g)
    report: dict = {"n": g.n, "m": g.m}
    if args.pair is not None:
        i, j = _check_pair(g, args.pair)
        if i == j:
            raise InvalidParameter("--pair: bounds need two distinct edges")
        lo, hi = pair_bounds(dm, g.edges[i], g.edges[j])
        report["pair"] = {"pair": [i, j], "lower": lo, "mean": pair_mean(g, dm, i, j, cfg.tol), "upper": hi}
    pairs = holds = tight_lo = tight_hi = 0
    for i in range(g.m):
        for j in range(i + 1, g.m):
            lo, hi = pair_bounds(dm, g.edges[i], g.edges[j])
            mu = pair_mean(g, dm, i, j, cfg.tol)
            pairs += 1
            slack = cfg.tol.eps(hi)
            holds += lo - slack <= mu <= hi + slack
            tight_lo += abs(mu - lo) <= slack
            tight_hi += abs(mu - hi) <= slack
    report["pair_bounds"] = {"pairs": pairs, "hold": holds, "tight_lower": tight_lo, "tight_upper": tight_hi}
    mu = continuous_mean(g, "spt", dm=dm, workers=cfg.threads, tol=cfg.tol).value
    report["continuous_mean"] = mu
    try:
        lg = line_graph_bounds(g, cfg.tol)
        report["line_graph"] = {
            "alpha": lg.alpha,
            "edge_wiener": lg.edge_wiener,
            "mu_d_line": lg.mu_d_line,
            "lower": lg.lower,
            "upper": lg.upper,
            "holds": lg.lower - cfg.tol.eps(mu) <= mu <= lg.upper + cfg.tol.eps(mu),
        }
    except NotUniform:
        report["line_graph"] = None
    return _flags(g, report)


def cmd_subdivide(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    k = args.k if args.k is not None else 2
    if k < 2:
        raise InvalidParameter(f"--k: must be at least 2, got {k}")
    sb = omega_sandwich(g, k, materialize=args.materialize)
    lim = subdivision_limits(g, cfg.tol)
    report = {
        "k": k,
        "vertex_count": sb.vertex_count,
        "omega": sb.omega,
        "rho": sb.rho,
        "lower": sb.lower,
        "upper": sb.upper,
        "mu_d_actual": sb.mu_d_actual,
        "limits": {
            "mu_d_blue": lim.mu_d_blue,
            "upper_limit": lim.upper_limit,
            "tree_exact": lim.tree_exact,
            "uniform_upper": lim.uniform_upper,
        },
        "continuous_mean": continuous_mean(g, workers=cfg.threads, tol=cfg.tol).value,
    }
    return _flags(g, report)


def cmd_oracle(args, cfg: RunConfig, stdin) -> dict:
    g = _load_graph(cfg, stdin)
    grid = OracleConfig(args.n if args.n is not None else 512)
    t0 = time.perf_counter()
    dm = all_pairs_distances(g)
    value = oracle_graph_mean(g, dm, grid)
    wien = wiener_index(g, dm)
    elapsed = (time.perf_counter() - t0) * 1e3
    report = {
        "continuous_mean": value,
        "discrete_mean": discrete_mean(g, dm),
        "wiener": wien,
        "n": g.n,
        "m": g.m,
        "total_length": total_length(g),
        "backend": "oracle",
        "grid": grid.N,
        "elapsed_ms": elapsed,
    }
    return _flags(g, report)


def cmd_generate(args, cfg: RunConfig, stdin) -> str:
    lengths = None
    if args.lengths is not None:
        try:
            lengths = [float(x) for x in args.lengths.split(",") if x.strip()]
        except ValueError:
            raise InvalidParameter(f"--lengths: expected comma-separated numbers, got {args.lengths!r}") from None
    g = generate(
        args.kind,
        args.n,
        alpha=args.alpha,
        lo=args.lo,
        hi=args.hi,
        lengths=lengths,
        seed=cfg.seed,
        extra_edges=args.extra_edges,
        parallel=args.parallel,
    )
    return serialize(g, "json") + "\n" if args.json else serialize(g)


def cmd_bench(args, cfg: RunConfig, stdin) -> dict:
    backend = args.backend or (cfg.backend if cfg.backend in ("spt", "roof") else "spt")
    rep = bench_pair_loop(
        args.sizes, seed=cfg.seed, backend=backend, workers=cfg.threads, repeats=args.repeats, instances=args.instances
    )
    out = {"backend": backend, "threads": cfg.threads, **rep.as_dict()}
    if args.tree_n:
        row = bench_tree(args.tree_n, seed=cfg.seed)
        out["tree"] = {"n": row.n, "elapsed_ms": row.pair_loop_ms, "value": row.value}
    return out


COMMANDS = {
    "mean": cmd_mean,
    "distances": cmd_distances,
    "edge-pair": cmd_edge_pair,
    "roof": cmd_roof,
    "bounds": cmd_bounds,
    "subdivide": cmd_subdivide,
    "oracle": cmd_oracle,
    "generate": cmd_generate,
    "bench": cmd_bench,
}


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = resolve(args, file_values)
        out = COMMANDS[args.command](args, cfg, stdin)
    except ContMeanError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except AssertionError as exc:
        print(f"internal assertion failed: {exc}", file=stderr)
        return 1
    if isinstance(out, str):
        stdout.write(out)
    else:
        stdout.write(render(out, cfg.format) + "\n")
    return 0


def main() -> None:
    sys.exit(run())
