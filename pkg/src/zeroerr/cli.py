"""Command-line front end.

Subcommands: graph, solve, entropy, bounds, codec, eta, verify.  All numeric
output uses 9 significant digits; outputs are byte-identical for identical
(input, config, seed).  Exit codes: 0 success, 2 budget-undecided, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .graphs import (
    BudgetExceeded,
    Distribution,
    ProbabilisticGraph,
    Undecided,
    ZeroErrError,
    and_power,
    and_product,
    catalog_get,
    channel_from_json_dict,
    characteristic_graph,
    complement,
    disjoint_union,
    graph_from_edges,
    graph_from_json_dict,
    load_json,
    pgraph_from_json_dict,
    save_json,
    uniform_pgraph,
)
from .combin import (
    Budget,
    alpha_exact,
    chromatic_number_exact,
    maximal_independent_sets,
    min_entropy_coloring,
    omega_exact,
)
from .numopt import (
    capacity_achieving_distribution,
    korner_entropy,
    matrix_from_json_dict,
)
from .bounds import c0_bounds, c_rel_bounds, h0_bounds, hbar_bounds, typical_alpha_estimate
from .typicality import eta_bounds
from .codec import (
    build_channel_code,
    build_si_code,
    channel_roundtrip,
    si_roundtrip,
)
from .rng import SplitMix64
from .verifier import VerifyConfig, full_suite, report_to_csv


def _fmt(x) -> str:
    return f"{x:.9g}"


def _payload_csv(payload: dict) -> str:
    keys = sorted(k for k, v in payload.items()
                  if isinstance(v, (int, float, str, bool)))
    head = ",".join(keys)
    row = ",".join(str(payload[k]) for k in keys)
    return f"{head}\n{row}\n"


def _emit(args, payload: dict) -> None:
    if getattr(args, "out", None):
        save_json(args.out, payload)
    if getattr(args, "format", "json") == "csv":
        print(_payload_csv(payload), end="")
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))


def _budget(args) -> Budget:
    return Budget(nodes=args.node_budget, seconds=args.time_budget_ms / 1000.0)


def _load_graph(path: str):
    return graph_from_json_dict(load_json(path))


def _load_pgraph(path: str, dist_arg=None) -> ProbabilisticGraph:
    d = load_json(path)
    if "dist" in d:
        return pgraph_from_json_dict(d)
    g = graph_from_json_dict(d)
    if dist_arg:
        return ProbabilisticGraph(g, _parse_dist(dist_arg, g.n))
    return uniform_pgraph(g)


def _parse_dist(text: str, n: int) -> Distribution:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"distribution needs {n} weights, got {len(parts)}")
    if all("/" in p for p in parts):
        return Distribution(tuple(Fraction(p) for p in parts))
    return Distribution(tuple(float(p) for p in parts))


def _interval_payload(quantity: str, iv) -> dict:
    d = iv.to_json_dict(quantity)
    d["lo"] = float(_fmt(d["lo"]))
    d["hi"] = float(_fmt(d["hi"]))
    return d


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_graph(args) -> int:
    if args.action == "build":
        edges = []
        if args.edges:
            for token in args.edges.split(","):
                i, j = token.split("-")
                edges.append((int(i), int(j)))
        g = graph_from_edges(args.n, edges)
        payload = g.to_json_dict()
        if args.dist:
            payload["dist"] = _parse_dist(args.dist, g.n).to_json_value()
        _emit(args, payload)
        return 0
    if args.action == "catalog":
        g = catalog_get(args.name, args.n)
        _emit(args, g.to_json_dict())
        return 0
    if args.action == "complement":
        g = _load_graph(args.graph)
        _emit(args, complement(g).to_json_dict())
        return 0
    if args.action == "product":
        a = _load_pgraph(args.graph)
        b = _load_pgraph(args.graph2)
        _emit(args, and_product(a, b, args.vertex_budget).to_json_dict())
        return 0
    if args.action == "power":
        a = _load_pgraph(args.graph)
        _emit(args, and_power(a, args.n, args.vertex_budget).to_json_dict())
        return 0
    if args.action == "union":
        a = _load_pgraph(args.graph)
        b = _load_pgraph(args.graph2)
        pa = _parse_dist(args.pa or "1/2,1/2", 2)
        union, layout = disjoint_union([a, b], pa)
        payload = union.to_json_dict()
        payload["layout"] = {"block_sizes": list(layout.block_sizes),
                             "offsets": list(layout.offsets)}
        _emit(args, payload)
        return 0
    if args.action == "info":
        g = _load_graph(args.graph)
        degs = [g.degree(v) for v in range(g.n)]
        _emit(args, {
            "n": g.n,
            "edges": g.edge_count(),
            "regular": g.is_regular(),
            "min_degree": min(degs, default=0),
            "max_degree": max(degs, default=0),
        })
        return 0
    if args.action == "characteristic":
        chan = channel_from_json_dict(load_json(args.channel))
        _emit(args, characteristic_graph(chan).to_json_dict())
        return 0
    raise ValueError(f"unknown graph action '{args.action}'")


def _cmd_solve(args) -> int:
    budget = _budget(args)
    exit_code = 0
    if args.problem == "alpha":
        g = _load_graph(args.graph)
        res = alpha_exact(g, budget)
        exit_code = 0 if res.exact else 2
        _emit(args, {"alpha": res.size, "exact": res.exact,
                     "witness": res.witness.to_list()})
    elif args.problem == "omega":
        g = _load_graph(args.graph)
        res = omega_exact(g, budget)
        exit_code = 0 if res.exact else 2
        _emit(args, {"omega": res.size, "exact": res.exact,
                     "witness": res.witness.to_list()})
    elif args.problem == "chi":
        g = _load_graph(args.graph)
        res = chromatic_number_exact(g, budget)
        exit_code = 0 if res.exact else 2
        _emit(args, {"chi": res.count, "exact": res.exact,
                     "coloring": list(res.coloring.color_of)})
    elif args.problem == "hchi":
        pg = _load_pgraph(args.graph, args.dist)
        res = min_entropy_coloring(pg, args.mode)
        exit_code = 0 if res.exact else 2
        _emit(args, {"h_chi_bits": float(_fmt(res.value)), "exact": res.exact,
                     "coloring": list(res.coloring.color_of),
                     "colors": res.coloring.color_count})
    elif args.problem == "mis":
        g = _load_graph(args.graph)
        sets = maximal_independent_sets(g, args.mis_limit)
        _emit(args, {"count": len(sets),
                     "sets": [w.to_list() for w in sets]})
    else:
        raise ValueError(f"unknown solve problem '{args.problem}'")
    return exit_code


def _cmd_entropy(args) -> int:
    if args.quantity == "kappa":
        pg = _load_pgraph(args.graph, args.dist)
        sol = korner_entropy(pg, args.tol_bits)
        _emit(args, {"h_kappa_bits": float(_fmt(sol.value)),
                     "iterations": sol.iterations, "converged": sol.converged})
        return 0 if sol.converged else 2
    if args.quantity == "capdist":
        g = _load_graph(args.graph)
        opt = capacity_achieving_distribution(g, tol=args.tol_bits or 1e-5)
        _emit(args, {"capacity_bits": float(_fmt(opt.value)),
                     "distribution": [float(_fmt(float(w))) for w in opt.dist.weights],
                     "converged": opt.converged,
                     "exact": opt.exact_evaluator})
        return 0 if opt.converged else 2
    raise ValueError(f"unknown entropy quantity '{args.quantity}'")


def _cmd_bounds(args) -> int:
    budget = _budget(args)
    if args.quantity == "c0":
        g = _load_graph(args.graph)
        iv = c0_bounds(g, max_n=args.max_n, budget=budget,
                       vertex_budget=args.vertex_budget)
        _emit(args, _interval_payload("C0", iv))
        return 0
    if args.quantity == "h0":
        g = _load_graph(args.graph)
        iv = h0_bounds(g, max_n=args.max_n, budget=budget,
                       vertex_budget=args.vertex_budget)
        _emit(args, _interval_payload("H0", iv))
        return 0
    if args.quantity == "hbar":
        pg = _load_pgraph(args.graph, args.dist)
        iv = hbar_bounds(pg, max_n=args.max_n, budget=budget,
                         vertex_budget=args.vertex_budget)
        _emit(args, _interval_payload("Hbar", iv))
        return 0
    if args.quantity == "c":
        pg = _load_pgraph(args.graph, args.dist)
        iv = c_rel_bounds(pg, max_n=args.max_n, budget=budget,
                          vertex_budget=args.vertex_budget)
        _emit(args, _interval_payload("C", iv))
        return 0
    if args.quantity == "typical-alpha":
        pg = _load_pgraph(args.graph, args.dist)
        est = typical_alpha_estimate(pg, args.n, args.eps, budget,
                                     args.vertex_budget)
        _emit(args, {"quantity": "typical-alpha",
                     "value": float(_fmt(est.value)),
                     "certified": est.certified, "note": est.note,
                     "details": est.details})
        return 0
    raise ValueError(f"unknown bounds quantity '{args.quantity}'")


def _cmd_codec(args) -> int:
    if args.kind in ("si", "channel", "simulate") and not args.channel:
        raise ValueError(f"codec {args.kind} requires --channel")
    if args.kind in ("partial-si", "sum") and not args.spec:
        raise ValueError(f"codec {args.kind} requires --spec")
    if args.kind == "sum" and not args.composition:
        raise ValueError("codec sum requires --composition")
    if args.kind == "channel":
        chan = channel_from_json_dict(load_json(args.channel))
        book = build_channel_code(chan, args.n, args.target, _budget(args),
                                  args.vertex_budget)
        _emit(args, {"n": book.n, "codewords": book.to_json_list(),
                     "rate_bits": float(_fmt(book.rate())),
                     "independence_checked": book.independence_checked})
        return 0
    if args.kind == "si":
        chan = channel_from_json_dict(load_json(args.channel))
        p = _parse_dist(args.dist, chan.x_count) if args.dist \
            else Distribution.uniform(chan.x_count)
        code = build_si_code(chan, p, args.n, args.eps, _budget(args))
        _emit(args, {"n": code.n, "eps": code.eps,
                     "typical_count": len(code.typical_members),
                     "colors": code.color_count,
                     "codewords": code.color_codewords,
                     "escape_length": code.escape_length})
        return 0
    if args.kind == "partial-si":
        # spec file: {"channel": {...}, "g_map": [...], "joint": [[x,y,w],...]}
        from .codec import PartialSideInfoSpec, build_partial_si_code, sample_joint

        raw = load_json(args.spec)
        chan = channel_from_json_dict(raw["channel"])
        spec = PartialSideInfoSpec(
            chan, tuple(int(a) for a in raw["g_map"]),
            tuple((int(x), int(y), float(w)) for x, y, w in raw["joint"]))
        code = build_partial_si_code(spec, args.n, args.eps, _budget(args))
        rng = SplitMix64(args.seed)
        errors = 0
        bits_total = 0
        for _ in range(args.trials):
            xs, ys = sample_joint(spec, args.n, rng)
            a_seq = tuple(spec.g_map[y] for y in ys)
            bits = code.encode(xs, a_seq)
            if code.decode(ys, bits) != xs:
                errors += 1
            bits_total += len(bits)
        _emit(args, {"mode": "partial-si", "n": args.n, "eps": args.eps,
                     "components": spec.component_count,
                     "trials": args.trials, "errors": errors,
                     "rate_bits_per_symbol":
                         float(_fmt(bits_total / (args.n * args.trials)))})
        return 0 if errors == 0 else 1
    if args.kind == "sum":
        # spec file: {"channels": [{...}, ...]}; per-channel books are built
        # at the given block lengths and time-shared by the composition
        from .codec import build_sum_channel_code, sum_channel_roundtrip

        raw = load_json(args.spec)
        channels = [channel_from_json_dict(d) for d in raw["channels"]]
        composition = tuple(int(c) for c in args.composition.split(","))
        lens = [int(x) for x in args.book_n.split(",")] if args.book_n \
            else [1] * len(channels)
        books = [build_channel_code(ch, m, args.target, _budget(args),
                                    args.vertex_budget)
                 for ch, m in zip(channels, lens)]
        code = build_sum_channel_code(channels, books, composition)
        errors = sum_channel_roundtrip(code, args.trials, args.seed)
        _emit(args, {"mode": "sum", "composition": list(composition),
                     "letters": code.letter_count,
                     "messages": str(code.message_count()),
                     "rate_bits": float(_fmt(code.rate())),
                     "trials": args.trials, "errors": errors})
        return 0 if errors == 0 else 1
    if args.kind == "simulate":
        chan = channel_from_json_dict(load_json(args.channel))
        if args.mode == "channel":
            book = build_channel_code(chan, args.n, args.target, _budget(args),
                                      args.vertex_budget)
            errors = channel_roundtrip(book, chan, args.trials, args.seed)
            _emit(args, {"mode": "channel", "trials": args.trials,
                         "errors": errors,
                         "rate_bits": float(_fmt(book.rate()))})
            return 0 if errors == 0 else 1
        p = _parse_dist(args.dist, chan.x_count) if args.dist \
            else Distribution.uniform(chan.x_count)
        code = build_si_code(chan, p, args.n, args.eps, _budget(args))
        rng = SplitMix64(args.seed)
        rows = {x: chan.outputs_of(x) for x in range(chan.x_count)}
        cum = []
        acc = 0.0
        for w in p.weights:
            acc += float(w)
            cum.append(acc)
        errors = 0
        bits_total = 0
        for _ in range(args.trials):
            xs = []
            for _ in range(args.n):
                u = rng.random()
                xs.append(next(i for i, c in enumerate(cum)
                               if u < c or i == len(cum) - 1))
            x = tuple(xs)
            y = tuple(rows[s][rng.randrange(len(rows[s]))] for s in x)
            decoded, used = si_roundtrip(code, x, y)
            bits_total += used
            if decoded != x:
                errors += 1
        _emit(args, {"mode": "si", "trials": args.trials, "errors": errors,
                     "rate_bits_per_symbol":
                         float(_fmt(bits_total / (args.n * args.trials)))})
        return 0 if errors == 0 else 1
    raise ValueError(f"unknown codec kind '{args.kind}'")


def _cmd_eta(args) -> int:
    data = load_json(args.parts)
    parts = [pgraph_from_json_dict(d) for d in data]
    pa = Distribution(tuple(Fraction(p) for p in args.pa.split(",")))
    iv, product, k = eta_bounds(parts, pa, max_n=args.max_n,
                                vertex_budget=args.vertex_budget,
                                budget=_budget(args))
    payload = _interval_payload("eta", iv)
    payload["k"] = k
    payload["product_vertices"] = product.n
    _emit(args, payload)
    return 0


def _cmd_verify(args) -> int:
    matrix = None
    if args.haemers_matrix:
        matrix = matrix_from_json_dict(load_json(args.haemers_matrix))
    cfg = VerifyConfig(seed=args.seed, trials=args.trials, budget=_budget(args),
                       vertex_budget=args.vertex_budget,
                       haemers_matrix=matrix, tags=tuple(args.tag or ()),
                       threads=args.threads)
    report = full_suite(cfg)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report_to_csv(report))
    if args.out:
        save_json(args.out, report)
    summary = report["summary"]
    print(json.dumps(report if args.full_report else
                     {"summary": summary, "scenario_count": report["scenario_count"]},
                     indent=2, sort_keys=True))
    if summary["fail"] or summary["error"]:
        return 1
    if summary["undecided"]:
        return 2
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sp):
    sp.add_argument("--vertex-budget", type=int, default=1 << 16)
    sp.add_argument("--time-budget-ms", type=int, default=30_000)
    sp.add_argument("--node-budget", type=int, default=5_000_000)
    sp.add_argument("--tol-bits", type=float, default=1e-9)
    sp.add_argument("--seed", type=int, default=2024)
    sp.add_argument("--threads", type=int,
                    default=int(os.environ.get("ZEROERR_THREADS", "1")))
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", help="write the JSON payload to this file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zeroerr",
        description="zero-error coding quantities on probabilistic graphs")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="constructions and file I/O")
    g.add_argument("action", choices=("build", "product", "union", "complement",
                                      "power", "catalog", "info", "characteristic"))
    g.add_argument("--graph")
    g.add_argument("--graph2")
    g.add_argument("--channel")
    g.add_argument("--n", type=int)
    g.add_argument("--name")
    g.add_argument("--edges")
    g.add_argument("--dist")
    g.add_argument("--pa")
    _add_common(g)
    g.set_defaults(func=_cmd_graph)

    s = sub.add_parser("solve", help="exact combinatorial solvers")
    s.add_argument("problem", choices=("alpha", "chi", "omega", "hchi", "mis"))
    s.add_argument("--graph", required=True)
    s.add_argument("--dist")
    s.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    s.add_argument("--mis-limit", type=int, default=1_000_000)
    _add_common(s)
    s.set_defaults(func=_cmd_solve)

    e = sub.add_parser("entropy", help="Koerner entropy and capacity maximizers")
    e.add_argument("quantity", choices=("kappa", "capdist"))
    e.add_argument("--graph", required=True)
    e.add_argument("--dist")
    _add_common(e)
    e.set_defaults(func=_cmd_entropy)

    b = sub.add_parser("bounds", help="certified interval pipelines")
    b.add_argument("quantity", choices=("hbar", "c", "c0", "h0", "typical-alpha"))
    b.add_argument("--graph", required=True)
    b.add_argument("--dist")
    b.add_argument("--max-n", type=int, default=1)
    b.add_argument("--n", type=int, default=2)
    b.add_argument("--eps", type=float, default=0.0)
    _add_common(b)
    b.set_defaults(func=_cmd_bounds)

    c = sub.add_parser("codec", help="zero-error codes and simulation")
    c.add_argument("kind", choices=("si", "partial-si", "channel", "sum", "simulate"))
    c.add_argument("--channel")
    c.add_argument("--spec", help="partial-si or sum spec JSON")
    c.add_argument("--dist")
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--eps", type=float, default=0.5)
    c.add_argument("--target", choices=("exact", "greedy"), default="exact")
    c.add_argument("--trials", type=int, default=10_000)
    c.add_argument("--mode", choices=("si", "channel"), default="channel")
    c.add_argument("--composition", help="per-channel block counts, e.g. 3,2")
    c.add_argument("--book-n", help="per-channel book block lengths")
    _add_common(c)
    c.set_defaults(func=_cmd_codec)

    t = sub.add_parser("eta", help="union entropy through products of powers")
    t.add_argument("--parts", required=True,
                   help="JSON list of probabilistic graphs")
    t.add_argument("--pa", required=True, help="rational weights, e.g. 1/3,2/3")
    t.add_argument("--max-n", type=int, default=1)
    _add_common(t)
    t.set_defaults(func=_cmd_eta)

    v = sub.add_parser("verify", help="run the scenario suite")
    v.add_argument("--tag", action="append")
    v.add_argument("--trials", type=int, default=2000)
    v.add_argument("--csv", help="write the CSV summary table here")
    v.add_argument("--haemers-matrix",
                   help="JSON fitting matrix for the Schlafli complement")
    v.add_argument("--full-report", action="store_true")
    _add_common(v)
    v.set_defaults(func=_cmd_verify)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (Undecided, BudgetExceeded) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return 2
    except (ZeroErrError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
