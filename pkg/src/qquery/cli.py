"""Command-line entry point: ``qquery run|bench|verify|analyze-bbht``.

Exit codes: 0 success, 1 usage or input error (or a failed verification),
2 when the algorithm answers FALSE (no solution, negative cycle, ...).
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import acceptance, dp, geometry, graphs, primitives, tools
from .harness import REGISTRY, fit_power_law, run_trials, write_stats_csv
from .oracle import FALSE, Meter, Oracle, RngStream

DEFAULT_SEED = acceptance.DEFAULT_SEED
EXIT_OK, EXIT_USAGE, EXIT_FALSE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input formats


def parse_values(text: str) -> np.ndarray:
    """Whitespace-separated numbers (any line layout)."""
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        if line.lstrip().startswith("#"):
            continue
        for tok in line.split():
            try:
                out.append(float(tok))
            except ValueError:
                raise ValueError(f"line {n}: non-numeric value {tok!r}") from None
    if not out:
        raise ValueError("line 1: no values")
    arr = np.array(out)
    return arr.astype(np.int64) if np.all(arr == np.round(arr)) else arr


def parse_pairs(text: str) -> tuple[np.ndarray, list[str]]:
    """One ``value label`` pair per line (for mindiff)."""
    f, g = [], []
    for n, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if len(parts) != 2:
            raise ValueError(f"line {n}: expected 'value label'")
        try:
            f.append(float(parts[0]))
        except ValueError:
            raise ValueError(f"line {n}: non-numeric value {parts[0]!r}") from None
        g.append(parts[1])
    if not f:
        raise ValueError("line 1: no entries")
    return np.array(f), g


def _json_num(x):
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return None  # unreachable / impossible
        return int(x) if x == int(x) else x
    return x


def _dist_list(a) -> list:
    return [_json_num(v) for v in np.asarray(a).ravel()] if np.ndim(a) == 1 else [
        [_json_num(v) for v in row] for row in np.asarray(a)
    ]


# ---------------------------------------------------------------------------
# run


def _graph_algo(name):
    def go(args, rng, meter):
        g = graphs.read_graph(args.input)
        if name == "bfs":
            return graphs.bfs(g, args.source, args.eps_inv, rng, args.model, meter), False
        if name == "dfs":
            res = graphs.dfs(g, args.source, args.eps_inv, rng, args.model, meter)
            return {"order": res.order, "parent": [int(p) for p in res.parent]}, False
        if name == "spnw":
            res = graphs.spnw(g, args.source, args.eps_inv, rng, args.model, meter)
            if res is FALSE:
                return "negative-cycle", True
            return {"dist": _dist_list(res.dist), "prev": [int(p) for p in res.prev]}, False
        if name == "sssp":
            res = graphs.sssp_nonneg(g, args.source, args.eps_inv, rng, args.model, meter)
            return {"dist": _dist_list(res.dist), "prev": [int(p) for p in res.prev]}, False
        if name == "apsp":
            res = graphs.apsp(g, args.eps_inv, rng, args.model, meter)
            if res is FALSE:
                return "negative-cycle", True
            return _dist_list(res), False
        if name == "matching":
            res = graphs.bipartite_matching(g, args.eps_inv, rng, args.model, meter)
            return {"size": res.size, "pairs": [[u, v] for u, v in sorted(res.pairs.items())]}, False
        raise AssertionError(name)

    return go


def _run_findsol(args, rng, meter):
    values = parse_values(Path(args.input).read_text())
    out = tools.findsol(Oracle.from_array(values != 0), args.eps_inv, rng, meter=meter)
    return (int(out.result), False) if out.found else ("no-solution", True)


def _run_findall(args, rng, meter):
    values = parse_values(Path(args.input).read_text())
    return sorted(tools.findall(Oracle.from_array(values != 0), args.eps_inv, rng, meter=meter)), False


def _run_minfind(args, rng, meter):
    values = parse_values(Path(args.input).read_text())
    y = tools.minfind(Oracle.from_array(values), args.eps_inv, rng, meter)
    return {"index": y, "value": _json_num(values[y])}, False


def _run_mindiff(args, rng, meter):
    f, g = parse_pairs(Path(args.input).read_text())
    res = tools.mindiff(Oracle.from_array(f), Oracle.from_array(np.array(g, dtype=object)), args.d,
                        args.eps_inv, rng, meter=meter)
    return [
        None if e.fictitious else {"index": e.index, "value": _json_num(e.f_value), "label": e.g_value}
        for e in res
    ], False


def _run_threesum(args, rng, meter):
    values = parse_values(Path(args.input).read_text())
    return bool(tools.threesum(values.astype(np.int64), args.eps_inv, rng, meter)), False


def _line_doc(line: geometry.Line) -> dict:
    return {"count": line.count, "base": [_json_num(x) for x in line.base],
            "direction": [_json_num(x) for x in line.direction]}


def _run_zn(args, rng, meter):
    pts = geometry.read_points(args.input)
    return _line_doc(geometry.maxpoints_zn(pts, args.eps_inv, rng, meter)), False


def _run_r2(args, rng, meter):
    text = Path(args.input).read_text()
    try:
        pts = geometry.parse_points(text, integer=True)
        pts, exact, delta = [tuple(int(c) for c in q) for q in pts], True, 0.0
    except ValueError:
        pts, exact, delta = geometry.parse_points(text, integer=False), False, args.delta
    return _line_doc(geometry.maxpoints_r2(pts, args.eps_inv, rng, delta, exact, meter)), False


def _run_coins(args, rng, meter):
    coins, target = dp.parse_coins(Path(args.input).read_text())
    res = dp.coinchange(coins, target, args.eps_inv, rng, meter)
    if not math.isfinite(res.count):
        return "impossible", True
    return res.count, False


def _run_subarray(args, rng, meter):
    a = dp.parse_matrix(Path(args.input).read_text())
    rect, total = dp.subarray_sum(a, args.eps_inv, rng, meter)
    return {"rect": list(rect.as_tuple()), "sum": _json_num(total)}, False


ALGORITHMS = {
    "findsol": _run_findsol,
    "findall": _run_findall,
    "minfind": _run_minfind,
    "mindiff": _run_mindiff,
    "threesum": _run_threesum,
    "bfs": _graph_algo("bfs"),
    "dfs": _graph_algo("dfs"),
    "spnw": _graph_algo("spnw"),
    "sssp": _graph_algo("sssp"),
    "apsp": _graph_algo("apsp"),
    "matching": _graph_algo("matching"),
    "maxpoints_zn": _run_zn,
    "maxpoints_r2": _run_r2,
    "coinchange": _run_coins,
    "subarray": _run_subarray,
}


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    if args.algo not in ALGORITHMS:
        raise UsageError(f"unknown algorithm {args.algo!r}; choose from {', '.join(sorted(ALGORITHMS))}")
    if not args.input:
        raise UsageError("run needs --input")
    meter = Meter()
    rng = RngStream(args.seed, 0)
    result, is_false = ALGORITHMS[args.algo](args, rng, meter)
    doc = {
        "result": result,
        "charged_queries": meter.charged_queries,
        "classical_peeks": meter.classical_peeks,
        "rounds": meter.grover_runs,
        "seed": args.seed,
    }
    _emit(json.dumps(doc, sort_keys=True) + "\n", args.output)
    return EXIT_FALSE if is_false else EXIT_OK


# ---------------------------------------------------------------------------
# bench


def _parse_param(text: str):
    key, sep, raw = text.partition("=")
    if not sep:
        raise UsageError(f"--param expects key=value, got {text!r}")
    if raw.lower() == "none":
        return key, None
    for cast in (int, float):
        try:
            return key, cast(raw)
        except ValueError:
            pass
    return key, raw


def cmd_bench(args) -> int:
    if args.algo not in REGISTRY:
        raise UsageError(f"unknown experiment {args.algo!r}; choose from {', '.join(sorted(REGISTRY))}")
    exp = REGISTRY[args.algo]
    params = dict(_parse_param(p) for p in args.param)
    if args.eps_inv is not None and "eps_inv" in exp.defaults:
        params["eps_inv"] = args.eps_inv
    if args.lam is not None and "lam" in exp.defaults:
        params["lam"] = args.lam
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else [None]
    stats = []
    for k, size in enumerate(sizes):
        p = dict(params)
        if size is not None:
            p[exp.size_param] = size
        try:
            stats.append(run_trials(exp, args.trials, args.seed + k, **p))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    fit = None
    if len(sizes) >= 3 and sizes[0] is not None:
        fit = fit_power_law([(s, st.cost_mean) for s, st in zip(sizes, stats)])
    if args.format == "json":
        rows = [st.row(exp.size_param) for st in stats]
        doc = {"stats": rows, "fit": fit.summary() if fit else None}
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.output)
    else:
        buf = io.StringIO()
        write_stats_csv(stats, buf)
        _emit(buf.getvalue(), args.output)
        if fit and args.fit_output:
            Path(args.fit_output).write_text(json.dumps(fit.summary(), sort_keys=True) + "\n")
    if args.svg:
        _chart(stats, exp.size_param, args.svg, args.algo)
    return EXIT_OK


def _chart(stats, size_param: str, path: str, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    xs = [st.params.get(size_param) for st in stats]
    ys = [st.cost_mean for st in stats]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    if all(x is not None for x in xs) and len(xs) > 1:
        ax.loglog(xs, ys, "o-", base=2)
        ax.set_xlabel(size_param)
    else:
        ax.plot(range(len(ys)), ys, "o")
    ax.set_ylabel("mean charged queries")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


# ---------------------------------------------------------------------------
# verify and analyze-bbht


def cmd_verify(args) -> int:
    criteria = [c for c in args.criteria.split(",") if c] if args.criteria else None
    try:
        rows = acceptance.run_suite(
            args.seed, criteria, args.lam,
            progress=(lambda name: print(f"running {name}", file=sys.stderr)) if args.verbose else None,
        )
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    _emit(acceptance.report_csv(rows), args.output)
    return EXIT_OK if acceptance.all_passed(rows) else EXIT_USAGE


def cmd_analyze(args) -> int:
    if args.lam is not None:
        lambdas = [args.lam]
    else:
        lambdas = acceptance.SWEEP_LAMBDAS
    if args.m > args.n / 2:
        m0 = None
    else:
        m0 = primitives.m0_bound(args.n, args.m)
    try:
        rows = primitives.lambda_sweep(args.n, args.m, lambdas, args.trials, RngStream(args.seed, 0), args.j_rule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        doc = {
            "n": args.n, "m": args.m, "seed": args.seed, "m0": m0,
            "tan_roots": primitives.tan_fixed_points(2),
            "rows": [
                {"lambda": r.lam, "mean_cost": r.mean_cost, "cost_ci95": r.cost_ci95,
                 "fail_rate": r.fail_rate, "fail_lo": r.fail_ci95[0], "fail_hi": r.fail_ci95[1],
                 "trials": r.trials, "proven": r.lam < primitives.LAMBDA_PROVEN_MAX}
                for r in rows
            ],
        }
        _emit(json.dumps(doc, sort_keys=True, indent=2) + "\n", args.output)
    else:
        buf = io.StringIO()
        primitives.write_sweep_csv(rows, buf)
        _emit(buf.getvalue(), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qquery", description="Simulated quantum search algorithms in the query model.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, eps=True):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed (default {DEFAULT_SEED})")
        p.add_argument("--output", help="write here instead of stdout")
        if eps:
            p.add_argument("--eps-inv", type=float, default=None, help="inverse failure probability")

    run = sub.add_parser("run", help="run one algorithm on an input file")
    run.add_argument("--algo", required=True)
    run.add_argument("--input")
    run.add_argument("--source", type=int, default=0, help="source vertex for single-source graph searches")
    run.add_argument("--model", choices=["edgelist", "matrix"], default="edgelist")
    run.add_argument("--d", type=int, default=1, help="answer size for mindiff")
    run.add_argument("--delta", type=float, default=1e-9, help="parallelism tolerance for real-valued points")
    run.add_argument("--format", choices=["json"], default="json")
    common(run)

    bench = sub.add_parser("bench", help="Monte-Carlo statistics for a registered experiment")
    bench.add_argument("--algo", required=True, help="experiment name")
    bench.add_argument("--trials", type=int, default=1000)
    bench.add_argument("--sizes", help="comma-separated sizes; three or more also fit a power law")
    bench.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    bench.add_argument("--lambda", dest="lam", type=float)
    bench.add_argument("--format", choices=["csv", "json"], default="csv")
    bench.add_argument("--fit-output", help="with --format csv: write the fit JSON here")
    bench.add_argument("--svg", help="also draw mean cost against size as an SVG chart")
    common(bench)

    verify = sub.add_parser("verify", help="run the acceptance suite")
    verify.add_argument("--criteria", help=f"comma-separated subset of {','.join(acceptance.CRITERIA)}")
    verify.add_argument("--lambda", dest="lam", type=float, help="override lambda in the BBHT bound checks")
    verify.add_argument("--format", choices=["csv"], default="csv")
    verify.add_argument("--verbose", action="store_true")
    common(verify, eps=False)

    analyze = sub.add_parser("analyze-bbht", help="BBHT cost and failure as a function of lambda")
    analyze.add_argument("--n", type=int, default=4096)
    analyze.add_argument("--m", type=int, default=1)
    analyze.add_argument("--trials", type=int, default=10_000)
    analyze.add_argument("--lambda", dest="lam", type=float, help="a single lambda instead of the sweep")
    analyze.add_argument("--j-rule", choices=["floor", "ceil"], default="floor")
    analyze.add_argument("--format", choices=["csv", "json"], default="csv")
    common(analyze, eps=False)
    return parser


COMMANDS = {"run": cmd_run, "bench": cmd_bench, "verify": cmd_verify, "analyze-bbht": cmd_analyze}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "eps_inv", 1000.0) is None and args.command == "run":
        args.eps_inv = 1000.0
    if getattr(args, "eps_inv", None) is not None and args.eps_inv <= 1:
        print("qquery: error: --eps-inv must exceed 1", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "trials", 1) < 1:
        print("qquery: error: --trials must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qquery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"qquery: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
