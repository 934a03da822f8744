"""Command-line interface: detection, scoring, statistics, and experiments.

Data goes to stdout (or --out); diagnostics, the resolved seed, and the
resolved threshold go to stderr so every run can be replayed exactly.
Experiment subcommands emit CSV and can render a matplotlib figure next to
it via --plot.
"""

from __future__ import annotations

import argparse
import csv
import json
import resource
import sys
import time
from contextlib import contextmanager

from .detection import (
    ThresholdStrategy,
    extract_communities,
    resolve_threshold,
    run,
    run_parallel,
)
from .graph import GraphFormatError, degree_stats, load_graph
from .metrics import (
    externalize_cover,
    read_community_file,
    score_covers,
    write_community_file,
)
from .stream import new_seed, shuffle, weighted_shuffle
from .theory import er_experiment, fpe_experiment, sweep_d, variance_experiment


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _resolve_seed(seed) -> int:
    if seed is None:
        seed = new_seed()
    print(f"resolved seed = {seed}", file=sys.stderr)
    return seed


def _threshold(text: str) -> ThresholdStrategy:
    try:
        return ThresholdStrategy.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok]


def _d_range(text: str) -> list:
    """Accept '1:10' (inclusive) or a comma list like '1,2,5'."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return _int_list(text)


def cmd_detect(args) -> int:
    g = load_graph(args.edge_file, dedupe=args.dedupe)
    strategy = args.threshold
    stats = degree_stats(g) if strategy.kind != "fixed" else None
    d = resolve_threshold(strategy, stats)
    seed = _resolve_seed(args.seed)
    print(f"resolved D = {d} ({strategy})", file=sys.stderr)

    t0 = time.perf_counter()
    if args.weighted:
        if g.weights is None:
            raise ValueError("--weighted requires a third weight column")
        stream = weighted_shuffle(g.weights, seed)
    else:
        stream = shuffle(g.m, seed)
    if args.workers > 1:
        part = run_parallel(g, stream, d, args.workers)
    else:
        part = run(g, stream, d)
    elapsed = time.perf_counter() - t0

    cover = extract_communities(part, args.min_size)
    with _open_out(args.out) as fh:
        if args.format == "communities":
            write_community_file(externalize_cover(cover, g), fh)
        else:
            label_of = {}
            for ci, grp in enumerate(cover.groups):
                for node in grp:
                    label_of[node] = ci
            for node in range(g.n):
                ci = label_of.get(node)
                if ci is not None:
                    fh.write(f"{g.to_external(node)} {ci}\n")

    state_bytes = 2 * g.n * 8
    peak_kb = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    print(
        f"n = {g.n}  m = {g.m}  D = {d}  communities = {len(cover.groups)}  "
        f"singletons = {part.singleton_count}  dropped = {cover.dropped}",
        file=sys.stderr,
    )
    if g.self_loops_dropped or g.duplicates_dropped:
        print(
            f"dropped at load: {g.self_loops_dropped} self-loops, "
            f"{g.duplicates_dropped} duplicates",
            file=sys.stderr,
        )
    print(
        f"pass time = {elapsed:.3f}s  state = {state_bytes} bytes "
        f"(2 x {g.n} ints)  peak rss = {peak_kb} kB",
        file=sys.stderr,
    )
    return 0


def cmd_score(args) -> int:
    detected = read_community_file(args.detected_file)
    truth = read_community_file(args.truth_file)
    report = score_covers(
        detected, truth, universe=args.universe, with_nmi=args.metric != "f1"
    )
    rows = []
    if args.metric in ("f1", "all"):
        rows += [
            ("f1_forward", report.f1_forward),
            ("f1_backward", report.f1_backward),
            ("f1_avg", report.f1_avg),
        ]
    if args.metric in ("nmi", "all"):
        rows.append(("nmi", report.nmi))
    with _open_out(args.out) as fh:
        if args.format == "json":
            json.dump({k: v for k, v in rows}, fh, indent=2)
            fh.write("\n")
        elif args.format == "csv":
            w = csv.writer(fh)
            w.writerow(["metric", "value"])
            for k, v in rows:
                w.writerow([k, f"{v:.6f}"])
        else:
            for k, v in rows:
                fh.write(f"{k:<12} {v:.4f}\n")
    return 0


def cmd_degree_stats(args) -> int:
    g = load_graph(args.edge_file, dedupe=args.dedupe)
    stats = degree_stats(g)
    with _open_out(args.out) as fh:
        w = csv.writer(fh)
        w.writerow(["n", "m", "d_avg", "d_med", "d_mode", "d_max", "density"])
        w.writerow(
            [
                g.n,
                g.m,
                f"{stats.d_avg:.6g}",
                f"{stats.d_med:.6g}",
                "" if stats.d_mode is None else stats.d_mode,
                stats.d_max,
                f"{stats.density:.6g}",
            ]
        )
    if args.plot:
        from .plots import plot_degree_histogram

        print(f"figure -> {plot_degree_histogram(stats, args.plot)}", file=sys.stderr)
    return 0


def cmd_er_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    results = []
    with _open_out(args.out) as fh:
        w = csv.writer(fh)
        w.writerow(
            ["n", "p", "trials", "completed", "skipped", "mean_ratio", "std_error"]
        )
        for n in args.n:
            for p in args.p:
                r = er_experiment(
                    n,
                    p,
                    args.trials,
                    threshold=args.threshold,
                    seed=seed,
                    workers=args.workers,
                )
                results.append(r)
                w.writerow(
                    [
                        r.n,
                        r.p,
                        r.trials,
                        r.completed,
                        r.skipped,
                        f"{r.mean_ratio:.4f}",
                        f"{r.std_error:.5f}",
                    ]
                )
    if args.plot:
        from .plots import plot_er_results

        print(f"figure -> {plot_er_results(results, args.plot)}", file=sys.stderr)
    return 0


def cmd_sweep_d(args) -> int:
    g = load_graph(args.edge_file, dedupe=args.dedupe)
    truth = read_community_file(args.truth_file)
    seed = _resolve_seed(args.seed)
    sweep = sweep_d(g, truth, args.d_range, args.runs, seed, min_size=args.min_size)
    with _open_out(args.out) as fh:
        w = csv.writer(fh)
        w.writerow(["d", "f1", "q"])
        for d, f1, q in zip(sweep.d_values, sweep.f1_scores, sweep.q_ratios):
            w.writerow([d, f"{f1:.4f}", f"{q:.4f}"])
    markers = ", ".join(f"d_{k} = {v}" for k, v in sweep.markers.items())
    print(f"best D = {sweep.best_d}; {markers}", file=sys.stderr)
    if args.plot:
        from .plots import plot_sweep

        print(f"figure -> {plot_sweep(sweep, args.plot)}", file=sys.stderr)
    return 0


def cmd_verify_bound(args) -> int:
    g = load_graph(args.edge_file, dedupe=args.dedupe)
    cover = read_community_file(args.community_file)
    seed = _resolve_seed(args.seed)
    print(f"resolved D = {args.d}", file=sys.stderr)
    reports = []
    with _open_out(args.out) as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "community",
                "size",
                "d",
                "trials",
                "empirical_mean",
                "std_error",
                "bound",
                "within_bound",
            ]
        )
        for ci, grp in enumerate(cover.groups):
            internal = [g.to_internal(u) for u in grp]
            r = fpe_experiment(g, internal, args.d, args.trials, seed + ci)
            reports.append(r)
            w.writerow(
                [
                    ci,
                    len(grp),
                    r.threshold,
                    r.trials,
                    f"{r.empirical_mean:.4f}",
                    f"{r.std_error:.5f}",
                    f"{r.bound:.4f}",
                    r.empirical_mean <= r.bound + 3 * r.std_error,
                ]
            )
    if args.plot:
        from .plots import plot_fpe_reports

        print(f"figure -> {plot_fpe_reports(reports, args.plot)}", file=sys.stderr)
    return 0


def cmd_variance(args) -> int:
    g = load_graph(args.edge_file, dedupe=args.dedupe)
    truth = read_community_file(args.truth_file)
    strategy = args.threshold
    stats = degree_stats(g) if strategy.kind != "fixed" else None
    d = resolve_threshold(strategy, stats)
    seed = _resolve_seed(args.seed)
    print(f"resolved D = {d} ({strategy})", file=sys.stderr)
    r = variance_experiment(g, truth, d, args.runs, seed, min_size=args.min_size)
    with _open_out(args.out) as fh:
        w = csv.writer(fh)
        w.writerow(["runs", "d", "f1_mean", "f1_std", "count_mean", "count_std"])
        w.writerow(
            [
                r.runs,
                d,
                f"{r.f1_mean:.6f}",
                f"{r.f1_std:.6f}",
                f"{r.count_mean:.2f}",
                f"{r.count_std:.2f}",
            ]
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoda",
        description="Streaming community detection and its evaluation harnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=True):
        p.add_argument("--out", help="write data here instead of stdout")
        p.add_argument(
            "--dedupe",
            action="store_true",
            help="drop duplicate undirected edges instead of rejecting them",
        )
        if seed:
            p.add_argument(
                "--seed",
                type=int,
                help="64-bit seed; drawn from system entropy (and printed) if absent",
            )

    p = sub.add_parser(
        "detect",
        help="run the streaming detector over an edge-list file",
        description="Output: 'external_id community_label' per node (pairs) "
        "or one community per line (communities).",
    )
    p.add_argument("edge_file")
    add_common(p)
    p.add_argument(
        "--threshold",
        type=_threshold,
        default=ThresholdStrategy("mode"),
        help="mode | median | avg | fixed:D (default: mode)",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument(
        "--min-size", type=int, default=1, help="drop smaller communities"
    )
    p.add_argument(
        "--weighted",
        action="store_true",
        help="stream edges with probability proportional to their weight",
    )
    p.add_argument("--format", choices=("pairs", "communities"), default="pairs")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser(
        "score",
        help="score a detected community file against ground truth",
        description="CSV schema: metric,value.",
    )
    p.add_argument("detected_file")
    p.add_argument("truth_file")
    p.add_argument("--metric", choices=("f1", "nmi", "all"), default="all")
    p.add_argument(
        "--universe",
        type=int,
        help="node universe size for the NMI (default: nodes present in either cover)",
    )
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--out", help="write data here instead of stdout")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser(
        "degree-stats",
        help="degree distribution summary of an edge-list file",
        description="CSV schema: n,m,d_avg,d_med,d_mode,d_max,density.",
    )
    p.add_argument("edge_file")
    add_common(p, seed=False)
    p.add_argument("--plot", help="render the degree histogram to this file")
    p.set_defaults(func=cmd_degree_stats)

    p = sub.add_parser(
        "er-bench",
        help="largest-community ratio on random G(n,p) graphs",
        description="CSV schema: n,p,trials,completed,skipped,mean_ratio,std_error.",
    )
    p.add_argument("--n", type=_int_list, required=True, help="comma list, e.g. 10,100")
    p.add_argument("--p", type=_float_list, required=True, help="comma list, e.g. 0.5,1.0")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument(
        "--threshold",
        type=_threshold,
        default=ThresholdStrategy("mode"),
        help="mode | median | avg | fixed:D (default: mode, resolved per graph)",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write data here instead of stdout")
    p.add_argument("--plot", help="render ratio-vs-p curves to this file")
    p.set_defaults(func=cmd_er_bench)

    p = sub.add_parser(
        "sweep-d",
        help="average F1 against ground truth for a range of thresholds",
        description="CSV schema: d,f1,q with q = f1 / max f1. "
        "Singletons are excluded by default (--min-size 2).",
    )
    p.add_argument("edge_file")
    p.add_argument("truth_file")
    add_common(p)
    p.add_argument("--d-range", type=_d_range, default=list(range(1, 11)),
                   help="'1:10' inclusive or comma list (default 1:10)")
    p.add_argument("--runs", type=int, default=1, help="runs averaged per D")
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--plot", help="render the F1-vs-D curve to this file")
    p.set_defaults(func=cmd_sweep_d)

    p = sub.add_parser(
        "verify-bound",
        help="Monte-Carlo check of the boundary-merge expectation bound",
        description="CSV schema: community,size,d,trials,empirical_mean,"
        "std_error,bound,within_bound.",
    )
    p.add_argument("edge_file")
    add_common(p)
    p.add_argument(
        "--community-file",
        required=True,
        help="communities to check, one per line (external ids)",
    )
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--plot", help="render empirical-vs-bound bars to this file")
    p.set_defaults(func=cmd_verify_bound)

    p = sub.add_parser(
        "variance",
        help="spread of F1 and community count over repeated runs",
        description="CSV schema: runs,d,f1_mean,f1_std,count_mean,count_std.",
    )
    p.add_argument("edge_file")
    p.add_argument("truth_file")
    add_common(p)
    p.add_argument(
        "--threshold",
        type=_threshold,
        default=ThresholdStrategy("mode"),
        help="mode | median | avg | fixed:D (default: mode)",
    )
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--min-size", type=int, default=1)
    p.set_defaults(func=cmd_variance)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
