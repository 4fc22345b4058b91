"""Command-line front end.

Exit codes: 0 success or SUITABLE, 1 usage or input error, 2 NOT-SUITABLE,
failed verification or bound not established, 3 a resource cap was hit
(solver limit, exhaustive cap, resampling or retry budget).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
import time

from . import __version__
from .constructions import RecursionConfig, construct_bounded_degree, construct_distance_two
from .errors import CapExceededError, ConstructionError, SepdimError
from .exact import DEFAULT_CAP, sdim_exact
from .graph import format_graph, random_regular, read_graph
from .lower_bounds import EXPANSION_CAP, certified_lower_bound, verify_expansion
from .separation import is_pairwise_suitable, read_family, write_family

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE, EXIT_CAP = 0, 1, 2, 3

CSV_COLUMNS = ["n", "d", "seed", "method", "size", "exact", "runtime_s", "verified"]
METHODS = ("exact", "dist2", "recursive")

EXPERIMENT_EPILOG = f"""\
CSV columns: {",".join(CSV_COLUMNS)}
  n, d, seed   graph descriptor (random d-regular graph on n vertices)
  method       exact | dist2 | recursive
  size         family size (for exact: the separation dimension)
  exact        exact separation dimension, when "exact" is among the methods
  runtime_s    seconds for this row; blank with --no-timing
  verified     true/false from the suitability verifier
"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _str_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _recursion_config(args) -> RecursionConfig:
    return RecursionConfig(base_cutoff=args.base_cutoff, c1=args.c1, c2=args.c2, seed=args.seed,
                           retries=args.retries)


def cmd_gen(args) -> int:
    G = random_regular(args.n, args.d, args.seed, method=args.method)
    text = format_graph(G)
    if args.output:
        with open(args.output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    G = read_graph(args.graph)
    result = sdim_exact(G, limit=args.limit, cap=args.cap)
    sys.stdout.write(result.to_text())
    return EXIT_CAP if result.exceeded else EXIT_OK


def cmd_construct(args) -> int:
    G = read_graph(args.graph)
    if args.method == "dist2":
        report = construct_distance_two(G, seed=args.seed)
    else:
        report = construct_bounded_degree(G, _recursion_config(args))
    sys.stdout.write(report.to_text())
    if args.output:
        write_family(report.family, args.output)
    return EXIT_OK if report.verified else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    G = read_graph(args.graph)
    F = read_family(args.family)
    verdict = is_pairwise_suitable(F, G)
    print(verdict)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_lower(args) -> int:
    G = read_graph(args.graph)
    try:
        exp = verify_expansion(G, args.delta, args.eps, args.mode, cap=args.cap,
                               samples=args.samples, seed=args.seed)
        sys.stdout.write(exp.to_text())
    except CapExceededError as exc:
        print(f"expansion.mode = {args.mode}")
        print(f"expansion.verdict = not checked ({exc})")
    cert = certified_lower_bound(G, args.delta, args.eps, cap=args.cap)
    sys.stdout.write(cert.to_text())
    return EXIT_OK if cert.established else EXIT_NEGATIVE


def experiment_rows(d_list, n_list, seeds, methods, cfg_kwargs=None, timing=True, cap=DEFAULT_CAP):
    """Yield one CSV row (dict) per (graph, method), in declaration order."""
    cfg_kwargs = cfg_kwargs or {}
    for d in d_list:
        for n in n_list:
            for seed in seeds:
                try:
                    G = random_regular(n, d, seed)
                except SepdimError as exc:
                    logging.getLogger(__name__).warning("skipping n=%d d=%d seed=%d: %s", n, d, seed, exc)
                    continue
                exact = None
                exact_time = 0.0
                exact_ok = None
                if "exact" in methods and n <= cap:
                    t0 = time.perf_counter()
                    res = sdim_exact(G, cap=cap)
                    exact_time = time.perf_counter() - t0
                    exact = res.value
                    exact_ok = bool(is_pairwise_suitable(res.family, G))
                for method in methods:
                    t0 = time.perf_counter()
                    if method == "exact":
                        if exact is None:
                            continue
                        size, verified, elapsed = exact, exact_ok, exact_time
                    else:
                        if method == "dist2":
                            report = construct_distance_two(G, seed=seed)
                        else:
                            report = construct_bounded_degree(G, RecursionConfig(seed=seed, **cfg_kwargs))
                        size = report.size
                        verified = bool(is_pairwise_suitable(report.family, G))
                        elapsed = time.perf_counter() - t0
                    yield {
                        "n": n, "d": d, "seed": seed, "method": method, "size": size,
                        "exact": "" if exact is None else exact,
                        "runtime_s": f"{elapsed:.4f}" if timing else "",
                        "verified": "true" if verified else "false",
                    }


def cmd_experiment(args) -> int:
    methods = _str_list(args.methods)
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        print(f"unknown method(s): {', '.join(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    cfg_kwargs = {"base_cutoff": args.base_cutoff, "c1": args.c1, "c2": args.c2, "retries": args.retries}
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    all_ok = True
    for row in experiment_rows(_int_list(args.d_list), _int_list(args.n_list), _int_list(args.seeds),
                               methods, cfg_kwargs, timing=not args.no_timing):
        writer.writerow(row)
        all_ok &= row["verified"] == "true"
    with open(args.csv, "w", encoding="ascii", newline="") as fh:
        fh.write(buf.getvalue())
    return EXIT_OK if all_ok else EXIT_NEGATIVE


def _add_recursion_flags(p):
    p.add_argument("--base-cutoff", type=int, default=8, help="max degree handled by distance-two coloring")
    p.add_argument("--c1", type=float, default=400.0, help="part count scale: r = ceil(c1*D/log2 D)")
    p.add_argument("--c2", type=float, default=0.5, help="per-part cap scale: t = max(1, floor(c2*log2 D))")
    p.add_argument("--retries", type=int, default=0, help="grow r and retry on non-convergence")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sepdim", description="Separation dimension of graphs: exact values, "
                                                "verified constructions and lower-bound certificates.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="random d-regular graph in edge-list format")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--method", choices=("auto", "pairing", "incremental"), default="auto")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="exact separation dimension of a small graph")
    p.add_argument("graph")
    p.add_argument("--limit", type=int, default=None, help="stop after proving sdim > LIMIT (exit 3)")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest vertex count accepted")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("construct", help="verified upper-bound family")
    p.add_argument("graph")
    p.add_argument("--method", choices=("dist2", "recursive"), default="recursive")
    p.add_argument("--seed", type=int, required=True)
    _add_recursion_flags(p)
    p.add_argument("-o", "--output", help="write the family file here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a family file against a graph")
    p.add_argument("graph")
    p.add_argument("family")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lower", help="lower-bound certificate")
    p.add_argument("graph")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="seed for sampled mode")
    p.add_argument("--cap", type=int, default=EXPANSION_CAP)
    p.set_defaults(func=cmd_lower)

    p = sub.add_parser("experiment", help="CSV sweep over random regular graphs",
                       epilog=EXPERIMENT_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--d-list", required=True)
    p.add_argument("--n-list", required=True)
    p.add_argument("--seeds", required=True)
    p.add_argument("--methods", default="exact,dist2", help="comma-separated subset of exact,dist2,recursive")
    p.add_argument("--csv", required=True)
    p.add_argument("--no-timing", action="store_true", help="leave runtime_s blank (byte-reproducible output)")
    _add_recursion_flags(p)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    except (SepdimError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
