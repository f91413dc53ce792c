"""Command-line front end.

Exit codes: 0 success, 1 internal error, 2 validation failure, 3 parameter range.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import formats
from .adversary import build_instance, instance_report
from .errors import (HypothesisViolated, InvalidInput, InvalidPartition, OracleTooLarge,
                     ParameterRange, ShallowLabError)
from .geometry import Point

log = logging.getLogger("shallowlab")

EXIT_OK, EXIT_INTERNAL, EXIT_VALIDATION, EXIT_RANGE = 0, 1, 2, 3


def _emit(obj, path):
    if path:
        formats.dump(obj, path)
    else:
        print(json.dumps(obj, indent=1))


def cmd_gen_instance(args) -> int:
    if args.m is not None:
        inst = build_instance(args.m, args.k, seed=args.seed)
        checks = inst.checks
        print(f"raw instance m={inst.m} beta={inst.beta} k={inst.k} k'={inst.k_prime} "
              f"lines={len(inst.lines)}")
    else:
        if args.n is None:
            raise ParameterRange("give --n (with --k) or --m (with --k)")
        inst, rep = instance_report(args.n, args.k, padding=not args.no_padding, seed=args.seed)
        checks = rep.checks
        print(f"instance n={rep.n} k={rep.k} beta={rep.beta} m={rep.m} k'={rep.k_prime} "
              f"n'={rep.n_prime} padding={len(inst.padding)} "
              f"crossing lower bound={rep.crossing_lower_bound}")
    for c in checks:
        print(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    _emit(formats.instance_to_json(inst), args.output)
    if args.tree_out:
        from .treecolor import tree_from_instance
        formats.dump(formats.tree_to_json(tree_from_instance(inst)), args.tree_out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION


def _load_points_and_instance(args):
    inst = None
    if args.instance:
        inst = formats.instance_from_json(formats.load(args.instance))
        points = inst.all_points
    elif args.points:
        points = formats.points_from_json(formats.load(args.points))
    else:
        raise InvalidInput("give --instance or --points")
    return inst, points


def cmd_eval(args) -> int:
    from .partition import (baseline_partition, coloring_from_partition, crossing_number,
                            sample_crossing)

    inst, points = _load_points_and_instance(args)
    k = args.k if args.k is not None else (inst.k if inst else None)
    if k is None:
        raise InvalidInput("give --k")
    if args.partition:
        part = formats.partition_from_json(formats.load(args.partition))
    else:
        part = baseline_partition(points, k)
    cert = crossing_number(points, part, k)
    out = {"certificate": formats.certificate_to_json(cert)}
    print(f"crossing number {cert.value} over {cert.classes} shallow-line classes; "
          f"witness y = {cert.witness.slope}*x + {cert.witness.intercept} "
          f"({cert.below_count} point(s) below)")
    status = EXIT_OK
    if inst is not None:
        col = coloring_from_partition(inst, part, k)
        holds = col.proposition_holds(cert.value)
        out["coloring"] = {"max_distinct": col.max_distinct, "class_sizes_ok": col.class_sizes_ok,
                           "vertices": len(col.vertices), "inequality_holds": holds}
        print(f"max distinct colors over conflict sets {col.max_distinct} "
              f"<= crossing + 1 = {cert.value + 1}: {'yes' if holds else 'NO'}")
        if not holds:
            status = EXIT_VALIDATION
    if args.sample_oracle:
        s = sample_crossing(points, part, k, samples=args.sample_oracle, seed=args.seed)
        out["sampler"] = {"value": s.value, "samples": s.samples, "shallow": s.shallow}
        ok = s.value <= cert.value
        print(f"random sampler max {s.value} from {s.samples} lines "
              f"({'<=' if ok else '>'} exact {cert.value})")
        if not ok:
            status = EXIT_VALIDATION
    _emit(out, args.output)
    return status


def cmd_tree_check(args) -> int:
    from .treecolor import validate_coloring

    tree = formats.tree_from_json(formats.load(args.tree))
    rep = validate_coloring(tree, args.k, args.cap, extra_at=args.extra_at)
    print(f"node size violations: {len(rep.node_size_violations)}; "
          f"oversized classes: {len(rep.class_violations)} (cap {args.cap})")
    _emit({"ok": rep.ok, "node_size_violations": rep.node_size_violations,
           "class_violations": {str(c): s for c, s in rep.class_violations.items()}}, args.output)
    return EXIT_OK if rep.ok else EXIT_VALIDATION


def cmd_tree_path(args) -> int:
    from .treecolor import greedy_colorful_path, slice_bound

    tree = formats.tree_from_json(formats.load(args.tree))
    status = EXIT_OK
    try:
        path, distinct = greedy_colorful_path(tree, args.k, args.cap)
    except HypothesisViolated as exc:
        path, distinct = exc.path, exc.distinct
        print(f"warning: {exc}; guarantee void")
        status = EXIT_VALIDATION
    bound = slice_bound(tree.beta) if tree.beta >= 1 else 0
    print(f"path {path} meets {distinct} distinct color(s); slice bound {bound}")
    _emit({"path": path, "distinct": distinct, "slice_bound": bound}, args.output)
    return status


def cmd_experiment(args) -> int:
    from .experiment import grid_pairs, run_grid, write_csv

    pairs = []
    if args.n_range:
        lo, hi = args.n_range
        pairs += grid_pairs([2 ** e for e in range(lo, hi + 1)], args.k_rule)
    for item in args.pairs or []:
        n, k = item.split(":")
        pairs.append((int(n), int(k)))
    rows = run_grid(pairs, seed=args.seed, exact_limit=args.exact_limit, timing=not args.no_timing)
    write_csv(rows, args.csv)
    if args.svg:
        from dataclasses import asdict

        from .plotting import plot_experiment
        plot_experiment([asdict(r) for r in rows], args.svg)
    for r in rows:
        print(f"n={r.n} k={r.k} beta={r.beta} measured={r.measured_crossing} "
              f"lower={r.lower_bound} exact={r.exact} {r.status}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .partition import exhaustive_min_crossing

    if args.convex:
        points = [Point(i, i * i) for i in range(1, args.convex + 1)]
    elif args.points:
        points = formats.points_from_json(formats.load(args.points))
    else:
        raise InvalidInput("give --points or --convex N")
    best, part, tried = exhaustive_min_crossing(points, args.k)
    print(f"minimum crossing number {best} over {tried} partition(s)")
    _emit({"minimum": best, "partitions": tried, "optimal": formats.partition_to_json(part)},
          args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    from .levels import k_level
    from .plotting import plot_instance

    inst = formats.instance_from_json(formats.load(args.instance))
    part = formats.partition_from_json(formats.load(args.partition)) if args.partition else None
    level = k_level(inst.lines, inst.k) if len(inst.lines) <= args.level_limit else None
    plot_instance(inst, args.output, partition=part, level=level)
    print(f"wrote {args.output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="shallowlab", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-instance", help="build a lower-bound instance")
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int, help="chain size (power of two); implies a raw instance")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--raw", action="store_true", help="with --m: no padding (the default there)")
    g.add_argument("--no-padding", action="store_true")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.add_argument("--tree-out", help="also write the instance's colored tree")
    g.set_defaults(func=cmd_gen_instance)

    e = sub.add_parser("eval-partition", help="exact crossing number of a k-partition")
    e.add_argument("--instance")
    e.add_argument("--points")
    e.add_argument("--partition", help="partition JSON; baseline partition if omitted")
    e.add_argument("--k", type=int)
    e.add_argument("--sample-oracle", type=int, default=0, metavar="N")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_eval)

    tc = sub.add_parser("tree-check", help="validate a tree multi-coloring")
    tc.add_argument("--tree", required=True)
    tc.add_argument("--k", type=int, required=True)
    tc.add_argument("--cap", type=int, required=True)
    tc.add_argument("--extra-at", choices=["root", "leaves"], default="root")
    tc.add_argument("-o", "--output")
    tc.set_defaults(func=cmd_tree_check)

    tp = sub.add_parser("tree-path", help="greedy colorful root-leaf path")
    tp.add_argument("--tree", required=True)
    tp.add_argument("--k", type=int)
    tp.add_argument("--cap", type=int)
    tp.add_argument("-o", "--output")
    tp.set_defaults(func=cmd_tree_path)

    x = sub.add_parser("experiment", help="lower bound vs baseline over an (n, k) grid")
    x.add_argument("--n-range", type=int, nargs=2, metavar=("LO", "HI"),
                   help="n = 2^LO .. 2^HI")
    x.add_argument("--k-rule", choices=["log", "2log", "n8", "n4"], default="log")
    x.add_argument("--pairs", nargs="*", metavar="N:K")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--exact-limit", type=int, default=200,
                   help="largest points + 3 * parts evaluated exactly")
    x.add_argument("--no-timing", action="store_true", help="write runtime_ms as 0")
    x.add_argument("--csv", required=True)
    x.add_argument("--svg")
    x.set_defaults(func=cmd_experiment)

    o = sub.add_parser("oracle", help="exhaustive minimum crossing number (n <= 9, k <= 3)")
    o.add_argument("--points")
    o.add_argument("--convex", type=int, metavar="N", help="use the points (i, i^2), i = 1..N")
    o.add_argument("--k", type=int, required=True)
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("render", help="draw an instance (and partition) to an image")
    r.add_argument("--instance", required=True)
    r.add_argument("--partition")
    r.add_argument("--level-limit", type=int, default=400)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParameterRange, OracleTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (InvalidPartition, InvalidInput, HypothesisViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ShallowLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
