"""Command-line harness: gen, build, verify, bench, selftest.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

import argparse
import sys

from . import harness, range2d, range3d, report, stabbing, workload
from .errors import FatRangeError
from .geometry import AspectBound, Box3, Rect2, Universe


def _parser():
    p = argparse.ArgumentParser(prog="fatrange",
                                description="fat orthogonal range reporting and stabbing toolkit")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a dataset or query workload file")
    g.add_argument("--kind", required=True,
                   choices=["points2", "points3", "boxes3", "rects2"])
    g.add_argument("--shape", default=None,
                   choices=["square", "rect", "cube", "box", "point"],
                   help="query shape for rects2/boxes3/points3 workloads")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--u", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--alpha", type=float, default=2.0)
    g.add_argument("--dist", default="uniform", choices=["uniform", "clustered"])
    g.add_argument("--centers", type=int, default=8)
    g.add_argument("--spread", type=float, default=0.05)
    g.add_argument("--out", required=True)

    for name, help_ in (("build", "build a structure and print its stats"),
                        ("verify", "check a structure against the oracles"),
                        ("bench", "time queries and write a counter CSV")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--structure", required=True, choices=list(harness.STRUCTURES))
        s.add_argument("--data", required=True)
        s.add_argument("--d", type=int, default=None)
        s.add_argument("--b", type=int, default=2)
        s.add_argument("--alpha", type=float, default=2.0)
        if name != "build":
            s.add_argument("--queries", required=True)
            s.add_argument("--out", default=None)
        if name == "bench":
            s.add_argument("--reps", type=int, default=1)
            s.add_argument("--plots", default=None,
                           help="directory for figures rendered next to the CSV")
            s.add_argument("--sweep-u", default=None, metavar="LO:HI",
                           help="also run the universe-scaling sweep over 2^LO..2^HI")
            s.add_argument("--sweep-n", type=int, default=2000)

    sub.add_parser("selftest", help="run the built-in fixed-seed checks")
    return p


def _load(path):
    kind, u, records = workload.read_file(path)
    return kind, u, records


def _cmd_gen(args):
    if args.kind in ("points2", "points3") and args.shape in (None, "point"):
        spec = workload.DatasetSpec(kind=args.kind, n=args.n, u=args.u, seed=args.seed,
                                    distribution=args.dist, centers=args.centers,
                                    spread=args.spread, alpha=args.alpha)
        records = workload.generate_dataset(spec)
    elif args.kind == "boxes3" and args.shape is None:
        spec = workload.DatasetSpec(kind="boxes3", n=args.n, u=args.u, seed=args.seed,
                                    alpha=args.alpha)
        records = workload.generate_dataset(spec)
    else:
        shape = args.shape or {"rects2": "square", "boxes3": "cube", "points3": "point"}[args.kind]
        spec = workload.QuerySpec(shape=shape, count=args.n, u=args.u, seed=args.seed,
                                  alpha=args.alpha)
        records = workload.generate_queries(spec)
    workload.write_file(args.out, records, args.u, kind=args.kind)
    print(f"wrote {args.kind} n={args.n} U={args.u} -> {args.out}")
    return 0


def _cmd_build(args):
    _, u, records = _load(args.data)
    if args.structure == "range2d":
        idx = range2d.build2d(records, universe=Universe(u.bit_length() - 1), d=args.d)
        nonempty = sum(1 for r in idx.rects if r.points)
        print(f"range2d: n={len(records)} U={u} d={idx.d}")
        print(f"  marked nodes={idx.sub.marked_node_count} rectangles={len(idx.rects)} "
              f"(nonempty={nonempty})")
        print(f"  max rectangle points={max((len(r.points) for r in idx.rects), default=0)} "
              f"(cap {6 * idx.d})")
        print(f"  digest={idx.digest()[:16]}")
    elif args.structure == "range3d":
        root, stats = range3d.build3d(records, universe=Universe(u.bit_length() - 1), b=args.b)
        print(f"range3d: n={stats.n} U={u} b={args.b} top_r={root.r}")
        print(f"  nodes={stats.nodes} grid_levels={stats.grid_levels} "
              f"point_refs={stats.point_refs} label_refs={stats.label_refs}")
        print(f"  ref cap n*(1+4*levels)={stats.n * (1 + 4 * stats.grid_levels)}")
    else:
        idx = stabbing.build_stab(records, universe=Universe(u.bit_length() - 1),
                                  bound=AspectBound(args.alpha))
        print(f"stab: boxes={len(idx.boxes)} U={u} alpha={args.alpha}")
        print(f"  nodes={idx.node_count()} entries={idx.total_entries} "
              f"rejected={len(idx.rejected)}")
        for i, why in idx.rejected[:10]:
            print(f"  rejected box {i}: {why}", file=sys.stderr)
    return 0


def _cmd_verify(args):
    _, u, records = _load(args.data)
    _, qu, queries = _load(args.queries)
    rep = harness.verify(args.structure, records, u, queries,
                         d=args.d, b=args.b, alpha=args.alpha)
    text = "\n".join(rep.lines())
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if rep.ok else 1


def _cmd_bench(args):
    _, u, records = _load(args.data)
    _, _, queries = _load(args.queries)
    index = harness.build_structure(args.structure, records, u,
                                    d=args.d, b=args.b, alpha=args.alpha)
    rows, summary = harness.bench(args.structure, index, queries,
                                  alpha=args.alpha, repetitions=args.reps)
    out = args.out or "bench.csv"
    report.write_bench_csv(out, rows, summary)
    print(f"bench: {len(rows)} queries -> {out} "
          f"(median {summary['wall_time_ns']} ns, median k {summary['reported_k']})")
    figures = []
    if args.plots:
        figures += report.render_bench_figures(rows, args.plots)
    if args.sweep_u:
        lo, hi = (int(v) for v in args.sweep_u.split(":"))
        sweep = harness.scaling_sweep(n=args.sweep_n, u_logs=range(lo, hi + 1))
        sweep_path = (args.out or "bench.csv").replace(".csv", "") + "_scaling.csv"
        report.write_scaling_csv(sweep_path, sweep)
        print(f"scaling sweep -> {sweep_path}")
        if args.plots:
            figures += report.render_scaling_figure(sweep, args.plots)
    for f in figures:
        print(f"figure -> {f}")
    return 0


def _selftest_lines():
    from . import smallset

    results = []

    def check(name, fn):
        try:
            fn()
            results.append((name, True, ""))
        except Exception as err:  # noqa: BLE001 - report, don't crash
            results.append((name, False, f"{type(err).__name__}: {err}"))

    def geometry_check():
        from .geometry import decompose_fat_box3
        q = Box3(3, 10, 0, 11, 5, 9)
        vox = set()
        for c in decompose_fat_box3(q, AspectBound(3)):
            for x in range(c.x_lo, c.x_hi + 1):
                for y in range(c.y_lo, c.y_hi + 1):
                    for z in range(c.z_lo, c.z_hi + 1):
                        vox.add((x, y, z))
        assert len(vox) == 8 * 12 * 5

    def range2d_check():
        pts = workload.generate_dataset(workload.DatasetSpec("points2", 300, 1024, seed=21))
        qs = workload.generate_queries(workload.QuerySpec("square", 120, 1024, seed=22))
        qs += workload.generate_queries(workload.QuerySpec("rect", 80, 1024, seed=23, alpha=3))
        rep = harness.verify("range2d", pts, 1024, qs, alpha=3)
        assert rep.ok, rep.lines()

    def range3d_check():
        pts = workload.generate_dataset(workload.DatasetSpec("points3", 300, 512, seed=31))
        qs = workload.generate_queries(workload.QuerySpec("cube", 100, 512, seed=32))
        qs += workload.generate_queries(workload.QuerySpec("box", 50, 512, seed=33, alpha=2))
        rep = harness.verify("range3d", pts, 512, qs, alpha=2)
        assert rep.ok, rep.lines()

    def stab_check():
        boxes = workload.generate_dataset(workload.DatasetSpec("boxes3", 120, 256, seed=41, alpha=2))
        probes = workload.generate_queries(workload.QuerySpec("point", 400, 256, seed=42))
        rep = harness.verify("stab", boxes, 256, probes, alpha=2)
        assert rep.ok, rep.lines()

    def smallset_check():
        import random
        rng = random.Random(51)
        for _ in range(60):
            pts = [(rng.randrange(64), rng.randrange(64)) for _ in range(rng.randrange(1, 50))]
            idx = smallset.build_small(pts)
            for _ in range(20):
                a, b = sorted(rng.randrange(64) for _ in range(2))
                c, d = sorted(rng.randrange(64) for _ in range(2))
                got = sorted(smallset.query_small(idx, Rect2(a, b, c, d)))
                want = sorted(p for p in pts if a <= p[0] <= b and c <= p[1] <= d)
                assert got == want

    check("geometry-decomposition", geometry_check)
    check("smallset-oracle", smallset_check)
    check("range2d-verify", range2d_check)
    check("range3d-verify", range3d_check)
    check("stab-verify", stab_check)
    return results


def _cmd_selftest(_args):
    results = _selftest_lines()
    ok = True
    for name, passed, detail in results:
        print(f"selftest {name}: {'PASS' if passed else 'FAIL ' + detail}")
        ok &= passed
    return 0 if ok else 1


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "gen":
            return _cmd_gen(args)
        if args.cmd == "build":
            return _cmd_build(args)
        if args.cmd == "verify":
            return _cmd_verify(args)
        if args.cmd == "bench":
            return _cmd_bench(args)
        return _cmd_selftest(args)
    except (FatRangeError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
