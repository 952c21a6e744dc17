"""Command-line surface: decompose matrices from files, generate synthetic
data, and run the benchmark suites.

Exit codes for decompose: 0 success, 1 input parse failure,
2 non-convergence, 3 dimension errors.
"""

import argparse
import json
import sys
import time

from . import bench, matio, synth
from .l1filter import PIPELINE_TOL, FilterConfig, estimate_rank_and_solve
from .matcore import l0_count, l1_norm
from .pcp_adm import AdmConfig, solve_pcp


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_decompose(args):
    try:
        m = matio.read_matrix(args.input)
    except (OSError, ValueError) as exc:
        return _fail(1, f"cannot read {args.input}: {exc}")

    truth = None
    if args.truth:
        try:
            truth = matio.read_matrix(args.truth)
        except (OSError, ValueError) as exc:
            return _fail(1, f"cannot read {args.truth}: {exc}")
        if truth.shape != m.shape:
            return _fail(3, f"truth shape {truth.shape} != input shape {m.shape}")

    try:
        if args.method == "adm":
            adm = AdmConfig(lam=args.lam, tol=args.tol or 1e-7)
            sol = solve_pcp(m, adm)
        else:
            adm = AdmConfig(lam=args.lam, tol=args.tol or PIPELINE_TOL)
            cfg = FilterConfig(
                s_r=args.oversample_rows, s_c=args.oversample_cols,
                rank_hint=args.rank_hint, rng_seed=args.seed,
                adm=adm, parallelism=args.threads,
            )
            sol = estimate_rank_and_solve(m, cfg)
    except ValueError as exc:
        return _fail(3, str(exc))

    if args.out_l:
        matio.write_matrix(args.out_l, sol.l)
    if args.out_s:
        matio.write_matrix(args.out_s, sol.s)

    stats = {
        "method": sol.method,
        "rows": m.shape[0], "cols": m.shape[1],
        "residual": sol.final_residual,
        "rank": sol.rank_of_l,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "seed": args.seed,
        "l1_s": l1_norm(sol.s),
        "l0_s": l0_count(sol.s),
        "t": sol.elapsed,
        "t1": sol.stats.get("t1"),
        "t2": sol.stats.get("t2"),
        "t_assemble": sol.stats.get("t_assemble"),
        "rel_err": synth.rel_err(sol.l, truth) if truth is not None else None,
        "max_dif": synth.max_dif(sol.l, truth) if truth is not None else None,
        "ave_dif": synth.ave_dif(sol.l, truth) if truth is not None else None,
    }
    if args.stats_json:
        with open(args.stats_json, "w") as fh:
            json.dump(stats, fh, indent=2)
            fh.write("\n")
    print(json.dumps(stats))

    if not sol.converged:
        return _fail(2, f"did not converge: residual {sol.final_residual:.3g}")
    return 0


def cmd_synth(args):
    spec = synth.SynthSpec(m=args.m, n=args.n or args.m, rho_r=args.rho_r,
                           rho_s=args.rho_s, magnitude=args.magnitude,
                           sigma_scale=args.sigma_scale, rng_seed=args.seed)
    gt = synth.generate(spec)
    if args.out_m:
        matio.write_matrix(args.out_m, gt.m_obs)
    if args.out_l0:
        matio.write_matrix(args.out_l0, gt.l0)
    if args.out_s0:
        matio.write_matrix(args.out_s0, gt.s0)
    print(json.dumps({"m": spec.m, "n": spec.n, "rank": spec.rank,
                      "n_sparse": spec.n_sparse, "seed": spec.rng_seed}))
    return 0


def cmd_checkerboard(args):
    img = synth.checkerboard(args.m, args.cell)
    gt = synth.corrupt_impulsive(img, args.fraction, args.seed)
    prefix = args.out
    synth.write_pgm(f"{prefix}_clean.pgm", gt.l0)
    synth.write_pgm(f"{prefix}_corrupted.pgm", gt.m_obs)
    matio.write_matrix(f"{prefix}_clean.dmat", gt.l0)
    matio.write_matrix(f"{prefix}_corrupted.dmat", gt.m_obs)
    matio.write_matrix(f"{prefix}_s0.dmat", gt.s0)
    print(json.dumps({"m": args.m, "cell": args.cell, "fraction": args.fraction,
                      "corrupted_pixels": l0_count(gt.s0, 0.0), "prefix": prefix}))
    return 0


def cmd_bench(args):
    t0 = time.perf_counter()
    kwargs = {}
    if args.suite == "size-sweep" and args.adm_max_size is not None:
        kwargs["adm_max_size"] = args.adm_max_size
    report = bench.run_suite(
        args.suite, scale=args.scale, seeds=range(args.seeds),
        threads=args.threads, methods=args.methods, **kwargs,
    )
    report["environment"]["suite_seconds"] = time.perf_counter() - t0
    if args.out_csv:
        bench.write_csv_report(args.out_csv, report)
    if args.out_json:
        bench.write_json_report(args.out_json, report)
    if not args.out_csv and not args.out_json:
        print(json.dumps(report, indent=2))
    else:
        print(json.dumps({"suite": args.suite,
                          "records": len(report["records"]),
                          "summary": report["summary"]}))
    failures = [r for r in report["records"] if r["error"]]
    if failures:
        for r in failures:
            print(f"warning: {r['method']} m={r['m']} seed={r['seed']}: {r['error']}",
                  file=sys.stderr)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="l1pcp",
                                description="Robust PCA: low-rank + sparse decomposition")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a matrix file into L + S")
    d.add_argument("input")
    d.add_argument("--method", choices=("l1filter", "adm"), default="l1filter")
    d.add_argument("--lambda", dest="lam", type=float, default=None)
    d.add_argument("--tol", type=float, default=None)
    d.add_argument("--rank-hint", type=int, default=None)
    d.add_argument("--oversample-rows", type=float, default=10.0)
    d.add_argument("--oversample-cols", type=float, default=10.0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--threads", type=int, default=1)
    d.add_argument("--out-l")
    d.add_argument("--out-s")
    d.add_argument("--stats-json")
    d.add_argument("--truth", help="ground-truth L0 file for error metrics")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("synth", help="generate a synthetic low-rank + sparse instance")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--rho-r", type=float, required=True)
    s.add_argument("--rho-s", type=float, required=True)
    s.add_argument("--magnitude", type=float, default=500.0)
    s.add_argument("--sigma-scale", type=float, default=1.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-m")
    s.add_argument("--out-l0")
    s.add_argument("--out-s0")
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("checkerboard", help="generate a corrupted checkerboard image")
    c.add_argument("--m", type=int, default=512)
    c.add_argument("--cell", type=int, default=64)
    c.add_argument("--fraction", type=float, default=0.1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True, help="output file prefix")
    c.set_defaults(func=cmd_checkerboard)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", choices=sorted(bench.SUITES), required=True)
    b.add_argument("--scale", type=float, default=None)
    b.add_argument("--seeds", type=int, default=1, help="number of RNG seeds per point")
    b.add_argument("--threads", type=int, default=1)
    b.add_argument("--methods", nargs="+", default=None)
    b.add_argument("--adm-max-size", type=int, default=None,
                   help="largest unscaled size the full ADM leg of size-sweep runs at")
    b.add_argument("--out-csv")
    b.add_argument("--out-json")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
