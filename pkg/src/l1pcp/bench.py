"""Benchmark harness: scaled reproductions of the synthetic comparison
suites, with machine-readable CSV/JSON reports.

Record schema (CSV_HEADER) is frozen; bump CSV_SCHEMA_VERSION on change.
"""

import csv
import json
import platform
import time

import numpy as np

from . import synth
from .l1filter import FilterConfig, estimate_rank_and_solve
from .matcore import l0_count, l1_norm
from .pcp_adm import AdmConfig, solve_pcp

CSV_SCHEMA_VERSION = 1
CSV_HEADER = [
    "method", "m", "n", "r", "rho_s", "sigma_scale",
    "rel_err", "max_dif", "ave_dif",
    "rank_l", "l0_s", "l1_s", "iters", "seconds", "seed", "error",
]


def environment_info():
    return {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "schema_version": CSV_SCHEMA_VERSION,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "machine": platform.machine(),
    }


def run_instance(method, gt, r, rho_s, sigma_scale, seed, rank_hint=None,
                 threads=1, adm=None):
    """Solve one instance and return a report record. Failures are caught
    and recorded so a sweep can continue."""
    m_rows, n_cols = gt.m_obs.shape
    record = {
        "method": method, "m": m_rows, "n": n_cols, "r": r,
        "rho_s": rho_s, "sigma_scale": sigma_scale,
        "rel_err": None, "max_dif": None, "ave_dif": None,
        "rank_l": None, "l0_s": None, "l1_s": None,
        "iters": None, "seconds": None, "seed": seed, "error": "",
    }
    try:
        if method == "adm":
            sol = solve_pcp(gt.m_obs, adm or AdmConfig())
        elif method == "l1filter":
            cfg = FilterConfig(rank_hint=rank_hint, rng_seed=seed,
                               adm=adm or AdmConfig(), parallelism=threads)
            sol = estimate_rank_and_solve(gt.m_obs, cfg)
        else:
            raise ValueError(f"unknown method {method!r}")
    except Exception as exc:  # recorded per-row, sweep continues
        record["error"] = f"{type(exc).__name__}: {exc}"
        return record, None

    record.update({
        "rel_err": synth.rel_err(sol.l, gt.l0),
        "max_dif": synth.max_dif(sol.l, gt.l0),
        "ave_dif": synth.ave_dif(sol.l, gt.l0),
        "rank_l": sol.rank_of_l,
        "l0_s": l0_count(sol.s),
        "l1_s": l1_norm(sol.s),
        "iters": sol.iterations,
        "seconds": sol.elapsed,
    })
    return record, sol


def _synth_gt(m, rho_r, rho_s, sigma_scale, seed):
    spec = synth.SynthSpec(m=m, n=m, rho_r=rho_r, rho_s=rho_s,
                           sigma_scale=sigma_scale, rng_seed=seed)
    return synth.generate(spec), spec.rank


def suite_table1(scale=0.25, seeds=(0,), methods=("l1filter", "adm"), threads=1):
    records = []
    for base in (2000, 5000, 10000):
        m = int(round(base * scale))
        for seed in seeds:
            gt, r = _synth_gt(m, 0.01, 0.01, 1.0, seed)
            for method in methods:
                rec, _ = run_instance(method, gt, r, 0.01, 1.0, seed,
                                      rank_hint=r, threads=threads)
                records.append(rec)
    return records, {}


def suite_rank_sweep(scale=1.0, seeds=(0,), methods=("l1filter", "adm"), threads=1):
    m = int(round(1000 * scale))
    records = []
    for rho_r in (0.005, 0.01, 0.02, 0.03, 0.04, 0.05):
        for seed in seeds:
            gt, r = _synth_gt(m, rho_r, 0.02, 1.0, seed)
            for method in methods:
                rec, _ = run_instance(method, gt, r, 0.02, 1.0, seed,
                                      rank_hint=r, threads=threads)
                records.append(rec)
    return records, {}


def suite_sparsity_sweep(scale=1.0, seeds=(0,), methods=("l1filter", "adm"), threads=1):
    m = int(round(1000 * scale))
    records = []
    for rho_s in (0.02, 0.05, 0.1, 0.15, 0.2):
        for seed in seeds:
            gt, r = _synth_gt(m, 0.005, rho_s, 1.0, seed)
            for method in methods:
                rec, _ = run_instance(method, gt, r, rho_s, 1.0, seed,
                                      rank_hint=r, threads=threads)
                records.append(rec)
    return records, {}


def suite_sigma_sweep(scale=0.5, seeds=(0,), methods=("l1filter",), threads=1):
    m = int(round(1000 * scale))
    records = []
    for sigma in (1, 2, 3, 4, 5, 6, 7, 8, 9, 10):
        for seed in seeds:
            gt, r = _synth_gt(m, 0.01, 0.01, float(sigma), seed)
            for method in methods:
                rec, _ = run_instance(method, gt, r, 0.01, float(sigma), seed,
                                      rank_hint=r, threads=threads)
                records.append(rec)
    return records, {}


def fit_time_exponent(sizes, seconds):
    """Slope of log(time) vs log(size); the scaling-law exponent."""
    sizes = np.asarray(sizes, dtype=float)
    seconds = np.asarray(seconds, dtype=float)
    if sizes.size < 2:
        raise ValueError("need at least two sizes to fit an exponent")
    return float(np.polyfit(np.log(sizes), np.log(seconds), 1)[0])


def suite_size_sweep(scale=1.0, seeds=(0,), methods=("l1filter", "adm"),
                     threads=1, r=10, rho_s=0.01, adm_max_size=2000):
    """Timing sweep over n in {1000, 2000, 4000} * scale at fixed rank.

    The full-ADM leg is capped at adm_max_size * scale (dense SVDs beyond
    that dominate the suite budget); its exponent is fitted on the sizes it
    did run.
    """
    sizes = [int(round(base * scale)) for base in (1000, 2000, 4000)]
    adm_cap = int(round(adm_max_size * scale))
    records = []
    times = {method: {} for method in methods}
    for m in sizes:
        for seed in seeds:
            gt, _ = _synth_gt(m, r / m, rho_s, 1.0, seed)
            for method in methods:
                if method == "adm" and m > adm_cap:
                    continue
                rec, _ = run_instance(method, gt, r, rho_s, 1.0, seed,
                                      rank_hint=r, threads=threads)
                records.append(rec)
                if not rec["error"]:
                    times[method].setdefault(m, []).append(rec["seconds"])
    summary = {"sizes": sizes, "exponents": {}}
    for method, per_size in times.items():
        ms = sorted(per_size)
        if len(ms) >= 2:
            mean_t = [float(np.mean(per_size[m])) for m in ms]
            summary["exponents"][method] = fit_time_exponent(ms, mean_t)
    return records, summary


def suite_checkerboard(scale=1.0, seeds=(0,), methods=("l1filter",), threads=1,
                       m=512, cell=64, fraction=0.1):
    m = int(round(m * scale))
    cell = max(1, int(round(cell * scale)))
    if m % cell:
        cell = m // (m // cell) if m // cell else m
    records = []
    img = synth.checkerboard(m, cell)
    for seed in seeds:
        gt = synth.corrupt_impulsive(img, fraction, seed)
        for method in methods:
            rec, _ = run_instance(method, gt, 2, fraction, 1.0, seed,
                                  rank_hint=None, threads=threads)
            records.append(rec)
    return records, {"m": m, "cell": cell, "fraction": fraction}


SUITES = {
    "table1": suite_table1,
    "rank-sweep": suite_rank_sweep,
    "sparsity-sweep": suite_sparsity_sweep,
    "sigma-sweep": suite_sigma_sweep,
    "size-sweep": suite_size_sweep,
    "checkerboard": suite_checkerboard,
}


def run_suite(name, scale=None, seeds=(0,), threads=1, methods=None, **kwargs):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    fn = SUITES[name]
    if scale is not None:
        kwargs["scale"] = scale
    if methods is not None:
        kwargs["methods"] = tuple(methods)
    records, summary = fn(seeds=tuple(seeds), threads=threads, **kwargs)
    return {"environment": environment_info(), "suite": name,
            "records": records, "summary": summary}


def write_csv_report(path, report):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        for rec in report["records"]:
            writer.writerow({k: rec.get(k, "") for k in CSV_HEADER})


def write_json_report(path, report):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
