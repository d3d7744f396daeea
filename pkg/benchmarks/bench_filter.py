"""Benchmark the fused filter loop: numba kernels vs the numpy fallback.

The acceleration mode is fixed at import time by BAROATT_DISABLE_NUMBA, so
each mode runs in its own subprocess. Usage:

    python benchmarks/bench_filter.py [--runs 20] [--duration 30]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _measure(runs, duration):
    # executed in the child process; prints one JSON line
    import numpy as np  # noqa: F401  (import cost counted in setup)

    from baroatt._accel import NUMBA_ENABLED
    from baroatt.harness import reference_config, run_campaign, run_single
    from baroatt.sim import integrate_truth

    cfg = reference_config()
    cfg.n_runs = runs
    cfg.duration = duration

    t0 = time.perf_counter()
    truth = integrate_truth(cfg.duration, dt=cfg.truth_dt)
    run_single(cfg, (cfg.seed, 0), truth=truth)  # includes jit compilation
    warmup = time.perf_counter() - t0

    t0 = time.perf_counter()
    summary, _ = run_campaign(cfg)
    elapsed = time.perf_counter() - t0
    print(json.dumps({
        "numba": NUMBA_ENABLED,
        "warmup_s": warmup,
        "campaign_s": elapsed,
        "per_run_ms": 1e3 * elapsed / runs,
        "median_att_err_end": float(summary.att_q50[-1]),
    }))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=20)
    ap.add_argument("--duration", type=float, default=30.0)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        _measure(args.runs, args.duration)
        return

    results = {}
    for label, disable in (("numba", "0"), ("numpy fallback", "1")):
        env = dict(os.environ, BAROATT_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--child", "--runs", str(args.runs),
             "--duration", str(args.duration)],
            env=env, capture_output=True, text=True, check=True)
        results[label] = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{args.runs} runs x {args.duration:g} s at 200 Hz")
    for label, r in results.items():
        print(f"  {label:15s} warmup {r['warmup_s']:6.2f} s   campaign "
              f"{r['campaign_s']:7.2f} s   ({r['per_run_ms']:7.1f} ms/run)")
    speedup = results["numpy fallback"]["campaign_s"] / results["numba"]["campaign_s"]
    print(f"  speedup (campaign): {speedup:.1f}x")
    a = results["numba"]["median_att_err_end"]
    b = results["numpy fallback"]["median_att_err_end"]
    print(f"  median attitude error at end agrees: {a:.6g} vs {b:.6g}")


if __name__ == "__main__":
    main()
