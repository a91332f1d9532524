"""Run the three synthetic experiments and print the per-f means.

    python3 scripts/run_experiments.py desk results/desk
    python3 scripts/run_experiments.py full results/full --workers 4
"""

import argparse
import time

from fairrank.cli import config_path
from fairrank.simulation import ScenarioConfig, run_all, write_results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("config", help="desk, full, or a JSON/TOML config path")
    ap.add_argument("out")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args()

    cfg = ScenarioConfig.load(config_path(args.config))
    if args.seed is not None:
        cfg.master_seed = args.seed
    t0 = time.perf_counter()
    results, meta = run_all(cfg, workers=args.workers)
    write_results(args.out, results, meta)
    print(f"done in {time.perf_counter() - t0:.1f}s -> {args.out}")

    k_mid = cfg.k_grid[len(cfg.k_grid) // 2] if cfg.k_grid else None
    print(f"{'f':>5} {'missed@k=' + str(k_mid):>14} {'rd_lrr':>9} {'rd_est':>9} {'skew_lrr':>9} {'skew_gen':>9}")
    mo, rd, sk = results["missed_opportunity"], results["rank_difference"], results["skew"]
    top = min(cfg.skew_top, cfg.total_size)
    for f in cfg.activeness_grid:
        missed = mo.mean("missed_opportunity", f, k_mid) if k_mid is not None else float("nan")
        print(
            f"{f:>5} {missed:>14.2f} {rd.mean('rank_difference_lrr', f):>9.2f} "
            f"{rd.mean('rank_difference_estimated', f):>9.2f} {sk.mean('skew_lrr', f, top):>9.3f} "
            f"{sk.mean('skew_generated', f, top):>9.3f}"
        )


if __name__ == "__main__":
    main()
