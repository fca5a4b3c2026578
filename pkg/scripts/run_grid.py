"""Verify the closed-form characteristic polynomial and the class identities over the parameter grid."""

import argparse
import json
import time

from noetherdyn.config import GridRunConfig
from noetherdyn.grid import enumerate_grid, verify_config


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=GridRunConfig.d_max)
    ap.add_argument("--n-max", type=int, default=GridRunConfig.n_max)
    ap.add_argument("--out", help="write per-configuration results as JSON")
    args = ap.parse_args()
    cfg = GridRunConfig(args.d_max, args.n_max)

    t0 = time.perf_counter()
    rows, skipped = [], 0
    for gc in enumerate_grid(cfg.d_max, cfg.n_max):
        if gc.a is None:
            skipped += 1
            continue
        res = verify_config(gc, cfg.orbit_depth)
        degenerate = not res.checks.get("lambda_gt_1_simple", True)
        ok = all(v for k, v in res.checks.items() if not (degenerate and k == "lambda_gt_1_simple"))
        rows.append({"config": gc.key, "a": [str(x) for x in gc.a], "ok": ok, "degenerate": degenerate,
                     "checks": res.checks})
        print(f"{'PASS' if ok else 'FAIL'}{' (lambda = 1)' if degenerate else ''}  {gc.key}")
    elapsed = time.perf_counter() - t0
    print(f"{sum(r['ok'] for r in rows)}/{len(rows)} pass, {skipped} skipped, {elapsed:.1f} s")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"config": vars(args), "rows": rows, "seconds": elapsed}, fh, indent=2)


if __name__ == "__main__":
    main()
