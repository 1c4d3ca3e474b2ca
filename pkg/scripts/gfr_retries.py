"""Retry statistics of the randomized GFR construction over a range of seeds and fields."""

import argparse
import statistics
import time

from regenrepair.core import ConstructionFailed
from regenrepair.galois import field
from regenrepair.gfr import construct, node_subsets_ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=7)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--fields", default="4,5,6,7,8", help="comma-separated m values")
    ap.add_argument("--seeds", type=int, default=10)
    args = ap.parse_args()
    print("q,seeds,failed,mean_retries,max_retries,seconds")
    for m in (int(x) for x in args.fields.split(",")):
        F = field(m)
        retries, failed = [], 0
        t0 = time.perf_counter()
        for seed in range(args.seeds):
            try:
                code = construct(args.n, args.k, args.d, F, seed)
            except ConstructionFailed:
                failed += 1
                continue
            assert node_subsets_ok(code) is None
            retries.append(code.retries)
        mean = f"{statistics.mean(retries):.2f}" if retries else ""
        top = max(retries) if retries else ""
        print(f"{F.q},{args.seeds},{failed},{mean},{top},{time.perf_counter() - t0:.1f}")


if __name__ == "__main__":
    main()
