"""MBR repair bandwidth against k for every scheme, with ratios to blind repair."""

import argparse

from regenrepair.core import PreconditionViolated, format_rational, validate_params
from regenrepair.tradeoff import br_mbr, family_plus_mbr, fr_mbr, grouped_lrc_mbr


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=60)
    ap.add_argument("--d", type=int, default=10)
    args = ap.parse_args()
    n, d = args.n, args.d
    print("k,gamma_br,gamma_fr,gamma_fp,gamma_lrc,fr_over_br,fp_over_br")
    for k in range(1, n + 1):
        p = validate_params(n, k, d)
        br, fr, fp = br_mbr(p).alpha, fr_mbr(p).alpha, family_plus_mbr(p).alpha
        try:
            lrc = format_rational(grouped_lrc_mbr(n, k, d).alpha)
        except PreconditionViolated:
            lrc = ""
        print(f"{k},{format_rational(br)},{format_rational(fr)},{format_rational(fp)},{lrc},"
              f"{float(fr / br):.4f},{float(fp / br):.4f}")


if __name__ == "__main__":
    main()
