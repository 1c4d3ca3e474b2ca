"""Corner points of the BR, FR and family-plus tradeoff curves for a few small systems."""

import argparse

from regenrepair.core import format_decimal, format_rational, validate_params
from regenrepair.tradeoff import (br_tradeoff_curve, family_plus_tradeoff_curve,
                                  fr_tradeoff_curve)

DEFAULT = ["6,4,4", "5,3,2", "7,5,4", "9,6,2"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("systems", nargs="*", default=DEFAULT, help="n,k,d triples")
    args = ap.parse_args()
    print("n,k,d,scheme,alpha,gamma,alpha_dec,gamma_dec")
    for text in args.systems:
        n, k, d = (int(x) for x in text.split(","))
        p = validate_params(n, k, d)
        for curve in (br_tradeoff_curve(p), fr_tradeoff_curve(p), family_plus_tradeoff_curve(p)):
            for a, g in curve.alpha_gamma():
                print(f"{n},{k},{d},{curve.scheme},{format_rational(a)},{format_rational(g)},"
                      f"{format_decimal(a)},{format_decimal(g)}")


if __name__ == "__main__":
    main()
