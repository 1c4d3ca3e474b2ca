"""Compare the exhaustive information-flow-graph search with the closed-form FR min-cut.

Set REGENREPAIR_WORKERS to spread the search over processes.
"""

import argparse
import time
from fractions import Fraction

from regenrepair.core import OperatingPoint, format_rational, validate_params
from regenrepair.family import FamilyStructure
from regenrepair.ifg import Family, worst_case_search
from regenrepair.tradeoff import fr_mincut

SYSTEMS = [(4, 3, 2), (5, 3, 2), (6, 3, 3), (6, 4, 4)]
POINTS = [(1, 1), (3, 1), (Fraction(5, 2), 1)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--policy", choices=["exhaustive", "adversarial"], default="exhaustive")
    args = ap.parse_args()
    print("n,k,d,alpha,beta,oracle,closed_form,match,graphs,seconds")
    for n, k, d in SYSTEMS:
        p = validate_params(n, k, d)
        for a, b in POINTS:
            pt = OperatingPoint(Fraction(a), Fraction(b))
            t0 = time.perf_counter()
            res = worst_case_search(Family(FamilyStructure(n, d)), p, pt, args.policy)
            cf = fr_mincut(p, pt)
            print(f"{n},{k},{d},{format_rational(pt.alpha)},{format_rational(pt.beta)},"
                  f"{format_rational(res.value)},{format_rational(cf)},{res.value == cf},"
                  f"{res.graphs},{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
