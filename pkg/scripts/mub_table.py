"""Unbiasedness table across dimensions and both construction routes.

    python3 scripts/mub_table.py [--max-dim 17] [--out table.csv]

Each row gives the number of bases built, the worst deviation of a cross
overlap modulus from 1/sqrt(d), and the number of biased basis pairs.
"""

import argparse
import csv
import sys
from fractions import Fraction

from phasekit import mub


def rows(max_dim: int):
    for d in range(2, max_dim + 1):
        yield d, "finite", None, mub.build_mub_set(d)
        for kappa in (Fraction(1), Fraction(-1, d - 1)):
            yield d, "truncated", kappa, mub.build_mub_set(d, "truncated", kappa)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--max-dim", type=int, default=17)
    parser.add_argument("--out", help="CSV path (stdout when omitted)")
    args = parser.parse_args(argv)

    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["d", "route", "kappa", "prime", "bases", "max_deviation", "biased_pairs", "complete"])
    for d, route, kappa, mset in rows(args.max_dim):
        writer.writerow([d, route, "" if kappa is None else str(kappa), mset.prime, len(mset),
                         f"{mset.max_deviation():.3e}", len(mset.violations()), mset.complete])
    if args.out:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
