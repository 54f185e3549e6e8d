"""Moduli of S(u, v, w) for small w, split by the parity condition.

    python3 scripts/gauss_moduli.py [--max-w 13]

For each w, reports how often |S| equals sqrt(|w|), 0, or something else
among all u, v in [0, 2|w|).
"""

import argparse
import math
import sys
from collections import Counter

from phasekit import mub


def classify(value: complex, w: int) -> str:
    r = abs(value)
    if r < 1e-9:
        return "zero"
    if abs(r - math.sqrt(abs(w))) < 1e-9:
        return "sqrt_w"
    return "other"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--max-w", type=int, default=13)
    args = parser.parse_args(argv)

    print(f"{'w':>3} {'prime':>5}  parity_ok(sqrt_w/zero/other)  parity_bad(sqrt_w/zero/other)")
    for w in range(2, args.max_w + 1):
        good, bad = Counter(), Counter()
        for u in range(1, 2 * w):
            for v in range(2 * w):
                bucket = good if mub.GaussSumParams(u, v, w).parity_ok else bad
                bucket[classify(mub.gauss_sum(u, v, w), w)] += 1
        fmt = lambda c: f"{c['sqrt_w']}/{c['zero']}/{c['other']}"  # noqa: E731
        print(f"{w:>3} {str(mub.is_prime(w)):>5}  {fmt(good):>28}  {fmt(bad):>29}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
