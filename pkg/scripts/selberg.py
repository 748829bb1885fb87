#!/usr/bin/env python3
"""|chi| of the Selberg configuration e_i - e_j against its closed formula, small d only."""
from __future__ import annotations

import argparse
import math
import time

from binres.matroid import Configuration, euler_characteristic


def columns(d: int):
    def e(i):
        return [int(k == i) for k in range(d - 1)]
    return [tuple(a - b for a, b in zip(e(i), e(j))) for i in range(d) for j in range(i + 1, d)]


def closed_formula(d: int) -> int:
    total = sum(
        math.comb(d - 3, 2 * k) * (d - 1) ** (d - 3 - 2 * k) * math.prod(2 * i - 1 for i in range(1, k + 1))
        for k in range((d - 3) // 2 + 1)
    )
    return (d - 2) * total


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-d", type=int, default=5)
    args = ap.parse_args()
    for d in range(3, args.max_d + 1):
        start = time.perf_counter()
        chi = abs(euler_characteristic(Configuration.from_columns(columns(d))))
        f = closed_formula(d)
        print(f"d={d} n={d * (d - 1) // 2} |chi|={chi} formula={f} {'ok' if chi == f else 'MISMATCH'} ({time.perf_counter() - start:.2f} s)")
