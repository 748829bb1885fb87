#!/usr/bin/env python3
"""Check |chi| = #nbc(Gale dual) = #w-bounded topes on random configurations."""
from __future__ import annotations

import argparse
import random
from fractions import Fraction

from binres.arrangement import check_generic_weight, count_w_bounded_topes
from binres.errors import NonGenericWeight
from binres.matroid import Configuration, detect_coloops, euler_characteristic, gale_dual, nbc_bases


def random_configuration(rng: random.Random, d: int, n: int) -> Configuration:
    while True:
        cols = [tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(n)]
        if any(not any(c) for c in cols):
            continue
        cfg = Configuration.from_columns(cols, validate=False)
        if cfg.rank == d and not detect_coloops(cfg):
            return cfg


def generic_weight(rng: random.Random, rows, dim: int):
    while True:
        w = tuple(Fraction(rng.randint(-97, 97), rng.randint(1, 11)) for _ in range(dim))
        try:
            check_generic_weight(rows, w, dim)
            return w
        except NonGenericWeight:
            pass


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--weights", type=int, default=3)
    ap.add_argument("--max-d", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    for k in range(args.count):
        d = rng.randint(1, args.max_d)
        cfg = random_configuration(rng, d, rng.randint(d + 1, args.max_n))
        dual = gale_dual(cfg)
        chi = abs(euler_characteristic(cfg))
        nbc = len(nbc_bases(dual))
        topes = [count_w_bounded_topes(dual.rows, generic_weight(rng, dual.rows, dual.dim), dual.dim) for _ in range(args.weights)]
        ok = chi == nbc and all(t == chi for t in topes)
        bad += not ok
        print(f"{k:3d} d={cfg.d} n={cfg.n} |chi|={chi} nbc={nbc} topes={topes} {'ok' if ok else 'MISMATCH'}  {list(cfg.columns)}")
    print("all equal" if not bad else f"{bad} mismatches")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
