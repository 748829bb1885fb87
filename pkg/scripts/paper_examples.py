#!/usr/bin/env python3
"""Print the residues, relations and counts for the two worked examples."""
from __future__ import annotations

import time

from binres.matroid import Configuration, euler_characteristic, nbc_bases, gale_dual
from binres.residue import os_relations, residue_rational, stable_basis


def show(name: str, cols, beta, gamma) -> None:
    cfg = Configuration.from_columns(cols)
    print(f"== {name}: columns {cols}, beta {beta}, gamma {gamma}")
    print(f"chi = {euler_characteristic(cfg)}, nbc bases of the Gale dual: {len(nbc_bases(gale_dual(cfg)))}")
    start = time.perf_counter()
    for I in cfg.bases:
        r = residue_rational(cfg, I, gamma)
        label = "".join(str(i + 1) for i in I)
        print(f"R_{label} [{r.method}, det {r.basis.det}] = {r.value.to_text()}")
    print(f"residues computed in {time.perf_counter() - start:.3f} s")
    print("stable basis:", ", ".join("R_" + "".join(str(i + 1) for i in r.basis.I) for r in stable_basis(cfg, beta, gamma)))
    subsets = [[]] if cfg.d == 1 else [[i] for i in range(cfg.n)]
    for sub in subsets:
        rep = os_relations(cfg, sub, beta, gamma)
        print("relation:", rep.describe(), "(ok)" if rep.vanishes else "(FAILED)")
    print()


if __name__ == "__main__":
    show("three points on a line", [[1], [1], [1]], (1, 1, 1), (3,))
    show("twisted cubic", [[1, 0], [1, 1], [1, 2], [1, 3]], (1, 1, 1, 1), (1, 1))
