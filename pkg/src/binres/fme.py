"""Exact feasibility of systems  a . x >= b  by Fourier-Motzkin elimination."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Sequence, Tuple

Row = Tuple[Tuple[int, ...], Fraction]


def _normalize(a: Sequence, b) -> Tuple[Tuple[int, ...], Fraction] | None:
    """Scale a row to primitive integer coefficients; None for a trivially true row."""
    b = Fraction(b)
    fr = [Fraction(v) for v in a]
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), (v.denominator for v in fr), 1)
    ints = [int(v * lcm) for v in fr]
    b *= lcm
    g = reduce(math.gcd, (abs(v) for v in ints), 0)
    if g == 0:
        return None if b <= 0 else ((), b)
    return tuple(v // g for v in ints), b / g


def feasible(rows: Iterable[Tuple[Sequence, object]], nvars: int) -> bool:
    """True iff some real x satisfies every inequality a . x >= b."""
    system: Dict[Tuple[int, ...], Fraction] = {}
    for a, b in rows:
        norm = _normalize(a, b)
        if norm is None:
            continue
        key, rhs = norm
        if key == ():
            return False
        if key not in system or rhs > system[key]:
            system[key] = rhs
    remaining = set(range(nvars))
    while remaining and system:
        best = None
        for k in remaining:
            pos = sum(1 for a in system if a[k] > 0)
            neg = sum(1 for a in system if a[k] < 0)
            cost = pos * neg - pos - neg
            if best is None or cost < best[0]:
                best = (cost, k)
        k = best[1]
        remaining.discard(k)
        pos = [(a, b) for a, b in system.items() if a[k] > 0]
        neg = [(a, b) for a, b in system.items() if a[k] < 0]
        nxt: Dict[Tuple[int, ...], Fraction] = {
            a: b for a, b in system.items() if a[k] == 0
        }
        for ap, bp in pos:
            for an, bn in neg:
                cp, cn = ap[k], -an[k]
                comb = [cn * x + cp * y for x, y in zip(ap, an)]
                norm = _normalize(comb, cn * bp + cp * bn)
                if norm is None:
                    continue
                key, rhs = norm
                if key == ():
                    return False
                if key not in nxt or rhs > nxt[key]:
                    nxt[key] = rhs
        system = nxt
    return True


def cone_has_direction(constraints: Sequence[Sequence[int]], objective: Sequence, nvars: int) -> bool:
    """Is there d with constraints . d >= 0 (rowwise) and objective . d < 0?"""
    rows: List[Tuple[Sequence, object]] = [(c, 0) for c in constraints]
    rows.append(([-Fraction(v) for v in objective], 1))
    return feasible(rows, nvars)
