"""Logarithm-free A-hypergeometric Laurent series phi_v, exponents, and a stability probe.

All infinite searches over ker_Z(A) are replaced by boxes in kernel coordinates
(lam with u = B lam); the radius is part of every result.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .arrangement import Arrangement, cell_is_w_positive, check_generic_weight
from .errors import NonGenericWeight, NotAnExponent
from .exactmath import (
    IntegerMatrix,
    KernelCoordinates,
    LaurentPolynomial,
    RationalFunction,
    integer_solution,
    lattice_kernel,
    solve_rational,
)
from .matroid import VectorFamily


@dataclass(frozen=True)
class Exponent:
    v: Tuple[int, ...]
    nsupp: FrozenSet[int]
    weight: Fraction


@dataclass(frozen=True)
class SeriesTruncation:
    """Terms of a formal series whose kernel coordinates satisfy |lam|_inf <= frontier."""

    terms: LaurentPolynomial
    frontier: int


def _as_matrix(A) -> IntegerMatrix:
    if isinstance(A, IntegerMatrix):
        return A
    return IntegerMatrix.from_rows(A)


def negative_support(v: Sequence[int]) -> FrozenSet[int]:
    return frozenset(i for i, x in enumerate(v) if x < 0)


def _box(radius: int, dim: int):
    return itertools.product(range(-radius, radius + 1), repeat=dim)


def is_minimal_negative_support(A, v: Sequence[int], search_radius: int = 4) -> bool:
    """No kernel vector u with |lam|_inf <= search_radius shrinks nsupp(v) strictly."""
    if search_radius < 1:
        raise ValueError("search_radius must be at least 1")
    A = _as_matrix(A)
    B = lattice_kernel(A)
    ns = negative_support(v)
    for lam in _box(search_radius, B.ncols):
        u = B.apply(lam)
        if negative_support([a + b for a, b in zip(v, u)]) < ns:
            return False
    return True


def _falling(v: int, k: int) -> int:
    """[v]_k = v (v-1) ... (v-k+1)."""
    out = 1
    for j in range(1, k + 1):
        out *= v - j + 1
    return out


def _rising_from(v: int, k: int) -> int:
    """(v+1)(v+2)...(v+k)."""
    out = 1
    for j in range(1, k + 1):
        out *= v + j
    return out


def series_coefficient(v: Sequence[int], u: Sequence[int]) -> Fraction:
    """[v]_{u_-} / [v+u]_{u_+} as displayed in the series phi_v."""
    num = 1
    den = 1
    for vi, ui in zip(v, u):
        if ui < 0:
            num *= _falling(vi, -ui)
        elif ui > 0:
            den *= _rising_from(vi, ui)
    return Fraction(num, den)


def phi_v(A, v: Sequence[int], order: int, check_radius: int | None = None) -> SeriesTruncation:
    A = _as_matrix(A)
    v = tuple(int(x) for x in v)
    if check_radius is None:
        check_radius = max(order, 4)
    if not is_minimal_negative_support(A, v, check_radius):
        raise NotAnExponent(f"{v} does not have minimal negative support")
    B = lattice_kernel(A)
    ns = negative_support(v)
    terms: Dict[Tuple[int, ...], Fraction] = {}
    for lam in _box(order, B.ncols):
        u = B.apply(lam)
        e = tuple(a + b for a, b in zip(v, u))
        if negative_support(e) != ns:
            continue
        terms[e] = series_coefficient(v, u)
    return SeriesTruncation(LaurentPolynomial(len(v), terms), order)


def _apply_monomial_derivative(lp: LaurentPolynomial, w: Sequence[int]) -> LaurentPolynomial:
    out = {}
    for e, c in lp.terms.items():
        coef = c
        for ei, wi in zip(e, w):
            coef *= _falling(ei, wi)
            if not coef:
                break
        if coef:
            out[tuple(a - b for a, b in zip(e, w))] = coef
    return LaurentPolynomial(lp.nvars, out)


def series_annihilation_defects(A, alpha: Sequence[int], v: Sequence[int], series: SeriesTruncation) -> List[str]:
    """Apply toric (circuit) and Euler operators of H_A(alpha) to a truncated series.

    Returns a list of defects: terms of the result that are nonzero although both
    contributing monomials lie strictly inside the truncation frontier.
    """
    A = _as_matrix(A)
    B = lattice_kernel(A)
    coords = KernelCoordinates(B) if B.ncols else None
    defects = []
    lp = series.terms
    for i, row in enumerate(A.rows):
        for e, c in lp.terms.items():
            val = sum(a * x for a, x in zip(row, e)) - alpha[i]
            if val:
                defects.append(f"Euler operator {i} leaves x^{e}")
    fam = VectorFamily(tuple(A.columns), A.nrows)
    for circ in fam.circuits:
        up = [0] * A.ncols
        um = [0] * A.ncols
        for i, m in zip(circ.support, circ.relation):
            if m > 0:
                up[i] = m
            else:
                um[i] = -m
        res = _apply_monomial_derivative(lp, up) - _apply_monomial_derivative(lp, um)
        for f in res.terms:
            inside = True
            for shift in (up, um):
                src = tuple(a + b - c for a, b, c in zip(f, shift, v))
                lam = coords(src) if coords else ()
                if lam is not None and max((abs(x) for x in lam), default=0) > series.frontier:
                    inside = False
            if inside:
                defects.append(f"toric operator for circuit {circ.support} leaves x^{f}")
    return defects


def _fiber_points(A: IntegerMatrix, alpha: Sequence[int], radius: int):
    """All integer v with A v = alpha and |v|_inf <= radius."""
    v0 = integer_solution(A, alpha)
    if v0 is None:
        return [], None
    B = lattice_kernel(A)
    m = B.ncols
    if m == 0:
        return ([tuple(v0)] if max(map(abs, v0), default=0) <= radius else []), B
    coords = KernelCoordinates(B)
    rows = [B.rows[i] for i in coords.rows_used]
    # bound lam through the inverse of the chosen square block of B
    inv_cols = [solve_rational(rows, [int(i == k) for i in range(m)]) for k in range(m)]
    bounds = []
    for k in range(m):
        total = sum(abs(inv_cols[c][k]) * (radius + abs(v0[coords.rows_used[c]])) for c in range(m))
        bounds.append(int(total) + 1)
    pts = []
    for lam in itertools.product(*[range(-b, b + 1) for b in bounds]):
        v = tuple(a + b for a, b in zip(v0, B.apply(lam)))
        if max(abs(x) for x in v) <= radius:
            pts.append(v)
    return pts, B


def find_exponents(A, alpha: Sequence[int], w: Sequence, box_radius: int | None = None) -> List[Exponent]:
    """Exponents of H_A(alpha) with respect to the weight w, searched in |v|_inf <= box_radius."""
    A = _as_matrix(A)
    alpha = tuple(int(a) for a in alpha)
    w = tuple(Fraction(x) for x in w)
    if box_radius is None:
        box_radius = sum(abs(a) for a in alpha) + A.ncols
    B = lattice_kernel(A)
    wk = tuple(sum(w[i] * B.rows[i][k] for i in range(A.ncols)) for k in range(B.ncols))
    check_generic_weight(B.rows, wk, B.ncols)
    pts, _ = _fiber_points(A, alpha, box_radius)
    cells: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}
    for v in pts:
        cells.setdefault(negative_support(v), []).append(v)
    out = []
    for ns, members in cells.items():
        if any(other < ns for other in cells):
            continue
        arr = Arrangement(B.rows, members[0], B.ncols)
        if not cell_is_w_positive(arr, ns, wk):
            continue
        scored = sorted((sum(a * b for a, b in zip(w, v)), v) for v in members)
        if len(scored) > 1 and scored[0][0] == scored[1][0]:
            raise NonGenericWeight(f"weight {w} ties on the cell {sorted(ns)}")
        best, v = scored[0]
        out.append(Exponent(v, ns, best))
    return sorted(out, key=lambda e: e.v)


# ---------------------------------------------------------------------------
# stability


def find_annihilating_derivative(f: RationalFunction, max_order: int) -> Optional[Tuple[int, ...]]:
    """A multi-index w with |w| <= max_order and d^w f = 0, or None."""
    nv = f.table.nvars
    if f.is_zero():
        return (0,) * nv
    used = f.variables()
    for i in range(nv):
        if i not in used and max_order >= 1:
            return tuple(int(j == i) for j in range(nv))
    level = {(0,) * nv: f.factored()}
    for _ in range(max_order):
        nxt = {}
        for w, F in level.items():
            last = max((i for i, x in enumerate(w) if x), default=0)
            for i in range(last, nv):
                w2 = list(w)
                w2[i] += 1
                w2 = tuple(w2)
                G = F.diff(i)
                if G.is_zero():
                    return w2
                nxt[w2] = G
        level = nxt
    return None


def stability_probe(f: RationalFunction, max_order: int = 4) -> bool:
    """False if some iterated derivative of order <= max_order kills f (unstable)."""
    return find_annihilating_derivative(f, max_order) is None
