from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from binres.arrangement import count_w_bounded_topes, in_euler_jacobi
from binres.errors import NonGenericWeight, NotAnExponent
from binres.exactmath import IntegerMatrix, KernelCoordinates, lattice_kernel, parse_rational_function, VarTable
from binres.hyperseries import (
    find_exponents,
    is_minimal_negative_support,
    negative_support,
    phi_v,
    series_annihilation_defects,
    series_coefficient,
    stability_probe,
)
from binres.matroid import Configuration, euler_characteristic, lawrence_lift

from conftest import EXAMPLE1, TWISTED_CUBIC, golden

W6 = [
    (Fraction(1), Fraction(3), Fraction(7), Fraction(2), Fraction(5), Fraction(11)),
    (Fraction(13), Fraction(2), Fraction(-3), Fraction(1), Fraction(4), Fraction(5)),
    (Fraction(-2, 3), Fraction(9), Fraction(1, 7), Fraction(6), Fraction(-5), Fraction(3, 2)),
]
W8 = [(1, 3, 7, 2, 5, 11, 13, 17), (5, -2, 3, 1, 9, -4, 2, 7), (Fraction(1, 2), 4, -3, 8, 6, Fraction(-7, 3), 2, 1)]


def test_negative_support_examples():
    assert negative_support((-1, 0)) == {0}
    assert negative_support((0, 0, 0)) == frozenset()
    assert negative_support((2, -3, 0, -1)) == {1, 3}


def test_minimality_examples():
    assert is_minimal_negative_support([[1, 1]], (-1, 0))
    assert not is_minimal_negative_support([[1, 1]], (-1, 1))
    with pytest.raises(ValueError):
        is_minimal_negative_support([[1, 1]], (-1, 0), 0)


def _brute_minimal(rows, v, radius):
    """Exhaustive search over kernel vectors given by coordinates, independent of the box helper."""
    B = lattice_kernel(IntegerMatrix.from_rows(rows))
    coords = KernelCoordinates(B)
    bound = radius * max(sum(abs(x) for x in r) for r in B.rows)
    ns = negative_support(v)
    for u in itertools.product(range(-bound, bound + 1), repeat=len(v)):
        if any(sum(a * x for a, x in zip(r, u)) for r in rows):
            continue
        lam = coords(u)
        if max(map(abs, lam)) > radius:
            continue
        if negative_support([a + b for a, b in zip(v, u)]) < ns:
            return False
    return True


def test_minimality_against_exhaustive_search():
    assert is_minimal_negative_support([[1, 1, 1]], (3, -1, -3), 6) == _brute_minimal([[1, 1, 1]], (3, -1, -3), 6)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_minimality_matches_brute_force(v):
    assert is_minimal_negative_support([[1, 1, 1]], v, 2) == _brute_minimal([[1, 1, 1]], v, 2)


def test_series_coefficient_trivial_and_falling():
    assert series_coefficient((-1, 0), (0, 0)) == 1
    # [v]_{u-} / [v+u]_{u+} with v = (-1, 0), u = (-3, 3): (-1)(-2)(-3) / (1*2*3)
    assert series_coefficient((-1, 0), (-3, 3)) == -1


def test_phi_geometric_series_to_order_10():
    s = phi_v([[1, 1]], (-1, 0), 10)
    expected = {(-1 - j, j): Fraction((-1) ** j) for j in range(11)}
    assert s.terms.terms == expected
    assert s.frontier == 10


def test_phi_mirror_expansion():
    s = phi_v([[1, 1]], (0, -1), 6)
    assert s.terms.terms == {(j, -1 - j): Fraction((-1) ** j) for j in range(7)}


def test_phi_times_denominator_telescopes():
    # (x1 + x2) * phi = 1 + (boundary term at the truncation frontier)
    N = 10
    s = phi_v([[1, 1]], (-1, 0), N).terms
    prod = {}
    for (a, b), c in s.terms.items():
        for shift in ((1, 0), (0, 1)):
            e = (a + shift[0], b + shift[1])
            prod[e] = prod.get(e, 0) + c
    nonzero = {e: c for e, c in prod.items() if c}
    assert nonzero == {(0, 0): 1, (-N - 1, N + 1): (-1) ** N}


def test_phi_rejects_non_minimal():
    with pytest.raises(NotAnExponent):
        phi_v([[1, 1]], (-1, 1), 3)


def test_phi_prefix_stability():
    A = lawrence_lift(Configuration.from_columns(TWISTED_CUBIC))
    v = (-1, -1, 1, -2, 0, 0, -2, 1)
    small = phi_v(A, v, 2).terms.terms
    large = phi_v(A, v, 4).terms.terms
    assert small and all(large[e] == c for e, c in small.items())


@pytest.mark.parametrize(
    "A, alpha, v",
    [
        ([[1, 1]], (-1,), (-1, 0)),
        (lawrence_lift(Configuration.from_columns(EXAMPLE1)), (-2, -1, -1, -3), (1, -1, -1, -3, 0, 0)),
        (lawrence_lift(Configuration.from_columns(TWISTED_CUBIC)), (-1,) * 6, (0, -2, 0, -1, -1, 1, -1, 0)),
    ],
)
def test_series_annihilated_away_from_frontier(A, alpha, v):
    s = phi_v(A, v, 3)
    assert series_annihilation_defects(A, alpha, v, s) == []


def test_annihilation_detects_wrong_degree():
    s = phi_v([[1, 1]], (-1, 0), 4)
    assert series_annihilation_defects([[1, 1]], (0,), (-1, 0), s)


# --- exponents ----------------------------------------------------------------------


def test_one_dimensional_exponents_per_weight():
    assert [e.v for e in find_exponents([[1, 1]], (-1,), (1, 2))] == [(-1, 0)]
    assert [e.v for e in find_exponents([[1, 1]], (-1,), (2, 1))] == [(0, -1)]


def test_non_generic_weight():
    with pytest.raises(NonGenericWeight):
        find_exponents([[1, 1]], (-1,), (1, 1))


def _tope_count(L, w):
    B = lattice_kernel(L)
    wk = tuple(sum(Fraction(w[i]) * B.rows[i][k] for i in range(L.ncols)) for k in range(B.ncols))
    return count_w_bounded_topes(B.rows, wk, B.ncols)


@pytest.mark.parametrize(
    "cols, beta, gamma, weights",
    [(EXAMPLE1, (2, 1, 1), (3,), W6), (EXAMPLE1, (1, 1, 2), (2,), W6), (TWISTED_CUBIC, (1, 1, 1, 1), (1, 1), W8)],
)
def test_exponent_count_equals_chi_at_euler_jacobi_degrees(cols, beta, gamma, weights):
    cfg = Configuration.from_columns(cols)
    assert in_euler_jacobi(cfg, beta, gamma)
    L = lawrence_lift(cfg)
    alpha = tuple(-b for b in beta) + tuple(-g for g in gamma)
    for w in weights:
        ex = find_exponents(L, alpha, w)
        assert len(ex) == abs(euler_characteristic(cfg)) == _tope_count(L, w)
        for e in ex:
            assert tuple(L.apply(e.v)) == alpha
            # stable exponents: the series never terminates
            assert len(phi_v(L, e.v, 3).terms) > len(phi_v(L, e.v, 1).terms)


def test_exponent_count_outside_euler_jacobi_cone():
    # (1,1,1; 3) lies on the boundary of the zonotope; an extra terminating exponent appears
    L = lawrence_lift(Configuration.from_columns(EXAMPLE1))
    ex = find_exponents(L, (-1, -1, -1, -3), W6[0])
    assert len(ex) == 3
    assert (0, 0, 0, -1, -1, -1) in [e.v for e in ex]
    assert len(phi_v(L, (0, 0, 0, -1, -1, -1), 4).terms) == 1


# --- stability probe ------------------------------------------------------------------


def test_stability_probe_examples():
    T = VarTable(3)
    assert not stability_probe(parse_rational_function(T, "1/(y1*y2*y3)"))
    assert not stability_probe(parse_rational_function(T, "x1^3"))
    for name in ("R1", "R2", "R3"):
        assert stability_probe(golden(name, 3), 4)


def test_stability_probe_is_bounded_by_order():
    T = VarTable(1)
    f = parse_rational_function(T, "x1^3*y1^2")
    # the cheapest killing derivative is dy1^3
    assert stability_probe(f, 2)
    assert not stability_probe(f, 3)


@given(st.integers(0, 3), st.integers(0, 3))
def test_polynomials_are_unstable(a, b):
    f = parse_rational_function(VarTable(1), f"x1^{a}*y1^{b}")
    assert stability_probe(f, a + b + 1) is False
