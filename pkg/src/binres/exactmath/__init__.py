"""Exact arithmetic kernel: rationals, Laurent polynomials, rational functions, lattices."""

from fractions import Fraction as BigRational

from .laurent import LaurentPolynomial
from .lattice import (
    IntegerMatrix,
    KernelCoordinates,
    column_echelon,
    det,
    integer_solution,
    lattice_kernel,
    rank,
    solve_in_lattice,
    solve_rational,
    vectors_rank,
)
from .ratfunc import (
    Factored,
    RationalFunction,
    VarTable,
    factored_sum,
    format_poly,
    parse_poly,
    parse_rational_function,
    rf_arith,
    rf_derivative,
    rf_diff,
    rf_normalize,
)

__all__ = [
    "BigRational",
    "Factored",
    "IntegerMatrix",
    "KernelCoordinates",
    "LaurentPolynomial",
    "RationalFunction",
    "VarTable",
    "column_echelon",
    "det",
    "factored_sum",
    "format_poly",
    "integer_solution",
    "lattice_kernel",
    "parse_poly",
    "parse_rational_function",
    "rank",
    "rf_arith",
    "rf_derivative",
    "rf_diff",
    "rf_normalize",
    "solve_in_lattice",
    "solve_rational",
    "vectors_rank",
]
