"""Independent reference computations used only by the tests.

None of these call into the package's own algorithms for the quantity they check.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from scipy.optimize import linprog


def brute_rank(vectors) -> int:
    if not vectors:
        return 0
    return sympy.Matrix([list(v) for v in vectors]).rank()


def brute_chi(columns) -> int:
    """Sum of (-1)^|S| over all independent subsets, by sympy ranks."""
    n = len(columns)
    total = 0
    for k in range(n + 1):
        for sub in itertools.combinations(range(n), k):
            if brute_rank([columns[i] for i in sub]) == k:
                total += (-1) ** k
    return total


def brute_bases(columns, d) -> list:
    return [s for s in itertools.combinations(range(len(columns)), d) if brute_rank([columns[i] for i in s]) == d]


def smith_invariants(rows) -> list:
    from sympy.matrices.normalforms import smith_normal_form

    M = sympy.Matrix(rows)
    S = smith_normal_form(M, domain=sympy.ZZ)
    return [abs(S[i, i]) for i in range(min(S.shape))]


def is_saturated_kernel(M_rows, K_cols, ncols) -> bool:
    """K spans ker_Z(M): M K = 0, right rank, and every invariant factor of K is 1."""
    M = sympy.Matrix(M_rows) if M_rows else sympy.zeros(0, ncols)
    expected = ncols - (M.rank() if M_rows else 0)
    if len(K_cols) != expected:
        return False
    if not K_cols:
        return True
    K = sympy.Matrix([list(c) for c in K_cols]).T
    if M_rows and any(x != 0 for x in M * K):
        return False
    return K.rank() == expected and all(f == 1 for f in smith_invariants(K.tolist()))


def ej_by_linprog(columns, beta, gamma) -> bool:
    """gamma in the interior of the zonotope sum [0, beta_i] a_i, via an LP margin."""
    n, d = len(columns), len(columns[0])
    # variables nu_1..nu_n, t ; maximise t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = np.zeros((d, n + 1))
    for i, a in enumerate(columns):
        A_eq[:, i] = a
    A_ub = []
    b_ub = []
    for i in range(n):
        row = np.zeros(n + 1)
        row[i] = -1.0
        row[-1] = 1.0
        A_ub.append(row)
        b_ub.append(0.0)
        row = np.zeros(n + 1)
        row[i] = 1.0
        row[-1] = 1.0
        A_ub.append(row)
        b_ub.append(float(beta[i]))
    res = linprog(c, A_ub=np.array(A_ub), b_ub=b_ub, A_eq=A_eq, b_eq=np.array(gamma, dtype=float),
                  bounds=[(None, None)] * (n + 1), method="highs")
    return res.status == 0 and -res.fun > 1e-9


def geometric_residue(columns, I: Sequence[int], gamma: Sequence[int]):
    """R_I(1, gamma) summed in closed form class by class over mu mod the period of each j.

    Returns a sympy expression in x1..xn, y1..yn.
    """
    n, d = len(columns), len(columns[0])
    xs = sympy.symbols(f"x1:{n + 1}")
    ys = sympy.symbols(f"y1:{n + 1}")
    J = [j for j in range(n) if j not in I]
    MI = sympy.Matrix([[columns[i][r] for i in I] for r in range(d)])
    det = MI.det()
    inv = MI.inv()
    sgn = 1 if det > 0 else -1
    nvec = {j: inv * sympy.Matrix(columns[j]) for j in J}
    period = {}
    for j in J:
        p = 1
        while any((p * x).q != 1 for x in nvec[j]):
            p += 1
        period[j] = p

    def term(mu):
        rhs = sympy.Matrix(gamma) + sum((mu[k] * sympy.Matrix(columns[j]) for k, j in enumerate(J)), sympy.zeros(d, 1))
        nu = inv * rhs
        if any(x.q != 1 for x in nu):
            return None
        expr = sympy.Integer(sgn) * (-1) ** (d + sum(nu) + sum(mu))
        for k, i in enumerate(I):
            expr *= xs[i] ** (nu[k] - 1) * ys[i] ** (-nu[k])
        for k, j in enumerate(J):
            expr *= ys[j] ** mu[k] * xs[j] ** (-mu[k] - 1)
        return expr

    total = 0
    for r in itertools.product(*[range(period[j]) for j in J]):
        t0 = term(r)
        if t0 is None:
            continue
        factor = 1
        for k, j in enumerate(J):
            shifted = list(r)
            shifted[k] += period[j]
            ratio = term(shifted) / t0
            factor *= 1 / (1 - ratio)
        total += t0 * factor
    return total, xs + ys


def eval_sympy(expr, symbols, point) -> Fraction:
    val = expr.subs(dict(zip(symbols, [sympy.Rational(p.numerator, p.denominator) for p in point])))
    if not val.is_Rational:
        # one of the geometric factors 1/(1 - ratio) hit its pole at this point
        raise ZeroDivisionError(f"oracle expression is singular at {point}")
    return Fraction(int(val.p), int(val.q))


def sympy_expr(text: str, n: int):
    """Parse canonical package text with sympy (independent parser)."""
    names = {f"x{i}": sympy.Symbol(f"x{i}") for i in range(1, n + 1)}
    names.update({f"y{i}": sympy.Symbol(f"y{i}") for i in range(1, n + 1)})
    return sympy.sympify(text.replace("^", "**"), locals=names)


def selberg_abs_chi(d: int) -> int:
    """Closed formula for |chi(A_d)| of the Selberg configuration."""
    total = 0
    for k in range((d - 3) // 2 + 1):
        total += math.comb(d - 3, 2 * k) * (d - 1) ** (d - 3 - 2 * k) * math.prod(2 * i - 1 for i in range(1, k + 1))
    return (d - 2) * total


def selberg_columns(d: int):
    """e_i - e_j for 1 <= i < j <= d in Z^{d-1}, with e_d = 0."""
    def e(i):
        return [int(k == i) for k in range(d - 1)]
    cols = []
    for i in range(d):
        for j in range(i + 1, d):
            ei = e(i) if i < d - 1 else [0] * (d - 1)
            ej = e(j) if j < d - 1 else [0] * (d - 1)
            cols.append(tuple(a - b for a, b in zip(ei, ej)))
    return cols


def topes_by_linprog(rows, dim) -> list:
    """Sign vectors sigma with an interior point sigma_j <b_j, lam> >= t > 0, |lam_k| <= 1."""
    out = []
    m = len(rows)
    for sigma in itertools.product((1, -1), repeat=m):
        c = np.zeros(dim + 1)
        c[-1] = -1.0
        A_ub = np.zeros((m, dim + 1))
        for j, (s, r) in enumerate(zip(sigma, rows)):
            A_ub[j, :dim] = [-s * x for x in r]
            A_ub[j, -1] = 1.0
        res = linprog(c, A_ub=A_ub, b_ub=np.zeros(m), bounds=[(-1, 1)] * dim + [(None, 1)], method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            out.append(sigma)
    return out
