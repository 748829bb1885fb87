"""Binomial residues R_I(beta, gamma): closed forms, series, reconstruction,
the nbc stable basis, and Orlik-Solomon relations.

All indices are 0-based.  The variable order is x_1..x_n, y_1..y_n.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from .arrangement import DegreePair
from .dsystem import reduce_to_ej, verify_annihilation
from .errors import (
    ColoopConfiguration,
    InternalInconsistency,
    NotUnimodular,
    SingularMatrix,
    TruncationExceeded,
)
from .exactmath import (
    IntegerMatrix,
    LaurentPolynomial,
    RationalFunction,
    VarTable,
    det,
    rank,
    solve_rational,
)
from .hyperseries import SeriesTruncation
from .matroid import Circuit, Configuration, detect_coloops, fundamental_circuit, gale_dual, nbc_bases

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class BasisIndex:
    I: Subset
    M_I: IntegerMatrix
    det: int

    @property
    def unimodular(self) -> bool:
        return abs(self.det) == 1

    @property
    def orientation(self) -> int:
        """sign(det): the |det| roots each contribute 1/det."""
        return 1 if self.det > 0 else -1

    def label(self) -> str:
        return "R_" + "".join(str(i + 1) for i in self.I) if self.I else "R"


@dataclass(frozen=True)
class CircuitResultant:
    circuit: Circuit
    polynomial: object  # PolyElement in the ring of VarTable(n)


@dataclass
class ResidueValue:
    value: RationalFunction
    basis: BasisIndex
    degree: DegreePair
    method: str
    truncation_order: Optional[int] = None
    verified: Dict[str, bool] = field(default_factory=dict)

    @property
    def is_verified(self) -> bool:
        return bool(self.verified) and all(self.verified.values())


@dataclass(frozen=True)
class ResidueOptions:
    n_max: int = 20
    verify_order: int = 5

    @classmethod
    def from_env(cls) -> "ResidueOptions":
        raw = os.environ.get("BINRES_NMAX")
        return cls(n_max=int(raw)) if raw else cls()


def make_basis(cfg: Configuration, I: Sequence[int]) -> BasisIndex:
    I = tuple(sorted(int(i) for i in I))
    if len(I) != cfg.d or len(set(I)) != len(I) or any(not 0 <= i < cfg.n for i in I):
        raise ValueError(f"{tuple(i + 1 for i in I)} is not a {cfg.d}-subset of 1..{cfg.n}")
    M_I = cfg.column_matrix(I)
    D = det(M_I) if cfg.d else 1
    if D == 0:
        raise SingularMatrix(f"columns {tuple(i + 1 for i in I)} are linearly dependent")
    return BasisIndex(I, M_I, D)


def _complement(cfg: Configuration, I: Subset) -> Subset:
    return tuple(j for j in range(cfg.n) if j not in I)


def _inverse_columns(basis: BasisIndex) -> List[Tuple[Fraction, ...]]:
    d = len(basis.I)
    cols = [solve_rational(basis.M_I, [int(i == k) for i in range(d)]) for k in range(d)]
    return cols


def _solve(inv_cols, vec) -> Tuple[Fraction, ...]:
    d = len(inv_cols)
    return tuple(sum((inv_cols[k][r] * vec[k] for k in range(d)), Fraction(0)) for r in range(d))


def _integral(vec) -> Optional[Tuple[int, ...]]:
    if all(x.denominator == 1 for x in vec):
        return tuple(int(x) for x in vec)
    return None


# ---------------------------------------------------------------------------
# monomial residues and resultants


def _monomial_residue_lp(cfg: Configuration, basis: BasisIndex, gamma: Sequence[int]) -> LaurentPolynomial:
    n, d = cfg.n, cfg.d
    nu = _integral(solve_rational(basis.M_I, gamma)) if d else ()
    if nu is None:
        return LaurentPolynomial.zero(2 * n)
    exp = [0] * (2 * n)
    for k, i in enumerate(basis.I):
        exp[i] = nu[k] - 1
        exp[n + i] = -nu[k]
    sign = (-1) ** ((sum(nu) + d) % 2)
    return LaurentPolynomial.monomial(exp, Fraction(sign * basis.orientation))


def monomial_residue(cfg: Configuration, I: Sequence[int], gamma: Sequence[int]) -> RationalFunction:
    basis = make_basis(cfg, I)
    return RationalFunction.from_laurent(VarTable(cfg.n), _monomial_residue_lp(cfg, basis, gamma))


def laurent_residue(cfg: Configuration, I: Sequence[int], g: LaurentPolynomial) -> RationalFunction:
    """Global residue of x_I + y_I t^{a_I} against the Laurent polynomial g(t), by linearity."""
    basis = make_basis(cfg, I)
    total = LaurentPolynomial.zero(2 * cfg.n)
    for gamma, c in g.terms.items():
        total = total + _monomial_residue_lp(cfg, basis, gamma).scale(c)
    return RationalFunction.from_laurent(VarTable(cfg.n), total)


def circuit_resultant(circuit: Circuit, n: int) -> CircuitResultant:
    table = VarTable(n)
    first = [0] * (2 * n)
    second = [0] * (2 * n)
    for i, m in zip(circuit.support, circuit.relation):
        if m > 0:
            first[table.x(i)] = m
            second[table.y(i)] = m
        else:
            first[table.y(i)] = -m
            second[table.x(i)] = -m
    sign = (-1) ** (sum(circuit.relation) % 2)
    poly = table.monomial(first) - sign * table.monomial(second)
    return CircuitResultant(circuit, poly)


def resultant_vanishes_on_torus(res: CircuitResultant, cfg: Configuration) -> bool:
    """Substitute x_i -> 1, y_i -> -s^{a_i} and test for the zero Laurent polynomial in s."""
    n, d = cfg.n, cfg.d
    total: Dict[Tuple[int, ...], int] = {}
    for exp, c in res.polynomial.terms():
        s = [0] * d
        sign = 1
        for i in range(n):
            e = exp[n + i]
            if e:
                sign *= (-1) ** e
                s = [a + e * b for a, b in zip(s, cfg.columns[i])]
        key = tuple(s)
        total[key] = total.get(key, 0) + sign * int(c)
    return all(v == 0 for v in total.values())


# ---------------------------------------------------------------------------
# series


def _series_lp(cfg: Configuration, basis: BasisIndex, gamma: Sequence[int], N: int) -> LaurentPolynomial:
    n, d = cfg.n, cfg.d
    J = _complement(cfg, basis.I)
    inv = _inverse_columns(basis) if d else []
    terms: Dict[Tuple[int, ...], Fraction] = {}
    coeff = Fraction(basis.orientation)
    for mu in product(range(N + 1), repeat=len(J)):
        rhs = list(gamma)
        for m, j in zip(mu, J):
            if m:
                rhs = [r + m * a for r, a in zip(rhs, cfg.columns[j])]
        nu = _integral(_solve(inv, rhs)) if d else ()
        if nu is None:
            continue
        exp = [0] * (2 * n)
        for k, i in enumerate(basis.I):
            exp[i] = nu[k] - 1
            exp[n + i] = -nu[k]
        for m, j in zip(mu, J):
            exp[n + j] = m
            exp[j] = -m - 1
        sign = (-1) ** ((d + sum(nu) + sum(mu)) % 2)
        terms[tuple(exp)] = sign * coeff
    return LaurentPolynomial(2 * n, terms)


def residue_series(cfg: Configuration, I: Sequence[int], gamma: Sequence[int], N: int) -> SeriesTruncation:
    """Truncated series of R_I(1, gamma) over mu in N^J with |mu|_inf <= N."""
    if N < 0:
        raise ValueError("truncation order must be non-negative")
    basis = make_basis(cfg, I)
    return SeriesTruncation(_series_lp(cfg, basis, gamma, N), N)


def _beta_lift_lp(lp: LaurentPolynomial, n: int, beta: Sequence[int]) -> LaurentPolynomial:
    """Termwise version of the beta lift applied to a Laurent polynomial."""
    out = lp
    scale = Fraction(1)
    for i, b in enumerate(beta):
        scale *= Fraction((-1) ** (b - 1), math.factorial(b - 1))
        for _ in range(b - 1):
            out = out.diff(i)
    return out.scale(scale)


def expand_in_region(f: RationalFunction, J: Sequence[int], N: int) -> LaurentPolynomial:
    """Expansion of f in the region where x_j, j in J, dominate, as a series in y_J.

    Requires the lowest y_J-degree part of the denominator to be a single monomial.
    Returns every term with all y_j-exponents <= N.
    """
    table = f.table
    n = table.n
    nv = table.nvars
    yJ = [table.y(j) for j in J]

    def deg(e) -> int:
        return sum(e[k] for k in yJ)

    if f.is_zero():
        return LaurentPolynomial.zero(nv)
    Q = {tuple(e): Fraction(int(c)) for e, c in f.den.terms()}
    low = min(deg(e) for e in Q)
    lowest = [e for e in Q if deg(e) == low]
    if len(lowest) != 1:
        raise ValueError("denominator has no monomial leading part in the y_J grading")
    q0 = lowest[0]
    inv_q0 = LaurentPolynomial.monomial([-x for x in q0], 1 / Q[q0])
    E = -(LaurentPolynomial(nv, {e: c for e, c in Q.items() if e != q0}) * inv_q0)
    P = LaurentPolynomial(nv, {tuple(e): Fraction(int(c)) for e, c in f.num.terms()}) * inv_q0
    top = len(J) * N
    keep = lambda e: deg(e) <= top
    power = P.filter(keep)
    result = LaurentPolynomial.zero(nv)
    lowest_p = min((deg(e) for e in P.terms), default=0)
    for _ in range(max(top - lowest_p, 0) + 1):
        if not power:
            break
        result = result + power
        power = power.mul_truncated(E, keep)
    return result.filter(lambda e: all(e[k] <= N for k in yJ))


# ---------------------------------------------------------------------------
# closed forms


def _closed_form_factor(cfg: Configuration, basis: BasisIndex, j: int, inv) -> Tuple[object, object]:
    """(mono_j, binom_j) with binom_j = +-Res(I(j)); needs integral M_I^{-1} a_j."""
    table = VarTable(cfg.n)
    nj = _integral(_solve(inv, cfg.columns[j]))
    mono = [0] * (2 * cfg.n)
    other = [0] * (2 * cfg.n)
    for k, i in enumerate(basis.I):
        c = nj[k]
        if c > 0:
            mono[table.y(i)] = c
            other[table.x(i)] = c
        elif c < 0:
            mono[table.x(i)] = -c
            other[table.y(i)] = -c
    other[table.y(j)] += 1
    lead = list(mono)
    lead[table.x(j)] += 1
    sign = (-1) ** (sum(nj) % 2)
    return table.monomial(mono), table.monomial(lead) + sign * table.monomial(other)


def _unimodular_value(cfg: Configuration, basis: BasisIndex, gamma: Sequence[int]) -> RationalFunction:
    table = VarTable(cfg.n)
    R = table.ring
    inv = _inverse_columns(basis) if cfg.d else []
    lead = RationalFunction.from_laurent(table, _monomial_residue_lp(cfg, basis, gamma))
    num, den = R.one, R.one
    binoms = []
    for j in _complement(cfg, basis.I):
        mono, binom = _closed_form_factor(cfg, basis, j, inv)
        num *= mono
        den *= binom
        binoms.append(binom)
    # the binomials are irreducible (primitive exponent differences), which spares a factorisation
    return (lead * RationalFunction(table, num, den)).seed_factors(binoms)


def residue_unimodular(cfg: Configuration, I: Sequence[int], gamma: Sequence[int]) -> RationalFunction:
    basis = make_basis(cfg, I)
    if not basis.unimodular:
        raise NotUnimodular(f"det of columns {tuple(i + 1 for i in basis.I)} is {basis.det}")
    return _unimodular_value(cfg, basis, gamma)


def _fundamental_resultants(cfg: Configuration, I: Subset) -> list:
    return [circuit_resultant(fundamental_circuit(cfg, I, j), cfg.n).polynomial for j in _complement(cfg, I)]


def resultant_product(cfg: Configuration, I: Sequence[int]):
    basis = make_basis(cfg, I)
    D = VarTable(cfg.n).ring.one
    for res in _fundamental_resultants(cfg, basis.I):
        D *= res
    return D


def _reconstruct(cfg: Configuration, basis: BasisIndex, gamma: Sequence[int], options: ResidueOptions) -> Tuple[RationalFunction, int]:
    n = cfg.n
    table = VarTable(n)
    J = _complement(cfg, basis.I)
    D = resultant_product(cfg, basis.I)
    D_lp = LaurentPolynomial(2 * n, {tuple(e): Fraction(int(c)) for e, c in D.terms()})
    maxdeg = {j: max(e[j] for e in D_lp.terms) for j in J}
    # numerator x_j-degrees lie in [0, deg_j D - 1], which bounds the needed order
    pair = {j: max(e[j] + e[n + j] for e in D_lp.terms) for j in J}
    start = max((pair[j] for j in J), default=1) - 1

    def exact_part(N: int) -> LaurentPolynomial:
        keep = lambda e: all(e[j] >= maxdeg[j] - N - 1 for j in J)
        return _series_lp(cfg, basis, gamma, N).mul_truncated(D_lp, keep)

    N = max(start, 0)
    if N > options.n_max:
        raise TruncationExceeded(
            f"degree bound {N} exceeds N_max = {options.n_max}",
            {"required_order": N, "n_max": options.n_max, "basis": basis.I},
        )
    current = exact_part(N)
    while True:
        if N + 1 > options.n_max:
            raise TruncationExceeded(
                f"series times resultant product did not stabilise by N_max = {options.n_max}",
                {"last_order": N, "n_max": options.n_max, "terms": len(current), "basis": basis.I},
            )
        nxt = exact_part(N + 1)
        if nxt == current:
            break
        N += 1
        current = nxt
    value = RationalFunction.from_laurent(table, current) / RationalFunction(table, D, table.ring.one)
    return value.seed_factors(_fundamental_resultants(cfg, basis.I)), N


def _verify(value: RationalFunction, cfg: Configuration, basis: BasisIndex, beta, gamma, expected: LaurentPolynomial, order: int) -> Dict[str, bool]:
    report = verify_annihilation(value, cfg, beta, gamma)
    J = _complement(cfg, basis.I)
    try:
        series_ok = expand_in_region(value, J, order) == expected
    except ValueError:
        series_ok = False
    return {
        "homogeneity": report.homogeneity_ok(),
        "annihilation": report.toric_ok(),
        "series_match": series_ok,
    }


def _check(result: ResidueValue) -> ResidueValue:
    if not result.is_verified:
        failed = sorted(k for k, v in result.verified.items() if not v)
        raise InternalInconsistency(
            f"{result.basis.label()} at {result.degree}: verification failed ({', '.join(failed)})"
        )
    return result


@lru_cache(maxsize=512)
def _residue_rational_cached(cfg: Configuration, I: Subset, gamma: Tuple[int, ...], options: ResidueOptions) -> ResidueValue:
    basis = make_basis(cfg, I)
    ones = (1,) * cfg.n
    if basis.unimodular:
        value, method, order = _unimodular_value(cfg, basis, gamma), "unimodular_closed_form", None
    else:
        value, order = _reconstruct(cfg, basis, gamma, options)
        method = "series_reconstruction"
    check_order = max(options.verify_order, order or 0)
    expected = _series_lp(cfg, basis, gamma, check_order)
    verified = _verify(value, cfg, basis, ones, gamma, expected, check_order)
    out = ResidueValue(value, basis, DegreePair(ones, gamma), method, order if order is not None else check_order, verified)
    return _check(out)


def residue_rational(cfg: Configuration, I: Sequence[int], gamma: Sequence[int], options: ResidueOptions | None = None) -> ResidueValue:
    """R_I(1, gamma), verified against the system, homogeneity and its own series."""
    options = options or ResidueOptions()
    res = _residue_rational_cached(cfg, tuple(sorted(I)), tuple(int(g) for g in gamma), options)
    return replace(res, verified=dict(res.verified))


@lru_cache(maxsize=512)
def _residue_beta_cached(cfg: Configuration, I: Subset, beta: Tuple[int, ...], gamma: Tuple[int, ...], options: ResidueOptions) -> ResidueValue:
    base = _residue_rational_cached(cfg, I, gamma, options)
    if all(b == 1 for b in beta):
        return base
    F = base.value.factored().derivative(tuple(b - 1 for b in beta) + (0,) * cfg.n)
    scale = Fraction(1)
    for b in beta:
        scale *= Fraction((-1) ** (b - 1), math.factorial(b - 1))
    value = F.to_rational() * scale
    order = max(options.verify_order, base.truncation_order or 0)
    expected = _beta_lift_lp(_series_lp(cfg, base.basis, gamma, order), cfg.n, beta)
    verified = _verify(value, cfg, base.basis, beta, gamma, expected, order)
    out = ResidueValue(value, base.basis, DegreePair(beta, gamma), "beta_lift", order, verified)
    return _check(out)


def residue_beta(cfg: Configuration, I: Sequence[int], beta: Sequence[int], gamma: Sequence[int], options: ResidueOptions | None = None) -> ResidueValue:
    beta = tuple(int(b) for b in beta)
    if len(beta) != cfg.n or any(b < 1 for b in beta):
        raise ValueError("beta must be a vector of n positive integers")
    options = options or ResidueOptions()
    res = _residue_beta_cached(cfg, tuple(sorted(I)), beta, tuple(int(g) for g in gamma), options)
    return replace(res, verified=dict(res.verified))


# ---------------------------------------------------------------------------
# stable basis and relations


def clear_residue_cache() -> None:
    """Drop memoized residues, e.g. before timing a cold computation."""
    _residue_rational_cached.cache_clear()
    _residue_beta_cached.cache_clear()


def stable_basis_indices(cfg: Configuration) -> List[Subset]:
    if detect_coloops(cfg):
        raise ColoopConfiguration("configuration has a coloop, so chi = 0 and there is no stable residue")
    dual = gale_dual(cfg)
    out = []
    for B in nbc_bases(dual):
        out.append(tuple(j for j in range(cfg.n) if j not in B))
    return sorted(out)


def stable_basis(cfg: Configuration, beta: Sequence[int], gamma: Sequence[int], options: ResidueOptions | None = None) -> List[ResidueValue]:
    return [residue_beta(cfg, I, beta, gamma, options) for I in stable_basis_indices(cfg)]


def replacement_indices(cfg: Configuration) -> List[Subset]:
    """Bases I such that every i in I admits a larger j outside I with I - i + j a basis."""
    bases = set(cfg.bases)
    out = []
    for I in cfg.bases:
        ok = True
        for i in I:
            rest = tuple(k for k in I if k != i)
            if not any(
                tuple(sorted(rest + (j,))) in bases
                for j in range(i + 1, cfg.n)
                if j not in I
            ):
                ok = False
                break
        if ok:
            out.append(I)
    return sorted(out)


@dataclass
class RelationReport:
    subset: Subset
    terms: List[Tuple[int, Subset]]
    total: RationalFunction
    shift: Tuple[Tuple[int, ...], Tuple[int, ...]]
    vanishes: bool

    def describe(self) -> str:
        parts = []
        for sign, I in self.terms:
            parts.append(("+ " if sign > 0 else "- ") + "R_" + "".join(str(i + 1) for i in I))
        text = " ".join(parts).lstrip("+ ")
        return f"{text} = {self.total.to_text()}"


def os_relations(cfg: Configuration, subset: Sequence[int], beta: Sequence[int], gamma: Sequence[int], options: ResidueOptions | None = None) -> RelationReport:
    sub = tuple(sorted(int(i) for i in subset))
    if len(sub) != cfg.d - 1 or not cfg.is_independent(sub):
        raise ValueError(f"{tuple(i + 1 for i in sub)} is not an independent (d-1)-subset")
    table = VarTable(cfg.n)
    terms = []
    total = RationalFunction.const(table, 0)
    for ell in range(cfg.n):
        if ell in sub:
            continue
        I = tuple(sorted(sub + (ell,)))
        if not cfg.is_independent(I):
            continue
        sign = (-1) ** sum(1 for i in sub if i > ell)
        terms.append((sign, I))
        total = total + residue_beta(cfg, I, beta, gamma, options).value * sign
    u, v = reduce_to_ej(cfg, beta, gamma)
    vanishes = total.is_zero() or total.factored().derivative(u + v).is_zero()
    return RelationReport(sub, terms, total, (u, v), vanishes)


def _rank_at_points(funcs: Sequence[RationalFunction], rng: random.Random, extra: int = 3) -> int:
    nv = funcs[0].table.nvars
    rows = []
    while len(rows) < len(funcs) + extra:
        pt = [Fraction(rng.randint(1, 97), rng.randint(1, 13)) for _ in range(nv)]
        try:
            rows.append([f.evaluate(pt) for f in funcs])
        except ZeroDivisionError:
            continue
    return rank(rows)


def independent_mod_unstable(values: Sequence[RationalFunction], cfg: Configuration, beta: Sequence[int], gamma: Sequence[int], seed: int = 0) -> bool:
    """True when the values are certified linearly independent modulo unstable functions.

    After moving to an Euler-Jacobi degree with d_x^u d_y^v, a vanishing combination
    modulo unstable functions would become an honest linear dependence.  Full rank of
    an exact evaluation matrix rules that out; rank deficiency at random points is
    reported as False (not certified).
    """
    if not values:
        return True
    u, v = reduce_to_ej(cfg, beta, gamma)
    shifted = [f.factored().derivative(u + v).to_rational() for f in values]
    if any(f.is_zero() for f in shifted):
        return False
    return _rank_at_points(shifted, random.Random(seed)) == len(values)
