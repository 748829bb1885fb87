"""Canonical rational functions in x_1..x_n, y_1..y_n with integer coefficients.

Polynomials are sympy sparse ``PolyElement`` objects over ZZ in graded
lexicographic order with x_1 > ... > x_n > y_1 > ... > y_n.  Multivariate gcd
is sympy's heuristic gcd with its dense-recursive fallback.

A ``RationalFunction`` is always stored in canonical form:

* numerator and denominator are coprime polynomials,
* the integer contents of numerator and denominator are coprime,
* the leading (grlex) coefficient of the denominator is positive,
* zero is ``0/1``.

Iterated derivatives go through ``Factored``, which keeps the denominator as
a product of powers of its irreducible factors so that no gcd is needed until
the final canonicalisation.  Zero tests on derivatives are therefore cheap.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from sympy import ZZ
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, ring

from ..errors import DivisionByZero, ParseError
from .laurent import LaurentPolynomial


@dataclass(frozen=True)
class VarTable:
    """Variable ordering x_1 < ... < x_n < y_1 < ... < y_n, plus torus names t_1..t_d."""

    n: int
    d: int = 0

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, self.n + 1)) + tuple(
            f"y{i}" for i in range(1, self.n + 1)
        )

    @property
    def torus_names(self) -> Tuple[str, ...]:
        return tuple(f"t{i}" for i in range(1, self.d + 1))

    @property
    def nvars(self) -> int:
        return 2 * self.n

    @property
    def ring(self):
        return _ring(self.n)

    def x(self, i: int) -> int:
        """Index of x_{i+1} (0-based ``i``)."""
        return i

    def y(self, i: int) -> int:
        return self.n + i

    def gen(self, idx: int) -> PolyElement:
        return self.ring.gens[idx]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ParseError(f"unknown variable {name!r}") from None

    def monomial(self, exp: Sequence[int], coeff: int = 1) -> PolyElement:
        return self.ring({tuple(exp): coeff})


@lru_cache(maxsize=None)
def _ring(n: int):
    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    R = ring(",".join(names), ZZ, grlex)[0]
    return R


def _content(p: PolyElement) -> int:
    return int(p.content()) if p else 0


def _canonical(table: VarTable, num: PolyElement, den: PolyElement) -> Tuple[PolyElement, PolyElement]:
    R = table.ring
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return R.zero, R.one
    g = num.gcd(den)
    if g != R.one:
        num = num.exquo(g)
        den = den.exquo(g)
    c = math.gcd(_content(num), _content(den))
    if c != 1:
        num = num.quo_ground(c)
        den = den.quo_ground(c)
    if den.LC < 0:
        num, den = -num, -den
    return num, den


class RationalFunction:
    """Immutable canonical fraction num/den.  Build through ``rf_normalize``."""

    __slots__ = ("table", "num", "den", "_factored")

    def __init__(self, table: VarTable, num: PolyElement, den: PolyElement, _trusted: bool = False):
        if not _trusted:
            num, den = _canonical(table, num, den)
        self.table = table
        self.num = num
        self.den = den
        self._factored = None

    # construction helpers -------------------------------------------------
    @classmethod
    def const(cls, table: VarTable, value) -> "RationalFunction":
        value = Fraction(value)
        R = table.ring
        return cls(table, R(value.numerator), R(value.denominator))

    @classmethod
    def var(cls, table: VarTable, name: str) -> "RationalFunction":
        return cls(table, table.gen(table.index(name)), table.ring.one, _trusted=True)

    @classmethod
    def from_laurent(cls, table: VarTable, lp: LaurentPolynomial) -> "RationalFunction":
        """Clear negative exponents and rational coefficients of a Laurent polynomial."""
        if lp.nvars != table.nvars:
            raise ValueError("Laurent polynomial does not match the variable table")
        R = table.ring
        if not lp:
            return cls(table, R.zero, R.one, _trusted=True)
        shift = tuple(min(0, m) for m in lp.min_exponents())
        lcm = 1
        for c in lp.terms.values():
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        num = R(
            {
                tuple(e - s for e, s in zip(exp, shift)): int(c * lcm)
                for exp, c in lp.terms.items()
            }
        )
        den = R({tuple(-s for s in shift): lcm})
        return cls(table, num, den)

    # basic protocol --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.table == other.table and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.const(self.table, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.table, tuple(self.num.terms()), tuple(self.den.terms())))

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()

    def __add__(self, other):
        return rf_arith("add", self, _coerce(self.table, other))

    __radd__ = __add__

    def __sub__(self, other):
        return rf_arith("sub", self, _coerce(self.table, other))

    def __rsub__(self, other):
        return rf_arith("sub", _coerce(self.table, other), self)

    def __mul__(self, other):
        return rf_arith("mul", self, _coerce(self.table, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return rf_arith("div", self, _coerce(self.table, other))

    def __rtruediv__(self, other):
        return rf_arith("div", _coerce(self.table, other), self)

    def __neg__(self):
        out = RationalFunction(self.table, -self.num, self.den, _trusted=True)
        if self._factored is not None:
            out.seed_factors(self._factored.base.factors)
        return out

    # queries ----------------------------------------------------------------
    def variables(self) -> set:
        used = set()
        for p in (self.num, self.den):
            for exp in p.monoms():
                used.update(i for i, e in enumerate(exp) if e)
        return used

    def depends_on(self, idx: int) -> bool:
        return idx in self.variables()

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point (one entry per variable)."""
        pt = [Fraction(v) for v in point]
        d = _eval_poly(self.den, pt)
        if d == 0:
            raise DivisionByZero("denominator vanishes at the evaluation point")
        return _eval_poly(self.num, pt) / d

    def denominator_factors(self) -> List[Tuple[PolyElement, int]]:
        _, facs = self.den.factor_list()
        return [(f, int(e)) for f, e in facs]

    def to_laurent(self) -> LaurentPolynomial:
        """Laurent polynomial form; only valid when the denominator is a monomial."""
        if len(self.den.terms()) != 1:
            raise ValueError("denominator is not a monomial")
        (dexp, dc), = self.den.terms()
        terms = {
            tuple(a - b for a, b in zip(exp, dexp)): Fraction(int(c), int(dc))
            for exp, c in self.num.terms()
        }
        return LaurentPolynomial(self.table.nvars, terms)

    # text ---------------------------------------------------------------------
    def to_text(self) -> str:
        num = format_poly(self.table, self.num)
        if self.den == self.table.ring.one:
            return num
        if len(self.num.terms()) > 1:
            num = f"({num})"
        return f"{num}/({format_poly(self.table, self.den)})"

    def factored(self) -> "Factored":
        if self._factored is None:
            self._factored = Factored.from_rational(self)
        return self._factored

    def seed_factors(self, hints: Sequence[PolyElement]) -> "RationalFunction":
        """Precompute the denominator factorisation from known irreducible factors."""
        if self._factored is None:
            self._factored = Factored.from_rational(self, hints)
        return self


def _coerce(table: VarTable, value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, (int, Fraction)):
        return RationalFunction.const(table, value)
    raise TypeError(f"cannot combine RationalFunction with {type(value).__name__}")


def _eval_poly(p: PolyElement, pt: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for exp, c in p.terms():
        term = Fraction(int(c))
        for v, e in zip(pt, exp):
            if e:
                term *= v ** e
        total += term
    return total


def rf_normalize(num, den, table: VarTable | None = None) -> RationalFunction:
    """Canonical representative of num/den.  Raises ``DivisionByZero`` for den = 0."""
    if isinstance(num, RationalFunction) or isinstance(den, RationalFunction):
        t = num.table if isinstance(num, RationalFunction) else den.table
        return rf_arith("div", _coerce(t, num), _coerce(t, den))
    if table is None:
        for p in (num, den):
            if isinstance(p, PolyElement):
                table = _table_for_ring(p.ring)
                break
        else:
            raise ValueError("a VarTable is required for constant inputs")
    R = table.ring
    return RationalFunction(table, R(num), R(den))


def _table_for_ring(R) -> VarTable:
    return VarTable(R.ngens // 2)


def _poly_gcd(p: PolyElement, q: PolyElement) -> PolyElement:
    if p.is_ground or q.is_ground:
        return p.ring.one
    return p.gcd(q)


def _from_coprime(table: VarTable, num: PolyElement, den: PolyElement) -> RationalFunction:
    """Canonical form of num/den when num and den share no non-constant factor."""
    c = math.gcd(_content(num), _content(den))
    if c != 1:
        num = num.quo_ground(c)
        den = den.quo_ground(c)
    if den.LC < 0:
        num, den = -num, -den
    return RationalFunction(table, num, den, _trusted=True)


def _keep_factors(out: RationalFunction, f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Scaling by a constant keeps the denominator factors, so reuse a known factorisation."""
    for a, b in ((f, g), (g, f)):
        if b.num.is_ground and b.den.is_ground and a._factored is not None:
            return out.seed_factors(a._factored.base.factors)
    return out


def rf_arith(op: str, f: RationalFunction, g: RationalFunction) -> RationalFunction:
    """Exact field operation ``op`` in {add, sub, mul, div}, followed by canonicalisation."""
    if f.table != g.table:
        raise ValueError("operands use different variable tables")
    t = f.table
    if op in ("add", "sub"):
        gn = g.num if op == "add" else -g.num
        if f.den == g.den:
            return RationalFunction(t, f.num + gn, f.den)
        h = f.den.gcd(g.den)
        fd, gd = f.den.exquo(h), g.den.exquo(h)
        return RationalFunction(t, f.num * gd + gn * fd, fd * g.den)
    if op == "mul":
        # both operands are canonical, so cross-cancellation leaves only integer content
        if not f.num or not g.num:
            return RationalFunction(t, t.ring.zero, t.ring.one, _trusted=True)
        g1 = _poly_gcd(f.num, g.den)
        g2 = _poly_gcd(g.num, f.den)
        num = f.num.exquo(g1) * g.num.exquo(g2)
        den = f.den.exquo(g2) * g.den.exquo(g1)
        return _keep_factors(_from_coprime(t, num, den), f, g)
    if op == "div":
        if not g.num:
            raise DivisionByZero("division by the zero rational function")
        if not f.num:
            return f
        g1 = _poly_gcd(f.num, g.num)
        g2 = _poly_gcd(f.den, g.den)
        out = _from_coprime(t, f.num.exquo(g1) * g.den.exquo(g2), f.den.exquo(g2) * g.num.exquo(g1))
        return _keep_factors(out, f, g) if g.den.is_ground else out
    raise ValueError(f"unknown operation {op!r}")


def rf_diff(f: RationalFunction, var) -> RationalFunction:
    """Exact partial derivative with respect to ``var`` (a name or a variable index)."""
    idx = f.table.index(var) if isinstance(var, str) else int(var)
    return f.factored().diff(idx).to_rational()


def rf_derivative(f: RationalFunction, multiindex: Sequence[int]) -> RationalFunction:
    """Iterated derivative d^w f for an exponent vector w over all 2n variables."""
    return f.factored().derivative(multiindex).to_rational()


# ---------------------------------------------------------------------------
# factored denominators


class _FactorBase:
    """Irreducible denominator factors shared by all derivatives of one function."""

    def __init__(self, factors: Sequence[PolyElement]):
        self.factors = tuple(factors)
        self.derivs: Dict[Tuple[int, int], PolyElement] = {}
        self.support = [
            {i for exp in q.monoms() for i, e in enumerate(exp) if e} for q in self.factors
        ]

    def deriv(self, k: int, var: int) -> PolyElement:
        key = (k, var)
        if key not in self.derivs:
            self.derivs[key] = self.factors[k].diff(self.factors[k].ring.gens[var])
        return self.derivs[key]


@dataclass
class Factored:
    """num / (const * prod factors[k]^exps[k]) with irreducible primitive factors."""

    table: VarTable
    base: _FactorBase
    num: PolyElement
    const: int
    exps: Tuple[int, ...]
    _cache: Dict[Tuple[int, ...], "Factored"] = field(default_factory=dict, repr=False)

    @classmethod
    def from_rational(cls, f: RationalFunction, hints: Sequence[PolyElement] = ()) -> "Factored":
        """Factor the denominator; ``hints`` are known irreducible factors tried first."""
        R = f.table.ring
        rest = f.den
        found: List[Tuple[PolyElement, int]] = []
        for q in list(hints) + list(R.gens):
            if q.is_ground:
                continue
            e = 0
            while True:
                try:
                    quo = rest.exquo(q)
                except ExactQuotientFailed:
                    break
                rest = quo
                e += 1
            if e:
                found.append((q, e))
        c, facs = rest.factor_list()
        found.extend((q, int(e)) for q, e in facs)
        base = _FactorBase([q for q, _ in found])
        return cls(f.table, base, f.num, int(c), tuple(e for _, e in found))

    def is_zero(self) -> bool:
        return not self.num

    def diff(self, var: int) -> "Factored":
        R = self.table.ring
        x = R.gens[var]
        active = [
            k for k, e in enumerate(self.exps) if e and var in self.base.support[k]
        ]
        if not active:
            return Factored(self.table, self.base, self.num.diff(x), self.const, self.exps)
        qs = [self.base.factors[k] for k in active]
        prod_all = R.one
        for q in qs:
            prod_all *= q
        new = self.num.diff(x) * prod_all if self.num else R.zero
        for pos, k in enumerate(active):
            others = R.one
            for pos2, q in enumerate(qs):
                if pos2 != pos:
                    others *= q
            new -= self.num * (self.base.deriv(k, var) * others * self.exps[k])
        exps = list(self.exps)
        for k in active:
            exps[k] += 1
        return Factored(self.table, self.base, new, self.const, tuple(exps))

    def derivative(self, multiindex: Sequence[int]) -> "Factored":
        """d^w self; intermediate results are memoised per multi-index."""
        key = tuple(multiindex)
        if not any(key):
            return self
        root = self
        cur = self
        done = [0] * len(key)
        for var, times in enumerate(key):
            for _ in range(times):
                done[var] += 1
                dk = tuple(done)
                nxt = root._cache.get(dk)
                if nxt is None:
                    nxt = cur.diff(var)
                    root._cache[dk] = nxt
                cur = nxt
                if cur.is_zero():
                    return cur
        return cur

    def scaled(self, coeff: PolyElement) -> "Factored":
        return Factored(self.table, self.base, self.num * coeff, self.const, self.exps)

    def to_rational(self) -> RationalFunction:
        R = self.table.ring
        if not self.num:
            return RationalFunction(self.table, R.zero, R.one, _trusted=True)
        num = self.num
        exps = list(self.exps)
        for k, q in enumerate(self.base.factors):
            while exps[k]:
                try:
                    num = num.exquo(q)
                except ExactQuotientFailed:
                    break
                exps[k] -= 1
        # the factors are irreducible and primitive, so only integer content can still cancel
        const = self.const
        c = math.gcd(_content(num), abs(const))
        if c != 1:
            num = num.quo_ground(c)
            const //= c
        den = R(const)
        for q, e in zip(self.base.factors, exps):
            if e:
                den *= q ** e
        sign = -1 if den.LC < 0 else 1
        if sign < 0:
            num, den = -num, -den
        out = RationalFunction(self.table, num, den, _trusted=True)
        out._factored = Factored(self.table, self.base, num, const * sign, tuple(exps))
        return out


def factored_sum(items: Iterable[Tuple[PolyElement, Factored]]) -> Factored | None:
    """sum coeff_k * F_k over factored functions sharing one factor base."""
    items = list(items)
    if not items:
        return None
    base = items[0][1].base
    const = items[0][1].const
    for _, F in items:
        if F.base is not base or F.const != const:
            raise ValueError("factored terms must derive from one function")
    width = len(base.factors)
    top = tuple(max(F.exps[k] for _, F in items) for k in range(width))
    R = items[0][1].table.ring
    total = R.zero
    for coeff, F in items:
        if not F.num or not coeff:
            continue
        mult = R.one
        for k in range(width):
            gap = top[k] - F.exps[k]
            if gap:
                mult *= base.factors[k] ** gap
        total += coeff * F.num * mult
    return Factored(items[0][1].table, base, total, const, top)


# ---------------------------------------------------------------------------
# text format


def format_poly(table: VarTable, p: PolyElement) -> str:
    if not p:
        return "0"
    names = table.names
    parts = []
    for exp, c in p.terms():
        c = int(c)
        factors = [
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exp) if e
        ]
        mag = abs(c)
        body = "*".join(([str(mag)] if mag != 1 or not factors else []) + factors)
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_FACTOR = re.compile(r"^(?:(\d+)|([xy]\d+)(?:\^(\d+))?)$")


def parse_poly(table: VarTable, text: str) -> PolyElement:
    R = table.ring
    s = text.replace(" ", "")
    while s.startswith("(") and s.endswith(")") and _balanced(s[1:-1]):
        s = s[1:-1]
    if not s:
        raise ParseError("empty polynomial")
    if "(" in s or ")" in s:
        raise ParseError(f"polynomials must be fully expanded: {text!r}")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ParseError(f"cannot parse polynomial {text!r}")
    out = R.zero
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        coeff = sign
        exp = [0] * table.nvars
        for tok in body.split("*"):
            m = _FACTOR.match(tok)
            if not m:
                raise ParseError(f"bad factor {tok!r} in {text!r}")
            if m.group(1) is not None:
                coeff *= int(m.group(1))
            else:
                exp[table.index(m.group(2))] += int(m.group(3) or 1)
        out += R({tuple(exp): coeff})
    return out


def _balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


def parse_rational_function(table: VarTable, text: str) -> RationalFunction:
    """Inverse of ``RationalFunction.to_text`` (accepts any expanded num/(den))."""
    s = text.strip()
    depth = 0
    split = None
    for pos, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split is not None:
                raise ParseError(f"more than one '/' in {text!r}")
            split = pos
    if split is None:
        return rf_normalize(parse_poly(table, s), table.ring.one, table)
    num = parse_poly(table, s[:split])
    den = parse_poly(table, s[split + 1 :])
    return rf_normalize(num, den, table)
