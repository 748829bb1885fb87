"""Sparse Laurent polynomials with exact rational coefficients.

A Laurent polynomial is a mapping from integer exponent tuples (negative
entries allowed) to nonzero ``Fraction`` coefficients.  These carry the
truncated hypergeometric and residue series, and torus monomials ``t^gamma``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, Iterable, Iterator, Mapping, Tuple

Exponent = Tuple[int, ...]

BigRational = Fraction


class LaurentPolynomial:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent {exp} has wrong length for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, terms: Dict[Exponent, Fraction]) -> "LaurentPolynomial":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, exp: Iterable[int], coeff=1) -> "LaurentPolynomial":
        exp = tuple(exp)
        return cls(len(exp), {exp: coeff})

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPolynomial":
        return cls._raw(nvars, {})

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self.terms.items(), reverse=True))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __repr__(self) -> str:
        return f"LaurentPolynomial({self.nvars}, {dict(self)!r})"

    def _check(self, other: "LaurentPolynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError("Laurent polynomials live in different variable blocks")

    def __add__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPolynomial._raw(self.nvars, out)

    def __neg__(self) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPolynomial") -> "LaurentPolynomial":
        return self + (-other)

    def scale(self, c) -> "LaurentPolynomial":
        c = Fraction(c)
        if not c:
            return LaurentPolynomial.zero(self.nvars)
        return LaurentPolynomial._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other) -> "LaurentPolynomial":
        if not isinstance(other, LaurentPolynomial):
            return self.scale(other)
        return self.mul_truncated(other)

    __rmul__ = scale

    def mul_truncated(
        self, other: "LaurentPolynomial", keep: Callable[[Exponent], bool] | None = None
    ) -> "LaurentPolynomial":
        """Product, optionally discarding every monomial for which ``keep`` is false."""
        self._check(other)
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if keep is not None and not keep(e):
                    continue
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial._raw(self.nvars, {e: c for e, c in out.items() if c})

    def filter(self, keep: Callable[[Exponent], bool]) -> "LaurentPolynomial":
        return LaurentPolynomial._raw(
            self.nvars, {e: c for e, c in self.terms.items() if keep(e)}
        )

    def diff(self, var: int) -> "LaurentPolynomial":
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                ne = list(e)
                ne[var] -= 1
                out[tuple(ne)] = c * e[var]
        return LaurentPolynomial._raw(self.nvars, out)

    def min_exponents(self) -> Exponent:
        """Componentwise minimum exponent over the support (zeros for the zero polynomial)."""
        if not self.terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def coefficient(self, exp: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))
