"""Vector configurations a_1..a_n in Z^d and their (Gale-dual) matroids.

Indices are 0-based internally; the ground-set order is the input order.
Everything is exhaustive subset enumeration, intended for n <= 12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .errors import ValidationError
from .exactmath import IntegerMatrix, lattice_kernel, vectors_rank

Subset = Tuple[int, ...]


@dataclass(frozen=True)
class VectorFamily:
    """An ordered family of integer vectors in Z^dim (zero vectors allowed)."""

    vectors: Tuple[Tuple[int, ...], ...]
    dim: int

    @property
    def size(self) -> int:
        return len(self.vectors)

    def rank_of(self, subset: Sequence[int]) -> int:
        return vectors_rank([self.vectors[i] for i in subset], self.dim)

    def is_independent(self, subset: Sequence[int]) -> bool:
        return self.rank_of(subset) == len(subset)

    @cached_property
    def rank(self) -> int:
        return self.rank_of(range(self.size))

    @cached_property
    def independent_sets(self) -> List[Subset]:
        out: List[Subset] = [()]
        frontier: List[Subset] = [()]
        # independent sets are closed under subsets: grow level by level
        for _ in range(self.rank):
            nxt = []
            for s in frontier:
                start = s[-1] + 1 if s else 0
                for j in range(start, self.size):
                    cand = s + (j,)
                    if self.is_independent(cand):
                        nxt.append(cand)
            out.extend(nxt)
            frontier = nxt
        return out

    @cached_property
    def bases(self) -> List[Subset]:
        r = self.rank
        return sorted(s for s in self.independent_sets if len(s) == r)

    @cached_property
    def circuits(self) -> List["Circuit"]:
        return _circuits(self)


@dataclass(frozen=True)
class Configuration(VectorFamily):
    """Columns a_1..a_n of M, spanning Q^d, none of them zero."""

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], validate: bool = True) -> "Configuration":
        cols = tuple(tuple(int(v) for v in c) for c in columns)
        if not cols:
            raise ValidationError("a configuration needs at least one vector")
        d = len(cols[0])
        if any(len(c) != d for c in cols):
            raise ValidationError("all vectors must have the same length")
        cfg = cls(cols, d)
        if validate:
            if any(not any(c) for c in cols):
                raise ValidationError("configuration vectors must be non-zero lattice vectors")
            if cfg.rank != d:
                raise ValidationError(f"vectors span a rank-{cfg.rank} subspace, expected {d}")
        return cfg

    @property
    def n(self) -> int:
        return self.size

    @property
    def d(self) -> int:
        return self.dim

    @property
    def columns(self) -> Tuple[Tuple[int, ...], ...]:
        return self.vectors

    @property
    def matrix(self) -> IntegerMatrix:
        return IntegerMatrix.from_columns(self.vectors, self.dim)

    def column_matrix(self, subset: Sequence[int]) -> IntegerMatrix:
        return IntegerMatrix.from_columns([self.vectors[i] for i in subset], self.dim)


@dataclass(frozen=True)
class Circuit:
    support: Subset
    relation: Tuple[int, ...]

    def coefficient(self, i: int) -> int:
        return self.relation[self.support.index(i)]

    def as_dict(self) -> Dict[int, int]:
        return dict(zip(self.support, self.relation))


@dataclass(frozen=True)
class GaleDual(VectorFamily):
    """Rows b_1..b_n of a Z-basis matrix of ker_Z(M)."""

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return self.vectors

    @property
    def matrix(self) -> IntegerMatrix:
        return IntegerMatrix.from_rows(self.vectors, self.dim)


def _primitive_sign_fixed(vec: Sequence[int]) -> Tuple[int, ...]:
    g = reduce(math.gcd, (abs(v) for v in vec), 0)
    vec = [v // g for v in vec]
    first = next(v for v in vec if v)
    if first < 0:
        vec = [-v for v in vec]
    return tuple(vec)


def _circuits(fam: VectorFamily) -> List[Circuit]:
    out = []
    for k in range(1, fam.rank + 2):
        for sub in combinations(range(fam.size), k):
            if fam.rank_of(sub) != k - 1:
                continue
            if all(fam.is_independent(sub[:i] + sub[i + 1 :]) for i in range(k)):
                M = IntegerMatrix.from_columns([fam.vectors[i] for i in sub], fam.dim)
                ker = lattice_kernel(M)
                (rel,) = ker.columns
                out.append(Circuit(sub, _primitive_sign_fixed(rel)))
    return out


# ---------------------------------------------------------------------------
# operations


def enumerate_bases(cfg: VectorFamily) -> List[Subset]:
    return list(cfg.bases)


def euler_characteristic(cfg: VectorFamily) -> int:
    """Sum of (-1)^|I| over all independent subsets, the empty set included."""
    return sum((-1) ** len(s) for s in cfg.independent_sets)


def enumerate_circuits(cfg: VectorFamily) -> List[Circuit]:
    return list(cfg.circuits)


def detect_coloops(cfg: VectorFamily) -> FrozenSet[int]:
    r = cfg.rank
    return frozenset(
        i for i in range(cfg.size) if cfg.rank_of([j for j in range(cfg.size) if j != i]) < r
    )


def gale_dual(cfg: Configuration) -> GaleDual:
    B = lattice_kernel(cfg.matrix)
    return GaleDual(B.rows, B.ncols)


def lawrence_lift(cfg: Configuration) -> IntegerMatrix:
    """The (n+d) x 2n matrix [[I_n, I_n], [0, M]]."""
    n, d = cfg.n, cfg.d
    rows = []
    for i in range(n):
        rows.append(tuple(int(j == i) for j in range(n)) * 2)
    for k in range(d):
        rows.append((0,) * n + tuple(a[k] for a in cfg.columns))
    return IntegerMatrix.from_rows(rows, 2 * n)


def nbc_bases(fam: VectorFamily) -> List[Subset]:
    """Bases containing no broken circuit (circuit minus its largest element)."""
    broken = [set(c.support[:-1]) for c in fam.circuits]
    return [b for b in fam.bases if not any(bc <= set(b) for bc in broken)]


def chi_bound_check(cfg: Configuration) -> Tuple[int, int, bool]:
    """(|chi|, binom(n-1, d), generic) where generic means every d-subset is a basis."""
    chi = abs(euler_characteristic(cfg))
    bound = math.comb(cfg.n - 1, cfg.d)
    generic = len(cfg.bases) == math.comb(cfg.n, cfg.d)
    if chi > bound or (generic and chi != bound):
        raise AssertionError(f"Euler characteristic bound violated: |chi|={chi}, bound={bound}")
    return chi, bound, generic


def symmetrized(fam: VectorFamily) -> VectorFamily:
    """{b_1..b_n, -b_1..-b_n}: the Gale dual of the Lawrence lifting."""
    neg = tuple(tuple(-v for v in b) for b in fam.vectors)
    return VectorFamily(fam.vectors + neg, fam.dim)


def fundamental_circuit(cfg: Configuration, basis: Sequence[int], j: int) -> Circuit:
    """The unique circuit inside basis + {j} (j outside the basis)."""
    members = set(basis) | {j}
    for c in cfg.circuits:
        if j in c.support and set(c.support) <= members:
            return c
    raise ValueError(f"no circuit in {sorted(members)}")
