"""The Gale-dual hyperplane arrangement, its cells and topes, and the zonotope normals
that cut out the Euler-Jacobi cone."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .errors import NonGenericWeight
from .exactmath import IntegerMatrix, lattice_kernel, rank, vectors_rank
from .fme import cone_has_direction, feasible
from .matroid import Configuration


@dataclass(frozen=True)
class Arrangement:
    """Hyperplanes <b_j, lam> = -v_j in R^m."""

    rows: Tuple[Tuple[int, ...], ...]
    offsets: Tuple[int, ...]
    dim: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], offsets: Sequence[int] | None = None, dim: int | None = None):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if dim is None:
            dim = len(rows[0]) if rows else 0
        if offsets is None:
            offsets = (0,) * len(rows)
        return cls(rows, tuple(int(v) for v in offsets), dim)

    @classmethod
    def from_kernel(cls, A, v: Sequence[int]) -> "Arrangement":
        """Arrangement of A's Gale dual translated by the exponent v."""
        B = lattice_kernel(A)
        return cls(B.rows, tuple(int(x) for x in v), B.ncols)

    @property
    def size(self) -> int:
        return len(self.rows)

    def values(self, lam: Sequence[int]) -> Tuple[int, ...]:
        """B lam + v: the exponent corresponding to lam."""
        return tuple(sum(b * l for b, l in zip(r, lam)) + v for r, v in zip(self.rows, self.offsets))

    def nsupp(self, lam: Sequence[int]) -> FrozenSet[int]:
        return frozenset(j for j, val in enumerate(self.values(lam)) if val < 0)


@dataclass(frozen=True)
class CellDescriptor:
    nsupp: FrozenSet[int]
    bounded: bool
    minimal: bool
    w_positive: Optional[bool]
    points: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class DegreePair:
    beta: Tuple[int, ...]
    gamma: Tuple[int, ...]

    def __post_init__(self):
        if any(b <= 0 for b in self.beta):
            raise ValueError("beta must be strictly positive")


# ---------------------------------------------------------------------------
# zonotope normals and the Euler-Jacobi cone


def _canonical_sign(v: Tuple[int, ...]) -> Tuple[int, ...]:
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


def zonotope_facet_normals(cfg: Configuration) -> List[Tuple[int, ...]]:
    """Primitive normals eta_1..eta_2p with eta_{p+j} = -eta_j."""
    d = cfg.d
    found = set()
    for sub in itertools.combinations(range(cfg.n), d - 1):
        vecs = [cfg.columns[i] for i in sub]
        if vectors_rank(vecs, d) != d - 1:
            continue
        M = IntegerMatrix.from_rows(vecs, d)
        ker = lattice_kernel(M)
        if ker.ncols != 1:
            continue
        found.add(_canonical_sign(ker.col(0)))
    half = sorted(found, reverse=True)
    return half + [tuple(-x for x in eta) for eta in half]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def h_values(cfg: Configuration, beta: Sequence[int], gamma: Sequence[int], normals=None) -> List[int]:
    """h_j = <eta_j, gamma> - sum_{<eta_j,a_i> < 0} beta_i <eta_j, a_i> - 1."""
    if normals is None:
        normals = zonotope_facet_normals(cfg)
    out = []
    for eta in normals:
        s = _dot(eta, gamma)
        for b, a in zip(beta, cfg.columns):
            p = _dot(eta, a)
            if p < 0:
                s -= b * p
        out.append(s - 1)
    return out


def in_euler_jacobi(cfg: Configuration, beta: Sequence[int], gamma: Sequence[int]) -> bool:
    """Is (-beta, -gamma) in the Euler-Jacobi cone -Int(pos(A))?"""
    if any(b <= 0 for b in beta):
        return False
    return all(h >= 0 for h in h_values(cfg, beta, gamma))


# ---------------------------------------------------------------------------
# lattice points of cells


def classify_lattice_points(arr: Arrangement, box_radius: int) -> Dict[FrozenSet[int], List[Tuple[int, ...]]]:
    if box_radius < 0:
        raise ValueError("box_radius must be non-negative")
    groups: Dict[FrozenSet[int], List[Tuple[int, ...]]] = defaultdict(list)
    for lam in itertools.product(range(-box_radius, box_radius + 1), repeat=arr.dim):
        groups[arr.nsupp(lam)].append(lam)
    return dict(groups)


def default_box_radius(arr: Arrangement) -> int:
    return 2 * (max((abs(v) for v in arr.offsets), default=0) + arr.size)


def minimal_cells(groups: Dict[FrozenSet[int], list]) -> List[FrozenSet[int]]:
    keys = list(groups)
    return sorted(
        (k for k in keys if not any(o < k for o in keys)), key=lambda s: sorted(s)
    )


def _recession_rows(arr: Arrangement, nsupp: FrozenSet[int]) -> List[Tuple[int, ...]]:
    rows = []
    for j, b in enumerate(arr.rows):
        rows.append(tuple(-x for x in b) if j in nsupp else b)
    return rows


def cell_is_bounded(arr: Arrangement, nsupp: FrozenSet[int]) -> bool:
    rec = _recession_rows(arr, nsupp)
    for k in range(arr.dim):
        for sign in (1, -1):
            e = [0] * arr.dim
            e[k] = sign
            if cone_has_direction(rec, e, arr.dim):
                return False
    return True


def cell_is_w_positive(arr: Arrangement, nsupp: FrozenSet[int], w: Sequence) -> bool:
    """<w, .> bounded below on the (lattice-point hull of the) cell."""
    return not cone_has_direction(_recession_rows(arr, nsupp), w, arr.dim)


def cell_nonempty(arr: Arrangement, nsupp: FrozenSet[int]) -> bool:
    """Does the cell contain a point of the integer-relaxed polyhedron?"""
    rows = []
    for j, b in enumerate(arr.rows):
        if j in nsupp:
            rows.append((tuple(-x for x in b), 1 + arr.offsets[j]))
        else:
            rows.append((b, -arr.offsets[j]))
    return feasible(rows, arr.dim)


def describe_cells(arr: Arrangement, box_radius: int | None = None, w: Sequence | None = None) -> List[CellDescriptor]:
    if box_radius is None:
        box_radius = default_box_radius(arr)
    groups = classify_lattice_points(arr, box_radius)
    mins = set(minimal_cells(groups))
    out = []
    for ns in sorted(groups, key=lambda s: (len(s), sorted(s))):
        out.append(
            CellDescriptor(
                nsupp=ns,
                bounded=cell_is_bounded(arr, ns),
                minimal=ns in mins,
                w_positive=None if w is None else cell_is_w_positive(arr, ns, w),
                points=tuple(groups[ns]),
            )
        )
    return out


# ---------------------------------------------------------------------------
# topes of the central arrangement


def check_generic_weight(rows: Sequence[Sequence[int]], w: Sequence, dim: int) -> None:
    """Raise NonGenericWeight if w vanishes on a line cut out by rows of rank dim-1."""
    if len(w) != dim:
        raise ValueError(f"weight has length {len(w)}, expected {dim}")
    if dim == 0:
        return
    nonzero = [tuple(r) for r in rows if any(r)]
    seen = set()
    for sub in itertools.combinations(range(len(nonzero)), dim - 1):
        vecs = [nonzero[i] for i in sub]
        if vectors_rank(vecs, dim) != dim - 1:
            continue
        ker = lattice_kernel(IntegerMatrix.from_rows(vecs, dim))
        if ker.ncols != 1:
            continue
        line = _canonical_sign(ker.col(0))
        if line in seen:
            continue
        seen.add(line)
        if _dot(line, w) == 0:
            raise NonGenericWeight(f"weight {tuple(w)} is orthogonal to the line {line}")


def enumerate_topes(rows: Sequence[Sequence[int]], dim: int) -> List[Tuple[int, ...]]:
    """Sign vectors of the full-dimensional cones sigma_j <b_j, lam> > 0."""
    rows = [tuple(r) for r in rows]
    out: List[Tuple[int, ...]] = []

    def extend(prefix: Tuple[int, ...], system: list) -> None:
        j = len(prefix)
        if j == len(rows):
            out.append(prefix)
            return
        for s in (1, -1):
            cand = system + [(tuple(s * x for x in rows[j]), 1)]
            if feasible(cand, dim):
                extend(prefix + (s,), cand)

    extend((), [])
    return out


def count_w_bounded_topes(rows: Sequence[Sequence[int]], w: Sequence, dim: int | None = None) -> int:
    """Number of topes on which <w, .> is bounded below (decided exactly by FME)."""
    rows = [tuple(int(x) for x in r) for r in rows]
    if dim is None:
        dim = len(rows[0]) if rows else len(w)
    w = [Fraction(x) for x in w]
    check_generic_weight(rows, w, dim)
    count = 0
    for sigma in enumerate_topes(rows, dim):
        cone = [tuple(s * x for x in r) for s, r in zip(sigma, rows)]
        if not cone_has_direction(cone, w, dim):
            count += 1
    return count
