"""The hypergeometric system H_A(-beta, -gamma) of a Lawrence lifting, applied to
rational functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from sympy.polys.rings import PolyElement

from .arrangement import h_values, in_euler_jacobi, zonotope_facet_normals
from .errors import ColoopConfiguration, ReductionBudgetExceeded
from .exactmath import RationalFunction, VarTable, factored_sum
from .matroid import Configuration, detect_coloops

MultiIndex = Tuple[int, ...]


@dataclass(frozen=True)
class DifferentialOperator:
    """sum of coefficient * d^multiindex, the multi-index running over x_1..x_n, y_1..y_n."""

    terms: Tuple[Tuple[PolyElement, MultiIndex], ...]
    label: str = ""

    def __str__(self) -> str:
        return self.label or repr(self.terms)


@dataclass(frozen=True)
class SystemSpec:
    toric_ops: Tuple[DifferentialOperator, ...]
    euler_ops: Tuple[DifferentialOperator, ...]

    @property
    def operators(self) -> Tuple[DifferentialOperator, ...]:
        return self.toric_ops + self.euler_ops


@dataclass
class AnnihilationReport:
    results: List[Tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.results)

    @property
    def failures(self) -> List[str]:
        return [label for label, ok in self.results if not ok]

    def homogeneity_ok(self) -> bool:
        return all(ok for label, ok in self.results if not label.startswith("d"))

    def toric_ok(self) -> bool:
        return all(ok for label, ok in self.results if label.startswith("d"))


def _partial_label(table: VarTable, mi: MultiIndex) -> str:
    parts = []
    for idx, e in enumerate(mi):
        if e:
            name = table.names[idx]
            parts.append(f"d{name}" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts) or "1"


def generate_system(cfg: Configuration, beta: Sequence[int], gamma: Sequence[int]) -> SystemSpec:
    n, d = cfg.n, cfg.d
    table = VarTable(n)
    R = table.ring
    toric = []
    for circ in cfg.circuits:
        first = [0] * (2 * n)
        second = [0] * (2 * n)
        for i, m in zip(circ.support, circ.relation):
            if m > 0:
                first[table.x(i)] = m
                second[table.y(i)] = m
            else:
                first[table.y(i)] = -m
                second[table.x(i)] = -m
        first, second = tuple(first), tuple(second)
        label = f"{_partial_label(table, first)} - {_partial_label(table, second)}"
        toric.append(DifferentialOperator(((R.one, first), (-R.one, second)), label))
    euler = []
    zero = (0,) * (2 * n)
    for i in range(n):
        ex = tuple(int(k == table.x(i)) for k in range(2 * n))
        ey = tuple(int(k == table.y(i)) for k in range(2 * n))
        terms = ((table.gen(table.x(i)), ex), (table.gen(table.y(i)), ey), (R(int(beta[i])), zero))
        euler.append(DifferentialOperator(terms, f"x{i+1}*dx{i+1} + y{i+1}*dy{i+1} + {beta[i]}"))
    for j in range(d):
        terms = []
        text = []
        for i, a in enumerate(cfg.columns):
            if a[j]:
                ey = tuple(int(k == table.y(i)) for k in range(2 * n))
                terms.append((table.gen(table.y(i)) * a[j], ey))
                text.append(f"{a[j]}*y{i+1}*dy{i+1}")
        if gamma[j]:
            terms.append((R(int(gamma[j])), zero))
        text.append(str(gamma[j]))
        euler.append(DifferentialOperator(tuple(terms), " + ".join(text)))
    return SystemSpec(tuple(toric), tuple(euler))


def _apply_factored(op: DifferentialOperator, f: RationalFunction):
    F = f.factored()
    return factored_sum((coeff, F.derivative(mi)) for coeff, mi in op.terms)


def apply_operator(op: DifferentialOperator, f: RationalFunction) -> RationalFunction:
    if f.is_zero():
        return f
    return _apply_factored(op, f).to_rational()


def annihilates(op: DifferentialOperator, f: RationalFunction) -> bool:
    """Exact zero test of op(f) without canonicalising the result."""
    if f.is_zero():
        return True
    return _apply_factored(op, f).is_zero()


def verify_annihilation(f: RationalFunction, cfg: Configuration, beta: Sequence[int], gamma: Sequence[int]) -> AnnihilationReport:
    system = generate_system(cfg, beta, gamma)
    report = AnnihilationReport()
    for op in system.operators:
        report.results.append((op.label, annihilates(op, f)))
    return report


def reduce_to_ej(cfg: Configuration, beta: Sequence[int], gamma: Sequence[int], budget: int = 500) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Greedy (u, v) with (beta + u + v, gamma + sum v_i a_i) in the Euler-Jacobi cone."""
    if detect_coloops(cfg):
        raise ColoopConfiguration("configuration has a coloop; the Euler-Jacobi cone is degenerate")
    normals = zonotope_facet_normals(cfg)
    n = cfg.n
    u = [0] * n
    v = [0] * n
    b = list(beta)
    g = list(gamma)

    def violation(bb, gg) -> int:
        return sum(-h for h in h_values(cfg, bb, gg, normals) if h < 0)

    current = violation(b, g)
    steps = 0
    while current > 0:
        if steps >= budget:
            raise ReductionBudgetExceeded(f"no Euler-Jacobi degree within {budget} steps")
        best = None
        for i in range(n):
            b2 = b.copy()
            b2[i] += 1
            cand_u = violation(b2, g)
            g2 = [x + y for x, y in zip(g, cfg.columns[i])]
            cand_v = violation(b2, g2)
            for score, kind in ((cand_u, 0), (cand_v, 1)):
                key = (score, kind, i)
                if best is None or key < best:
                    best = key
        score, kind, i = best
        b[i] += 1
        if kind == 0:
            u[i] += 1
        else:
            v[i] += 1
            g = [x + y for x, y in zip(g, cfg.columns[i])]
        current = score
        steps += 1
    if not in_euler_jacobi(cfg, b, g):
        raise AssertionError("greedy reduction ended outside the Euler-Jacobi cone")
    return tuple(u), tuple(v)
