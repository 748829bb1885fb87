from __future__ import annotations

import random
import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings

from binres.exactmath import VarTable, parse_rational_function
from binres.matroid import Configuration, detect_coloops

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


EXAMPLE1 = [[1], [1], [1]]
TWISTED_CUBIC = [[1, 0], [1, 1], [1, 2], [1, 3]]

# rational functions exactly as displayed for the two worked examples
GOLDEN_TEXT = {
    "R1": "x1**2/((x1*y2 - x2*y1)*(x1*y3 - x3*y1)*y1)",
    "R2": "x2**2/((x3*y2 - x2*y3)*(x1*y2 - x2*y1)*y2)",
    "R3": "x3**2/((x2*y3 - x3*y2)*(x1*y3 - x3*y1)*y3)",
    "R23": "x2*y3**2*y2/((x3**2*y2*y4 - x2*x4*y3**2)*(x1*x3*y2**2 - x2**2*y1*y3))",
    "R24": "y4*y2*(x2**2*y3*y1 + x1*x3*y2**2)/((x3**2*y2*y4 - x2*x4*y3**2)*(x2**3*y1**2*y4 - x1**2*x4*y2**3))",
    "R34": "x3*x4*y3**3*y4/((y2*y4*x3**2 - y3**2*x2*x4)*(y3**3*x4**2*x1 - x3**3*y1*y4**2))",
}


def from_sympy(expr, n: int):
    """Bring a sympy rational expression into canonical package form via its text grammar."""
    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
    text_num = str(sympy.expand(num)).replace("**", "^").replace(" ", "")
    text_den = str(sympy.expand(den)).replace("**", "^").replace(" ", "")
    return parse_rational_function(VarTable(n), f"({text_num})/({text_den})")


def golden(name: str, n: int):
    syms = {f"{v}{i}": sympy.Symbol(f"{v}{i}") for v in "xy" for i in range(1, n + 1)}
    return from_sympy(sympy.sympify(GOLDEN_TEXT[name], locals=syms), n)


@pytest.fixture(scope="session")
def ex1():
    return Configuration.from_columns(EXAMPLE1)


@pytest.fixture(scope="session")
def tcubic():
    return Configuration.from_columns(TWISTED_CUBIC)


def random_configuration(rng: random.Random, d: int, n: int, lo: int = -3, hi: int = 3) -> Configuration:
    """Uniform entries in [lo, hi], rejecting zero columns, rank deficiency and coloops."""
    while True:
        cols = [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(n)]
        if any(not any(c) for c in cols):
            continue
        cfg = Configuration.from_columns(cols, validate=False)
        if cfg.rank != d or detect_coloops(cfg):
            continue
        return cfg


def random_configurations(seed: int, count: int, max_d: int = 3, max_n: int = 7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(1, max_d)
        n = rng.randint(d + 1, max_n)
        out.append(random_configuration(rng, d, n))
    return out


def random_generic_weights(rng: random.Random, dim: int, count: int, check):
    """Random rational weights accepted by ``check`` (which raises on non-generic input)."""
    from binres.errors import NonGenericWeight

    out = []
    while len(out) < count:
        w = tuple(Fraction(rng.randint(-97, 97), rng.randint(1, 11)) for _ in range(dim))
        try:
            check(w)
        except NonGenericWeight:
            continue
        out.append(w)
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, status = results[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
