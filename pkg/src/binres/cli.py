"""Batch front end: ``binres <command> CONFIG.json [flags]``.

Exit codes: 0 success, 2 verification failure, 1 any other error.
Indices on the command line and in reports are 1-based.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from itertools import combinations
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .arrangement import count_w_bounded_topes, h_values, in_euler_jacobi, zonotope_facet_normals
from .dsystem import generate_system, reduce_to_ej, verify_annihilation
from .errors import BinresError, InternalInconsistency, ParseError, UsageError, ValidationError
from .exactmath import RationalFunction, VarTable, format_poly, parse_rational_function
from .hyperseries import find_exponents
from .matroid import (
    Configuration,
    chi_bound_check,
    euler_characteristic,
    gale_dual,
    lawrence_lift,
    nbc_bases,
)
from .residue import (
    ResidueOptions,
    circuit_resultant,
    independent_mod_unstable,
    os_relations,
    residue_beta,
    residue_series,
    resultant_vanishes_on_torus,
    stable_basis,
)

COMMANDS = (
    "chi",
    "circuits",
    "galedual",
    "nbc",
    "lawrence",
    "ejcone",
    "residue",
    "stable-basis",
    "os-check",
    "verify",
    "series",
    "exponents",
    "topes",
)


@dataclass
class JobOptions:
    n_max: Optional[int] = None
    verify_order: int = 5
    box_radius: Optional[int] = None
    weight: Optional[Tuple[Fraction, ...]] = None


@dataclass
class JobConfig:
    a: Tuple[Tuple[int, ...], ...]
    gamma: Optional[Tuple[int, ...]]
    beta: Tuple[int, ...]
    options: JobOptions = field(default_factory=JobOptions)

    @property
    def configuration(self) -> Configuration:
        return Configuration.from_columns(self.a)

    def residue_options(self) -> ResidueOptions:
        base = ResidueOptions.from_env()
        n_max = self.options.n_max if self.options.n_max is not None else base.n_max
        return ResidueOptions(n_max=n_max, verify_order=self.options.verify_order)

    def require_gamma(self) -> Tuple[int, ...]:
        if self.gamma is None:
            raise UsageError("this command needs \"gamma\" in the configuration")
        return self.gamma


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any]
    results: Dict[str, Any]
    verified: Optional[bool] = None
    timings: Dict[str, float] = field(default_factory=dict)
    lines: List[str] = field(default_factory=list)

    def to_json(self) -> str:
        data = asdict(self)
        data.pop("lines")
        return json.dumps(data, indent=2, default=_json_default)

    def to_text(self) -> str:
        out = list(self.lines)
        if self.verified is not None:
            out.append(f"verified: {'yes' if self.verified else 'NO'}")
        return "\n".join(out)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# ---------------------------------------------------------------------------
# parsing


def _int_vector(value, name: str) -> Tuple[int, ...]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise ValidationError(f"{name} must be a list of integers")
    return tuple(value)


def parse_fraction_vector(text: str) -> Tuple[Fraction, ...]:
    text = text.strip().strip("[]()")
    if not text:
        return ()
    try:
        return tuple(Fraction(tok.strip()) for tok in text.split(","))
    except ValueError as exc:
        raise UsageError(f"cannot read the vector {text!r}") from exc


def parse_index_set(text: str, n: int) -> Tuple[int, ...]:
    """'2,3' or '[2, 3]' (1-based) -> (1, 2)."""
    if not re.fullmatch(r"[\s\[\]\(\),\d{}]*", text):
        raise UsageError(f"cannot read the index set {text!r}")
    idx = [int(tok) for tok in re.findall(r"\d+", text)]
    if any(not 1 <= i <= n for i in idx):
        raise UsageError(f"indices must lie in 1..{n}")
    if len(set(idx)) != len(idx):
        raise UsageError("repeated index")
    return tuple(sorted(i - 1 for i in idx))


def parse_config(text: str) -> JobConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParseError("configuration must be a JSON object")
    unknown = set(data) - {"a", "beta", "gamma", "options"}
    if unknown:
        raise ValidationError(f"unknown keys: {sorted(unknown)}")
    if "a" not in data or not isinstance(data["a"], list) or not data["a"]:
        raise ValidationError("\"a\" must be a non-empty list of integer vectors")
    a = tuple(_int_vector(col, "each vector of a") for col in data["a"])
    cfg = Configuration.from_columns(a)
    n, d = cfg.n, cfg.d
    gamma = None
    if "gamma" in data:
        gamma = _int_vector(data["gamma"], "gamma")
        if len(gamma) != d:
            raise ValidationError(f"gamma has length {len(gamma)}, expected {d}")
    beta = (1,) * n
    if data.get("beta") is not None:
        beta = _int_vector(data["beta"], "beta")
        if len(beta) != n:
            raise ValidationError(f"beta has length {len(beta)}, expected {n}")
        if any(b < 1 for b in beta):
            raise ValidationError("beta must be positive")
    opts = JobOptions()
    raw = data.get("options") or {}
    if not isinstance(raw, dict):
        raise ValidationError("options must be an object")
    for key, value in raw.items():
        if key in ("n_max", "verify_order", "box_radius"):
            if not isinstance(value, int) or value < 0:
                raise ValidationError(f"option {key} must be a non-negative integer")
            setattr(opts, key, value)
        elif key == "weight":
            if not isinstance(value, list):
                raise ValidationError("option weight must be a list")
            try:
                opts.weight = tuple(Fraction(str(v)) for v in value)
            except ValueError as exc:
                raise ValidationError(f"bad weight entry: {exc}") from exc
        else:
            raise ValidationError(f"unknown option {key!r}")
    return JobConfig(a, gamma, beta, opts)


# ---------------------------------------------------------------------------
# rendering helpers


def _one_based(idx: Sequence[int]) -> List[int]:
    return [i + 1 for i in idx]


def _label(I: Sequence[int]) -> str:
    return "R_" + "".join(str(i + 1) for i in I)


def rf_payload(f: RationalFunction) -> Dict[str, Any]:
    text = f.to_text()
    back = parse_rational_function(f.table, text)
    if back != f:
        raise InternalInconsistency(f"canonical text does not round-trip: {text}")
    return {
        "text": text,
        "numerator": [[str(int(c)), list(e)] for e, c in f.num.terms()],
        "denominator": [[str(int(c)), list(e)] for e, c in f.den.terms()],
    }


def _residue_payload(res) -> Dict[str, Any]:
    return {
        "basis": _one_based(res.basis.I),
        "det": res.basis.det,
        "method": res.method,
        "truncation_order": res.truncation_order,
        "verified": res.verified,
        "value": rf_payload(res.value),
    }


# ---------------------------------------------------------------------------
# commands


def _cmd_chi(job: JobConfig, args) -> Report:
    cfg = job.configuration
    chi = euler_characteristic(cfg)
    abs_chi, bound, generic = chi_bound_check(cfg)
    res = {"chi": chi, "abs_chi": abs_chi, "bound": bound, "generic": generic}
    lines = [f"chi = {chi}", f"|chi| = {abs_chi} <= binom(n-1, d) = {bound}" + (" (generic, equality)" if generic else "")]
    return Report("chi", {}, res, None, lines=lines)


def _cmd_circuits(job: JobConfig, args) -> Report:
    cfg = job.configuration
    items = []
    lines = []
    ok = True
    for c in cfg.circuits:
        res = circuit_resultant(c, cfg.n)
        vanish = resultant_vanishes_on_torus(res, cfg)
        ok &= vanish
        text = format_poly(VarTable(cfg.n), res.polynomial)
        items.append({"support": _one_based(c.support), "relation": list(c.relation), "resultant": text, "vanishes_on_torus": vanish})
        lines.append(f"{_one_based(c.support)}  m = {list(c.relation)}  Res = {text}")
    return Report("circuits", {}, {"circuits": items}, ok, lines=lines)


def _cmd_galedual(job: JobConfig, args) -> Report:
    dual = gale_dual(job.configuration)
    rows = [list(r) for r in dual.rows]
    return Report("galedual", {}, {"rows": rows, "rank": dual.dim}, None, lines=[f"b_{i + 1} = {r}" for i, r in enumerate(rows)])


def _cmd_nbc(job: JobConfig, args) -> Report:
    cfg = job.configuration
    dual = gale_dual(cfg)
    bases = nbc_bases(dual)
    comps = [[j + 1 for j in range(cfg.n) if j not in B] for B in bases]
    res = {"nbc_bases": [_one_based(B) for B in bases], "count": len(bases), "complements": comps, "abs_chi": abs(euler_characteristic(cfg))}
    lines = [f"nbc bases of the Gale dual: {res['nbc_bases']}", f"complements: {comps}", f"count = {len(bases)}, |chi| = {res['abs_chi']}"]
    return Report("nbc", {}, res, len(bases) == res["abs_chi"], lines=lines)


def _cmd_lawrence(job: JobConfig, args) -> Report:
    L = lawrence_lift(job.configuration)
    rows = [list(r) for r in L.rows]
    return Report("lawrence", {}, {"rows": rows}, None, lines=[" ".join(f"{v:3d}" for v in r) for r in rows])


def _cmd_ejcone(job: JobConfig, args) -> Report:
    cfg = job.configuration
    gamma = job.require_gamma()
    normals = zonotope_facet_normals(cfg)
    h = h_values(cfg, job.beta, gamma, normals)
    inside = in_euler_jacobi(cfg, job.beta, gamma)
    u, v = reduce_to_ej(cfg, job.beta, gamma)
    res = {"normals": [list(e) for e in normals], "h": h, "in_euler_jacobi": inside, "reduction": {"u": list(u), "v": list(v)}}
    lines = [f"normals: {res['normals']}", f"h = {h}", f"in Euler-Jacobi cone: {inside}", f"reduction u = {list(u)}, v = {list(v)}"]
    return Report("ejcone", {}, res, None, lines=lines)


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"--{name} is required for this command")
    return value


def _cmd_residue(job: JobConfig, args) -> Report:
    cfg = job.configuration
    I = parse_index_set(_need(args, "basis"), cfg.n)
    res = residue_beta(cfg, I, job.beta, job.require_gamma(), job.residue_options())
    payload = _residue_payload(res)
    lines = [f"{_label(I)} = {payload['value']['text']}", f"method: {res.method}, flags: {res.verified}"]
    return Report("residue", {"basis": _one_based(I)}, payload, res.is_verified, lines=lines)


def _cmd_stable_basis(job: JobConfig, args) -> Report:
    cfg = job.configuration
    gamma = job.require_gamma()
    values = stable_basis(cfg, job.beta, gamma, job.residue_options())
    independent = independent_mod_unstable([r.value for r in values], cfg, job.beta, gamma)
    items = [_residue_payload(r) for r in values]
    lines = [f"{_label(r.basis.I)} = {r.value.to_text()}" for r in values]
    lines.append(f"{len(values)} residues, |chi| = {abs(euler_characteristic(cfg))}, independent modulo unstable: {independent}")
    ok = independent and all(r.is_verified for r in values)
    return Report("stable-basis", {}, {"residues": items, "independent_mod_unstable": independent}, ok, lines=lines)


def _relation_payload(rep) -> Dict[str, Any]:
    u, v = rep.shift
    return {
        "subset": _one_based(rep.subset),
        "terms": [{"sign": s, "basis": _one_based(I)} for s, I in rep.terms],
        "sum": rf_payload(rep.total),
        "reduction": {"u": list(u), "v": list(v)},
        "vanishes_mod_unstable": rep.vanishes,
        "relation": rep.describe(),
    }


def _cmd_os_check(job: JobConfig, args) -> Report:
    cfg = job.configuration
    sub = parse_index_set(_need(args, "subset"), cfg.n)
    rep = os_relations(cfg, sub, job.beta, job.require_gamma(), job.residue_options())
    payload = _relation_payload(rep)
    u, v = rep.shift
    lines = [payload["relation"], f"reduction d_x^{list(u)} d_y^{list(v)}: {'zero' if rep.vanishes else 'NONZERO'}"]
    return Report("os-check", {"subset": _one_based(sub)}, payload, rep.vanishes, lines=lines)


def _cmd_verify(job: JobConfig, args) -> Report:
    cfg = job.configuration
    gamma = job.require_gamma()
    opts = job.residue_options()
    values = stable_basis(cfg, job.beta, gamma, opts)
    checks = []
    lines = []
    ok = True
    for r in values:
        rep = verify_annihilation(r.value, cfg, job.beta, gamma)
        ok &= rep.passed
        checks.append({"basis": _one_based(r.basis.I), "operators": [{"operator": lbl, "zero": z} for lbl, z in rep.results]})
        lines.append(f"{_label(r.basis.I)}: {len(rep.results)} operators, {'all zero' if rep.passed else 'FAILED ' + ', '.join(rep.failures)}")
    relations = []
    for sub in combinations(range(cfg.n), cfg.d - 1):
        if not cfg.is_independent(sub):
            continue
        rep = os_relations(cfg, sub, job.beta, gamma, opts)
        ok &= rep.vanishes
        relations.append(_relation_payload(rep))
        lines.append(f"relation {_one_based(sub)}: {'zero' if rep.vanishes else 'NONZERO'} mod unstable")
    n_ops = len(generate_system(cfg, job.beta, gamma).operators)
    return Report("verify", {}, {"annihilation": checks, "relations": relations, "operators": n_ops}, ok, lines=lines)


def _cmd_series(job: JobConfig, args) -> Report:
    cfg = job.configuration
    I = parse_index_set(_need(args, "basis"), cfg.n)
    order = _need(args, "order")
    s = residue_series(cfg, I, job.require_gamma(), order)
    terms = [[str(c), list(e)] for e, c in s.terms]
    lines = [f"{c} * x^{e[:cfg.n]} y^{e[cfg.n:]}" for e, c in s.terms]
    return Report("series", {"basis": _one_based(I), "order": order}, {"frontier": s.frontier, "terms": terms}, None, lines=lines)


def _weight(job: JobConfig, args) -> Tuple[Fraction, ...]:
    if args.weight is not None:
        return parse_fraction_vector(args.weight)
    if job.options.weight is not None:
        return job.options.weight
    raise UsageError("a weight is required (--weight or options.weight)")


def _cmd_exponents(job: JobConfig, args) -> Report:
    cfg = job.configuration
    gamma = job.require_gamma()
    w = _weight(job, args)
    if len(w) != 2 * cfg.n:
        raise UsageError(f"the weight needs {2 * cfg.n} entries (one per Lawrence column)")
    alpha = tuple(-b for b in job.beta) + tuple(-g for g in gamma)
    exps = find_exponents(lawrence_lift(cfg), alpha, w, job.options.box_radius)
    inside = in_euler_jacobi(cfg, job.beta, gamma)
    abs_chi = abs(euler_characteristic(cfg))
    res = {
        "exponents": [{"v": list(e.v), "nsupp": _one_based(sorted(e.nsupp)), "weight": e.weight} for e in exps],
        "count": len(exps),
        "abs_chi": abs_chi,
        "in_euler_jacobi": inside,
    }
    lines = [f"v = {list(e.v)}" for e in exps]
    lines.append(f"{len(exps)} exponents, |chi| = {abs_chi}, Euler-Jacobi degree: {inside}")
    return Report("exponents", {"weight": list(w)}, res, (len(exps) == abs_chi) if inside else None, lines=lines)


def _cmd_topes(job: JobConfig, args) -> Report:
    cfg = job.configuration
    dual = gale_dual(cfg)
    w = _weight(job, args)
    if len(w) == cfg.n:
        w = tuple(sum(w[i] * dual.rows[i][k] for i in range(cfg.n)) for k in range(dual.dim))
    if len(w) != dual.dim:
        raise UsageError(f"the weight needs {dual.dim} (Gale space) or {cfg.n} entries")
    count = count_w_bounded_topes(dual.rows, w, dual.dim)
    abs_chi = abs(euler_characteristic(cfg))
    res = {"w_bounded_topes": count, "abs_chi": abs_chi}
    return Report("topes", {"weight": list(w)}, res, count == abs_chi, lines=[f"w-bounded topes: {count}, |chi| = {abs_chi}"])


_DISPATCH = {
    "chi": _cmd_chi,
    "circuits": _cmd_circuits,
    "galedual": _cmd_galedual,
    "nbc": _cmd_nbc,
    "lawrence": _cmd_lawrence,
    "ejcone": _cmd_ejcone,
    "residue": _cmd_residue,
    "stable-basis": _cmd_stable_basis,
    "os-check": _cmd_os_check,
    "verify": _cmd_verify,
    "series": _cmd_series,
    "exponents": _cmd_exponents,
    "topes": _cmd_topes,
}


def run_command(cmd: str, job: JobConfig, args: argparse.Namespace | None = None) -> Report:
    if cmd not in _DISPATCH:
        raise UsageError(f"unknown command {cmd!r}")
    if args is None:
        args = argparse.Namespace(basis=None, subset=None, order=None, weight=None)
    start = time.perf_counter()
    report = _DISPATCH[cmd](job, args)
    report.timings["total_s"] = round(time.perf_counter() - start, 6)
    report.inputs = {"a": [list(c) for c in job.a], "beta": list(job.beta), "gamma": list(job.gamma) if job.gamma else None, **report.inputs}
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="binres", description="Binomial residues and their matroid combinatorics.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("config", help="JSON job file, or - for stdin")
    p.add_argument("--basis", help="basis index set I, 1-based, e.g. 2,3")
    p.add_argument("--subset", help="(d-1)-subset for os-check, 1-based; use [] for the empty set")
    p.add_argument("--order", type=int, help="series truncation order N")
    p.add_argument("--weight", help="comma separated weight vector (fractions allowed)")
    p.add_argument("--json", action="store_true", help="print the structured report")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command not in _DISPATCH:
            raise UsageError(f"unknown command {args.command!r}; expected one of {', '.join(COMMANDS)}")
        if args.config == "-":
            text = sys.stdin.read()
        else:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {args.config}: {exc}") from exc
        job = parse_config(text)
        report = run_command(args.command, job, args)
    except InternalInconsistency as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 2
    except BinresError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1
    print(report.to_json() if args.json else report.to_text())
    return 2 if report.verified is False else 0


if __name__ == "__main__":
    sys.exit(main())
