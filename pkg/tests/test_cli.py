from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from binres.cli import main, parse_config, parse_fraction_vector, parse_index_set, run_command
from binres.errors import ParseError, UsageError, ValidationError
from binres.exactmath import VarTable, parse_rational_function

from conftest import golden

ROOT = Path(__file__).resolve().parents[1]
EX1 = '{"a": [[1],[1],[1]], "gamma": [3]}'
TC = '{"a": [[1,0],[1,1],[1,2],[1,3]], "gamma": [1,1]}'


@pytest.fixture()
def write(tmp_path):
    def _write(text, name="job.json"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def test_parse_example_jobs():
    job = parse_config(EX1)
    assert job.a == ((1,), (1,), (1,)) and job.beta == (1, 1, 1) and job.gamma == (3,)
    assert parse_config(TC).configuration.n == 4


@pytest.mark.parametrize(
    "text, exc",
    [
        ("{not json", ParseError),
        ("[1, 2]", ParseError),
        ('{"a": [[0]], "gamma": [1]}', ValidationError),
        ('{"a": [[1],[1]], "gamma": [1, 2]}', ValidationError),
        ('{"a": [[1],[1]], "beta": [1, 0], "gamma": [1]}', ValidationError),
        ('{"a": [[1],[1]], "beta": [1], "gamma": [1]}', ValidationError),
        ('{"a": [[1, 0],[1]], "gamma": [1]}', ValidationError),
        ('{"a": [[1],[1]], "gamma": [1], "colour": 3}', ValidationError),
        ('{"a": [[1],[1]], "gamma": [1], "options": {"n_max": -1}}', ValidationError),
        ('{"a": [[1],[1.5]], "gamma": [1]}', ValidationError),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_config(text)


def test_zero_column_message():
    with pytest.raises(ValidationError, match="non-zero lattice vectors"):
        parse_config('{"a": [[0]], "gamma": [0]}')


def test_index_and_vector_parsing():
    assert parse_index_set("2,3", 4) == (1, 2)
    assert parse_index_set("[]", 3) == ()
    assert parse_fraction_vector("1, 3/2, -2") == (Fraction(1), Fraction(3, 2), Fraction(-2))
    for bad in ("5", "1,1", "a"):
        with pytest.raises(UsageError):
            parse_index_set(bad, 4)


def test_options_precedence(monkeypatch):
    monkeypatch.setenv("BINRES_NMAX", "9")
    assert parse_config(EX1).residue_options().n_max == 9
    job = parse_config('{"a": [[1]], "gamma": [1], "options": {"n_max": 4}}')
    assert job.residue_options().n_max == 4


def test_chi_command():
    rep = run_command("chi", parse_config(EX1))
    assert rep.results["chi"] == -2 and rep.results["abs_chi"] == 2 and rep.results["bound"] == 2


def test_residue_command_text_round_trips():
    rep = run_command("residue", parse_config(EX1), _ns(basis="1"))
    text = rep.results["value"]["text"]
    f = parse_rational_function(VarTable(3), text)
    assert f.to_text() == text and f == golden("R1", 3)
    assert rep.verified is True


def test_stable_basis_command_matches_printed_residues():
    rep = run_command("stable-basis", parse_config(TC))
    assert rep.verified
    texts = [r["value"]["text"] for r in rep.results["residues"]]
    assert len(texts) == 3 and rep.results["independent_mod_unstable"]
    job = parse_config(TC)
    for r in rep.results["residues"]:
        single = run_command("residue", job, _ns(basis=",".join(map(str, r["basis"]))))
        assert single.results["value"]["text"] == r["value"]["text"]


def test_os_check_command():
    rep = run_command("os-check", parse_config(EX1), _ns(subset="[]"))
    assert rep.results["sum"]["text"] == "1/(y1*y2*y3)"
    assert rep.results["vanishes_mod_unstable"] and rep.verified
    assert sum(rep.results["reduction"]["u"]) == 1


def test_series_and_ejcone_commands():
    rep = run_command("series", parse_config(EX1), _ns(basis="1", order=0))
    assert rep.results["terms"] == [["1", [2, -1, -1, -3, 0, 0]]]
    ej = run_command("ejcone", parse_config(EX1))
    assert ej.results["h"] == [2, -1] and not ej.results["in_euler_jacobi"]


def test_exponents_and_topes_commands():
    job = parse_config('{"a": [[1],[1],[1]], "beta": [2,1,1], "gamma": [3]}')
    rep = run_command("exponents", job, _ns(weight="1,3,7,2,5,11"))
    assert rep.results["count"] == 2 and rep.verified
    topes = run_command("topes", parse_config(EX1), _ns(weight="1,5"))
    assert topes.results["w_bounded_topes"] == 2 and topes.verified


def test_unknown_command():
    with pytest.raises(UsageError):
        run_command("nope", parse_config(EX1))


def _ns(**kw):
    import argparse

    base = dict(basis=None, subset=None, order=None, weight=None)
    base.update(kw)
    return argparse.Namespace(**base)


# --- main and exit codes ---------------------------------------------------------------------


def test_main_exit_codes(write, capsys):
    path = write(EX1)
    assert main(["chi", path]) == 0
    assert "chi = -2" in capsys.readouterr().out
    assert main(["residue", path]) == 1  # --basis missing
    assert main(["bogus", path]) == 1
    assert main(["chi", write("{broken", "bad.json")]) == 1
    assert main(["chi", str(Path(path).with_name("missing.json"))]) == 1
    assert main(["stable-basis", write('{"a": [[1,0],[0,1]], "gamma": [0,0]}', "coloop.json")]) == 1


def test_main_json_output(write, capsys):
    assert main(["residue", write(TC), "--basis", "2,4", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["command"] == "residue"
    assert data["results"]["det"] == 2 and data["results"]["method"] == "series_reconstruction"
    assert all(data["results"]["verified"].values())
    f = parse_rational_function(VarTable(4), data["results"]["value"]["text"])
    assert f == golden("R24", 4) or f == -golden("R24", 4)


def test_wall_weight_and_non_ej_exit_codes(write, capsys):
    # a weight on a wall of the arrangement is rejected as an input problem, not a failed identity
    assert main(["topes", write(EX1), "--weight", "1,0"]) == 1
    assert "NonGenericWeight" in capsys.readouterr().err
    # outside the Euler-Jacobi cone the count may differ from |chi|; that is reported, not a failure
    assert main(["exponents", write(EX1), "--weight", "1,3,7,2,5,11"]) == 0


def test_truncation_reported_as_error(write, capsys):
    path = write('{"a": [[1,0],[1,1],[1,2],[1,3]], "gamma": [1,1], "options": {"n_max": 1}}')
    assert main(["residue", path, "--basis", "2,4"]) == 1
    assert "TruncationExceeded" in capsys.readouterr().err


def test_console_script_and_module_entry(write):
    path = write(EX1)
    out = subprocess.run([sys.executable, "-m", "binres", "chi", path], capture_output=True, text=True, cwd=ROOT)
    assert out.returncode == 0 and "chi = -2" in out.stdout
    out = subprocess.run(
        [sys.executable, "-m", "binres", "verify", str(ROOT / "configs" / "twisted_cubic.json")],
        capture_output=True, text=True, cwd=ROOT,
    )
    assert out.returncode == 0 and "verified: yes" in out.stdout


def test_failed_verification_exits_with_two(write, monkeypatch, capsys):
    from binres import cli
    from binres.errors import InternalInconsistency

    path = write(EX1)
    monkeypatch.setitem(cli._DISPATCH, "chi", lambda job, args: cli.Report("chi", {}, {}, False, lines=["forced"]))
    assert main(["chi", path]) == 2
    assert "verified: NO" in capsys.readouterr().out

    def boom(job, args):
        raise InternalInconsistency("sum relation did not reduce")

    monkeypatch.setitem(cli._DISPATCH, "chi", boom)
    assert main(["chi", path]) == 2
    assert "verification failure" in capsys.readouterr().err


def test_stdin_config(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(TC))
    assert main(["chi", "-"]) == 0
    assert "chi = 3" in capsys.readouterr().out
