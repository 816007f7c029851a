"""Input grammar round-trips and the command-line contract."""

import json
import os
import random
import subprocess
import sys
from fractions import Fraction as F

import pytest

from hyperred.errors import ParseError
from hyperred.grammar import format_mb, parse_hyper, parse_input
from hyperred.hyper import HyperFn
from hyperred.mb import DiagramPreset, get_preset
from hyperred.scalars import EpsLin


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "hyperred.cli", *args],
                          capture_output=True, text=True, env=env)


def test_parse_basic():
    fn = parse_hyper("2F1[1/2+eps, -eps; 1+2*eps; z]")
    assert fn == HyperFn([EpsLin(F(1, 2), 1), EpsLin(0, -1)], [EpsLin(1, 2)])
    assert fn.var == "z" and fn.kappa == 1


def test_parse_arity_error():
    with pytest.raises(ParseError):
        parse_input("2F1[1/2; 1; z]")


def test_parse_unknown_symbol():
    with pytest.raises(ParseError) as e:
        parse_input("2F1[a, 1; 1; z]")
    assert "a" in str(e.value)


def test_parse_preset():
    p = parse_input("@v1200")
    assert isinstance(p, DiagramPreset)
    assert p.mb == get_preset("v1200").mb


def test_parse_error_position():
    with pytest.raises(ParseError) as e:
        parse_input("2F1[1/2+eps, -eps; 1+2*eps; z")
    assert e.value.line == 1 and e.value.column >= 28


def test_parse_mb():
    m = parse_input("MB[-1/4*y; [j1+j2+sigma-n/2, j1, j2, n/2-sigma]; "
                    "[n/2, (j1+j2)/2, (j1+j2+1)/2]; []; []]")
    ref = get_preset("c3").mb
    assert sorted(f.sort_key() for f in m.a_forms) == \
        sorted(f.sort_key() for f in ref.a_forms)
    assert m.kappa == F(-1, 4)


def test_round_trip_hyper():
    rng = random.Random(19)
    for _ in range(25):
        p = rng.choice((1, 2, 3))
        up = [EpsLin(F(rng.randint(-9, 9), rng.randint(1, 6)),
                     F(rng.randint(-4, 4), rng.randint(1, 3))) for _ in range(p + 1)]
        lo = [EpsLin(F(rng.randint(1, 9), rng.randint(1, 6)),
                     F(rng.randint(-4, 4), rng.randint(1, 3))) for _ in range(p)]
        kappa = F(rng.choice((-1, 1, 4, -1)), rng.choice((1, 4)))
        fn = HyperFn(up, lo, kappa, rng.choice(("z", "y", "w")))
        assert parse_hyper(str(fn)) == fn


def test_round_trip_mb_presets():
    for name in ("c3", "c1", "v1200"):
        mb = get_preset(name).mb
        again = parse_input(format_mb(mb))
        assert again == mb


def test_cli_expand_and_verify():
    r = run_cli("expand", "2F1[2*eps,3*eps;1+5*eps;z]", "--order", "2")
    assert r.returncode == 0, r.stderr
    assert "G(0,1;z)" in r.stdout
    assert "verified" in r.stdout


def test_cli_count_masters_presets():
    r = run_cli("count-masters", "@c3", "--j1", "1", "--j2", "1", "--sigma", "1")
    assert r.returncode == 0, r.stderr
    assert "L = 2" in r.stdout


def test_cli_exit_codes():
    r = run_cli("expand", "2F1[oops; 1; z]", "--order", "2")
    assert r.returncode == 2
    r = run_cli("expand", "2F1[1/3+eps,eps;1+eps;z]", "--order", "2")
    assert r.returncode == 3
    r = run_cli("reduce", "2F1[1/3,1/5;-1+eps;z]", "--basis", "2F1[1/3,1/5;-2+eps;z]")
    assert r.returncode == 4
    r = run_cli("verify", "/nonexistent/x", "--suite")
    assert r.returncode == 0 or r.returncode == 5   # --suite ignores the path


def test_cli_deterministic_jsonl():
    args = ("expand", "2F1[2*eps,3*eps;1+5*eps;z]", "--order", "2",
            "--format", "jsonl")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    rec = json.loads(a.stdout.strip())
    assert rec["verified"] is True
    assert rec["layers"][2]["terms"][0]["coeff"] == "-6"


def test_cli_saved_result_verification(tmp_path):
    out = tmp_path / "result.jsonl"
    r = run_cli("reduce", "2F1[7/5+eps,1/3-eps;1/2+2*eps;z]",
                "--basis", "2F1[2/5+eps,1/3-eps;3/2+2*eps;z]",
                "--format", "jsonl", "--out", str(out))
    assert r.returncode == 0, r.stderr
    r = run_cli("verify", str(out))
    assert r.returncode == 0, r.stderr
    # corrupt one rational in the stored S polynomial
    rec = json.loads(out.read_text())
    rec["s"]["num"][0][1] = "9999"
    out.write_text(json.dumps(rec) + "\n")
    r = run_cli("verify", str(out))
    assert r.returncode == 5


def test_cli_env_format(tmp_path):
    r = run_cli("count-basis", "2F1[1/2+eps,-eps;1+2*eps;z]",
                env_extra={"HYPERRED_FORMAT": "jsonl"})
    assert r.returncode == 0
    rec = json.loads(r.stdout.strip())
    assert rec["L"] == 2


def test_cli_mb_command():
    r = run_cli("mb", "@c1", "--format", "jsonl")
    assert r.returncode == 0, r.stderr
    lines = [json.loads(l) for l in r.stdout.strip().splitlines()]
    assert len(lines) == 2
    assert lines[0]["command"] == "mb"


def test_cli_check_parametrization():
    r = run_cli("check-parametrization", "gauss", "--p1", "1", "--p2", "1",
                "--r", "-1", "--q", "2")
    assert r.returncode == 0 and "Lemma IV" in r.stdout and "True" in r.stdout
    r = run_cli("check-parametrization", "3f2", "--r", "1", "--p", "-1", "--q", "2")
    assert r.returncode == 0 and "rational parametrization exists: True" in r.stdout
    r = run_cli("check-parametrization", "3f2", "--r", "1", "--p", "1", "--q", "2")
    assert "rational parametrization exists: False" in r.stdout
    r = run_cli("check-parametrization", "f3", "--p1", "1", "--p2", "0",
                "--r1", "0", "--r2", "1", "--p", "0", "--q", "2")
    assert r.returncode == 0 and "admissibility: True" in r.stdout


def test_cli_verify_suite():
    r = run_cli("verify", "--suite")
    assert r.returncode == 0, r.stdout + r.stderr
    assert r.stdout.count("PASS") == 4


def test_cli_order_bounds():
    r = run_cli("expand", "2F1[2*eps,3*eps;1+5*eps;z]", "--order", "2", "--N", "9999")
    assert r.returncode == 3
    r = run_cli("expand", "2F1[2*eps,3*eps;1+5*eps;z]", "--order", "99")
    assert r.returncode == 3


def test_cli_expand_record_round_trip(tmp_path):
    out = tmp_path / "exp.jsonl"
    r = run_cli("expand", "2F1[2*eps,3*eps;1+5*eps;z]", "--order", "2",
                "--format", "jsonl", "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert run_cli("verify", str(out)).returncode == 0
    rec = json.loads(out.read_text())
    rec["layers"][2]["terms"][0]["coeff"] = "-7"
    out.write_text(json.dumps(rec) + "\n")
    assert run_cli("verify", str(out)).returncode == 5


def test_cli_file_input(tmp_path):
    p = tmp_path / "fn.txt"
    p.write_text("2F1[2*eps,3*eps;1+5*eps;z]\n")
    r = run_cli("count-basis", f"file:{p}")
    assert r.returncode == 0 and "L = 2" in r.stdout


def test_cli_expand_half_integer():
    r = run_cli("expand", "2F1[1/2+eps, 1/2-eps; 3/2+2*eps; z]",
                "--order", "3", "--N", "20")
    assert r.returncode == 0, r.stderr
    assert "sqrt(-z)*F in xi" in r.stdout
    assert "verified" in r.stdout
