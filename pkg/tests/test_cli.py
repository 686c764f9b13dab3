import json
import subprocess
import sys

import pytest

from dixq import golden
from dixq.arith import QQ
from dixq.cli import DEFAULT_SEED, RunConfig, config_from_args, build_parser, main, run_command
from dixq.operators import DifferenceOperator


def run(argv, capsys):
    status = main(argv)
    cap = capsys.readouterr()
    return status, cap.out, cap.err


def test_build_symbolic_matches_general_table(capsys):
    status, out, _ = run(["build", "--c1", "sym", "--c2", "sym", "--a", "n+1", "--gamma", "n", "--order", "2", "--format", "json"], capsys)
    assert status == 0
    doc = json.loads(out)["operators"]["L2"]
    assert doc["curve"] == {"c1": "sym", "c2": "sym"}
    assert DifferenceOperator.from_json(doc) == golden.general_L2()


def test_build_text_lists_five_coefficients(capsys):
    status, out, _ = run(["build", "--c1", "sym", "--c2", "sym", "--order", "2", "--format", "text"], capsys)
    assert status == 0
    lines = [s.strip() for s in out.splitlines()]
    assert lines[0] == "L2:"
    assert [s.split(":")[0] for s in lines[1:6]] == ["T^2", "T^1", "T^0", "T^-1", "T^-2"]
    assert lines[2] == "T^1: 2*n + 4"


def test_build_no_normalize_restores_constant(capsys):
    _, out, _ = run(["build", "--order", "2", "--format", "json", "--no-normalize"], capsys)
    L = DifferenceOperator.from_json(json.loads(out)["operators"]["L2"])
    assert L == golden.example_L2("with factor (n^3-2)")


def test_build_latex(capsys):
    status, out, _ = run(["build", "--order", "2", "--format", "latex"], capsys)
    assert status == 0 and "T^{2}" in out and "\\frac" not in out.split("T^{2}")[0]


def test_verify_commute(capsys):
    status, out, _ = run(["verify", "commute", "--c1", "0", "--c2", "1", "--order", "3"], capsys)
    assert status == 0 and "commutator = 0" in out


def test_verify_kn(capsys):
    status, out, _ = run(["verify", "kn", "--n-min", "5", "--n-max", "10"], capsys)
    assert status == 0


def test_verify_kn_degenerate_window_is_usage_error(capsys):
    status, _, err = run(["verify", "kn", "--n-min", "-1", "--n-max", "2"], capsys)
    assert status == 2 and "gamma(0) = 0" in err


def test_verify_paper(capsys):
    status, out, _ = run(["verify", "paper", "--format", "json"], capsys)
    doc = json.loads(out)
    assert status == 0 and doc["ok"]
    assert doc["example_L2_T0_shift"] == "5/2"
    assert doc["T-2_variants_commuting_with_tabulated_L3"] == ["with factor (n^3-2)"]


def test_eigen(capsys):
    status, out, _ = run(["eigen", "--c1", "0", "--c2", "1", "--z0", "1/2", "--n0", "5", "--len", "20"], capsys)
    assert status == 0 and out.strip().endswith("max residual = 0")


def test_curve_relation(capsys):
    status, out, _ = run(["curve", "--degree", "6", "--format", "json"], capsys)
    doc = json.loads(out)
    assert status == 0
    assert doc["relation"] == "mu^2 - lambda^3 - 31/4*lambda^2 - 79/4*lambda - 33/2"
    assert doc["weighted_degree"] == 6


def test_curve_relation_too_low_degree_fails(capsys):
    status, _, err = run(["curve", "--degree", "5"], capsys)
    assert status == 1 and "no relation" in err


@pytest.mark.parametrize(
    "argv,fragment",
    [
        (["build", "--a", "n+"], "offset 2"),
        (["build", "--a", "0.5*n"], "non-rational literal"),
        (["build", "--c1", "sym", "--c2", "1"], "both"),
        (["build", "--gamma", "3"], "depend on n"),
        (["build", "--order", "1"], "at least 2"),
        (["build", "--c1", "0", "--c2", "-2"], "singular"),
        (["eigen", "--c1", "sym", "--c2", "sym"], "numeric"),
    ],
)
def test_usage_errors(argv, fragment, capsys):
    status, out, err = run(argv, capsys)
    assert status == 2 and fragment in err and out == ""


def test_argparse_errors_are_usage_errors(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["build", "--order", "x"]) == 2


def test_json_error_document(capsys):
    status, out, _ = run(["build", "--a", "n+", "--format", "json"], capsys)
    doc = json.loads(out)
    assert status == 2 and doc["type"] == "ParseError" and doc["offset"] == 2 and "n" in doc["expected"]


def test_output_is_deterministic():
    cfg = RunConfig("eigen", random_points=2, length=8)
    assert run_command(cfg) == run_command(cfg)


def test_seed_from_environment(monkeypatch):
    parser = build_parser()
    assert config_from_args(parser.parse_args(["eigen"])).seed == DEFAULT_SEED
    monkeypatch.setenv("DIXQ_SEED", "7")
    assert config_from_args(parser.parse_args(["eigen"])).seed == 7
    assert config_from_args(parser.parse_args(["eigen", "--seed", "9"])).seed == 9
    a = run_command(RunConfig("eigen", random_points=2, length=6, seed=7))[1]
    b = run_command(RunConfig("eigen", random_points=2, length=6, seed=8))[1]
    assert a != b


def test_run_config_round_trip():
    cfg = RunConfig("eigen", c1="1/3", z0=["1/2", "2"], random_points=3, seed=5, out="x.json")
    assert RunConfig.from_json(cfg.to_json()) == cfg


def test_out_file(tmp_path, capsys):
    target = tmp_path / "ops.json"
    status, out, _ = run(["build", "--order", "2", "--format", "json", "--out", str(target)], capsys)
    assert status == 0 and out == ""
    doc = json.loads(target.read_text())
    assert DifferenceOperator.from_json(doc["operators"]["L2"], QQ).order == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dixq", "verify", "commute", "--order", "2"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
