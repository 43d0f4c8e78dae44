"""CLI surface: grammar, exit codes, JSON schema, determinism, truncation."""

import json

import pytest

from ellseries.cli import main

SCHEMA_KEYS = {"command", "target_digits", "value_digits", "terms_used",
               "digits_per_term", "oracle_agreement_digits",
               "elapsed_seconds", "warnings"}


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_constant_text(capsys):
    code, out, err = _run(capsys, ["constant", "gamma-quarter", "--digits", "50"])
    assert code == 0
    assert "2.3606811980321924520906758811169771744674332697628" in out


def test_constant_json_schema(capsys):
    code, out, _ = _run(capsys, ["constant", "gamma-quarter", "--digits", "60",
                                 "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert set(rep.keys()) == SCHEMA_KEYS
    assert rep["target_digits"] == 60
    assert rep["oracle_agreement_digits"] >= 55
    assert len(rep["value_digits"].replace(".", "").lstrip("-")) == 60
    assert rep["warnings"]


def test_constant_deterministic(capsys):
    _, out1, _ = _run(capsys, ["constant", "gamma-quarter", "--digits", "40",
                               "--format", "json"])
    _, out2, _ = _run(capsys, ["constant", "gamma-quarter", "--digits", "40",
                               "--format", "json"])
    assert json.loads(out1)["value_digits"] == json.loads(out2)["value_digits"]


def test_constant_prefix_stability(capsys):
    _, out1, _ = _run(capsys, ["constant", "gamma-quarter", "--digits", "40",
                               "--format", "json"])
    _, out2, _ = _run(capsys, ["constant", "gamma-quarter", "--digits", "90",
                               "--format", "json"])
    v40 = json.loads(out1)["value_digits"]
    v90 = json.loads(out2)["value_digits"]
    assert v90.startswith(v40)


def test_constant_unknown_name_is_usage_error(capsys):
    code, _, err = _run(capsys, ["constant", "bogus", "--digits", "50"])
    assert code == 1
    assert "invalid choice" in err


def test_constant_low_digits_is_precision_error(capsys):
    code, _, err = _run(capsys, ["constant", "gamma-quarter", "--digits", "5"])
    assert code == 2
    assert "precision too low" in err


def test_elliptic_both_methods_agree(capsys):
    code, out, _ = _run(capsys, ["elliptic", "K", "--r", "4", "--digits", "80",
                                 "--method", "both", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert set(rep.keys()) == SCHEMA_KEYS
    assert rep["oracle_agreement_digits"] >= 75
    assert rep["value_digits"].startswith("1.5825517272237159")


def test_elliptic_E(capsys):
    code, out, _ = _run(capsys, ["elliptic", "E", "--r", "2", "--digits", "60",
                                 "--method", "both", "--format", "json"])
    assert code == 0
    assert json.loads(out)["oracle_agreement_digits"] >= 55


def test_elliptic_rational_r(capsys):
    code, out, _ = _run(capsys, ["elliptic", "K", "--r", "1/4", "--digits", "40",
                                 "--format", "json"])
    assert code == 0
    assert json.loads(out)["oracle_agreement_digits"] >= 35


def test_elliptic_agm_method_at_r1(capsys):
    code, out, _ = _run(capsys, ["elliptic", "K", "--r", "1", "--digits", "50",
                                 "--method", "agm", "--format", "json"])
    assert code == 0
    assert json.loads(out)["value_digits"].startswith("1.854074677301371918")


def test_elliptic_series_at_r1_is_domain_error(capsys):
    code, _, err = _run(capsys, ["elliptic", "K", "--r", "1", "--digits", "50",
                                 "--method", "series"])
    assert code == 2
    assert "agm" in err


def test_elliptic_nonpositive_r(capsys):
    code, _, _ = _run(capsys, ["elliptic", "K", "--r", "0", "--digits", "50"])
    assert code == 2


def test_elliptic_malformed_r_is_usage_error(capsys):
    code, _, _ = _run(capsys, ["elliptic", "K", "--r", "abc", "--digits", "50"])
    assert code == 1


def test_unknown_subcommand(capsys):
    code, _, _ = _run(capsys, ["frobnicate"])
    assert code == 1


def test_verify_small_selection(capsys):
    code, out, _ = _run(capsys, ["verify", "--digits", "60",
                                 "--selection", "oracle"])
    assert code == 0
    assert "[PASS]" in out
    assert "FAIL" not in out


def test_verify_json(capsys):
    code, out, _ = _run(capsys, ["verify", "--digits", "60",
                                 "--selection", "oracle", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] is True
    assert all({"name", "group", "passed", "residual_digits", "detail"}
               <= set(c.keys()) for c in rep["checks"])


def test_verify_low_digits(capsys):
    code, _, _ = _run(capsys, ["verify", "--digits", "5"])
    assert code == 2


def test_verify_bad_selection(capsys):
    code, _, _ = _run(capsys, ["verify", "--digits", "60", "--selection", "bogus"])
    assert code == 1


def test_bench_low_digits(capsys):
    code, _, _ = _run(capsys, ["bench", "--digits", "50"])
    assert code == 2


def test_verify_failure_exit_code(capsys, monkeypatch):
    import ellseries.cli as cli_mod
    from ellseries.verify import CheckResult

    def fake_run_verify(digits, selection):
        return [CheckResult(name="forced-failure", group="oracle", passed=False,
                            detail="synthetic", residual_digits=1.5)]

    monkeypatch.setattr(cli_mod, "run_verify", fake_run_verify)
    code, out, _ = _run(capsys, ["verify", "--digits", "60"])
    assert code == 3
    assert "[FAIL]" in out
    assert "worst residual" in out


def test_bench_json(capsys):
    code, out, _ = _run(capsys, ["bench", "--digits", "150", "--format", "json"])
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 2
    for row in rows:
        assert set(row.keys()) == SCHEMA_KEYS
    assert rows[0]["command"] == "bench gamma-quarter"
    assert rows[1]["command"] == "bench two-K-over-pi(r=100)"
    assert rows[1]["digits_per_term"] == pytest.approx(12.44, abs=0.3)
