import json

import pytest

from charrank.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_report(capsys):
    code, payload = run(capsys, "report", "--n", "2", "--k", "1")
    assert code == 0
    assert payload["lower_bound"] == "4/5"
    assert payload["upper_bound_case_i"] == "204/205"
    assert payload["upper_bound_case_ii"] == "92/93"
    assert "version" in payload and "config" in payload


def test_verify_exit_codes(capsys):
    code, payload = run(capsys, "verify", "--ineq", "div",
                        "--n", "2", "--prime", "2", "--trials", "100",
                        "--seed", "0")
    assert code == 0
    assert payload["ok"] is True
    assert payload["config"]["seed"] == 0
    # violation expected and found -> 0; found but not expected -> 1
    code, _ = run(capsys, "verify", "--ineq", "div", "--n", "2",
                  "--prime", "3", "--trials", "20", "--counterexample")
    assert code == 0
    code, _ = run(capsys, "verify", "--ineq", "div", "--n", "2",
                  "--prime", "3", "--trials", "20", "--inject-ln", "3")
    assert code == 1


def test_verify_nondiv_counterexample(capsys):
    code, payload = run(capsys, "verify", "--ineq", "nondiv", "--n", "2",
                        "--prime", "2", "--trials", "20", "--counterexample")
    assert code == 0
    assert payload["ok"] is False


def test_verify_bad_prime_is_config_error(capsys):
    code = main(["verify", "--ineq", "div", "--n", "2",
                 "--prime", "4", "--trials", "10"])
    assert code == 2


def test_circuits_multi_prime(capsys):
    code, payload = run(capsys, "circuits", "--n", "2", "--primes", "2,3,5")
    assert code == 0
    assert payload["primes"]["2"]["class"] == "A"
    assert payload["primes"]["3"]["class"] == "B"
    assert payload["primes"]["5"]["class"] == "B"
    assert all(p["class_subset_of_circuits"]
               for p in payload["primes"].values())


def test_circuits_single_prime(capsys):
    code, payload = run(capsys, "circuits", "--n", "2", "--prime", "2")
    assert code == 0
    assert payload["primes"]["2"]["divides_n"] is True


def test_network_and_out_file(tmp_path, capsys):
    out = tmp_path / "net.json"
    code = main(["network", "--network", "A", "--n", "2", "--prime", "2",
                 "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert len(payload["sources"]) == 7
    assert payload["r_cl"] == 3


def test_simulate(capsys):
    code, payload = run(capsys, "simulate", "--network", "A", "--n", "2",
                        "--prime", "2")
    assert code == 0
    assert payload["passed"] is True
    assert payload["mode"] == "exhaustive"


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
