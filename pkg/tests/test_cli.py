"""CLI surface: subcommand outputs, formats, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from sablab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_fbs_indexing(capsys):
    code, out, _ = run_cli(capsys, "fbs", "--fn", "IND", "--n", "2")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["value"] - 3.0) < 1e-6
    assert payload["weights"] and payload["dual"]


def test_fbs_at_point(capsys):
    code, out, _ = run_cli(capsys, "fbs", "--fn", "OR", "--n", "4", "--x", "0000")
    payload = json.loads(out)
    assert code == 0 and abs(payload["value"] - 4.0) < 1e-9


def test_bs_parity(capsys):
    code, out, _ = run_cli(capsys, "bs", "--fn", "PARITY", "--n", "5", "--x", "00000")
    assert code == 0 and json.loads(out)["value"] == 5


def test_adv_fbs_construction(capsys):
    code, out, _ = run_cli(capsys, "adv", "--construction", "fbs", "--fn", "OR", "--n", "2")
    payload = json.loads(out)
    assert code == 0 and abs(payload["value"] - 2**0.5) < 1e-6


def test_adv_relation(capsys):
    code, out, _ = run_cli(
        capsys, "adv", "--construction", "indexing-relation", "--n", "3", "--model", "weak"
    )
    payload = json.loads(out)
    assert code == 0 and payload["m_x"] == 3 and payload["m_y"] == 3
    assert payload["aggregates"] == {"max": 4, "min": 3}


def test_adv_sabotage_ind2(capsys):
    code, out, _ = run_cli(capsys, "adv", "--construction", "sabotage", "--fn", "IND", "--n", "2")
    payload = json.loads(out)
    assert code == 0 and abs(payload["norm_gamma"] - 3.0) < 1e-9


def test_sab_enum(capsys):
    code, out, _ = run_cli(capsys, "sab-enum", "--fn", "OR", "--n", "2")
    payload = json.loads(out)
    assert code == 0
    assert payload["stars"] == ["**", "*0", "0*"]
    assert payload["count"] == 3


def test_protocol_convert(capsys):
    code, out, _ = run_cli(
        capsys, "protocol", "convert-strong", "--alg", "deutsch",
        "--pair", "00,10", "--marker", "*",
    )
    payload = json.loads(out)
    assert code == 0
    assert payload["queries_wrapped"] == 2
    assert abs(payload["decision"]["*"] - 1.0) < 1e-12


def test_protocol_hybrid_json_and_csv(capsys, tmp_path):
    code, out, _ = run_cli(
        capsys, "protocol", "hybrid", "--alg", "deutsch", "--x", "00", "--block", "1,2"
    )
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["sum_x"] - 1.0) < 1e-9 and abs(payload["sum_y"] - 1.0) < 1e-9
    assert payload["sum_x"] + payload["sum_y"] >= payload["lower_bound"] - 1e-9

    out_path = tmp_path / "trace.csv"
    code = main([
        "protocol", "hybrid", "--alg", "deutsch", "--x", "00", "--block", "1,2",
        "--format", "csv", "--out", str(out_path),
    ])
    assert code == 0
    lines = out_path.read_text().strip().splitlines()
    assert lines[0] == "t,p_x_t,p_y_t" and lines[1].startswith("1,")


def test_protocol_grover_find(capsys):
    code, out, _ = run_cli(capsys, "protocol", "grover-find", "--z", "00*0")
    payload = json.loads(out)
    assert code == 0 and payload["position"] == 3 and payload["valid"]


def test_protocol_index_find_repeat(capsys):
    code, out, _ = run_cli(
        capsys, "protocol", "index-find", "--alg", "deutsch",
        "--pair", "00,11", "--marker", "*", "--mode", "repeat", "--budget", "4",
    )
    payload = json.loads(out)
    assert code == 0 and payload["valid"] and payload["position"] in (1, 2)


def test_protocol_index_find_amplified(capsys):
    code, out, _ = run_cli(
        capsys, "protocol", "index-find", "--alg", "deutsch",
        "--pair", "00,11", "--marker", "*", "--mode", "amplified", "--rounds", "0",
    )
    payload = json.loads(out)
    assert code == 0 and abs(payload["exact_success"] - 1.0) < 1e-9


def test_usage_errors_exit_2(capsys):
    assert run_cli(capsys, "fbs", "--fn", "NOPE", "--n", "2")[0] == 2
    assert run_cli(capsys, "fbs")[0] == 2
    assert run_cli(capsys, "protocol", "grover-find")[0] == 2
    assert run_cli(capsys, "fbs", "--fn", "OR", "--n", "2", "--x", "0101")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_function_file_input(capsys, tmp_path):
    from sablab.boolfn import make_named

    path = tmp_path / "or2.json"
    path.write_text(make_named("OR", 2).serialize())
    code, out, _ = run_cli(capsys, "fbs", "--file", str(path), "--x", "00")
    assert code == 0 and abs(json.loads(out)["value"] - 2.0) < 1e-9


def test_verify_only_subset(capsys):
    code, out, err = run_cli(capsys, "verify-all", "--only", "05-indexing-relation")
    assert code == 0
    payload = json.loads(out)
    assert [c["name"] for c in payload["checks"]] == ["05-indexing-relation"]
    assert payload["passed"] is True
    assert "PASS" in err


def test_verify_failing_check_exits_1(capsys, monkeypatch):
    """An injected defect must surface as a failing entry and exit code 1."""
    from sablab import verify

    def broken(seed):
        return {"injected": True}, False

    claim, expected, _ = verify._CHECKS["05-indexing-relation"]
    monkeypatch.setitem(verify._CHECKS, "05-indexing-relation", (claim, expected, broken))
    code, out, err = run_cli(capsys, "verify-all", "--only", "05-indexing-relation")
    assert code == 1
    payload = json.loads(out)
    assert payload["passed"] is False
    assert "FAIL" in err


def test_verify_reports_are_deterministic_and_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify-all", "--only", "07-strong-conversion", "--seed", "9",
                 "--out", str(a)]) == 0
    assert main(["verify-all", "--only", "07-strong-conversion", "--seed", "9",
                 "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    payload = json.loads(a.read_text())
    assert payload["seed"] == 9
