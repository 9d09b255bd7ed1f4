"""Acceptance suite: every numbered criterion at its stated tolerance.

Each test prints one PASS/FAIL line (run pytest with -s or look at the
captured output).  Criteria 1-9 execute the corresponding verification
check directly; criterion 10 runs the full verify-all command twice and
compares the reports byte for byte.
"""

from __future__ import annotations

import time

import pytest

from sablab import verify
from sablab.cli import main

# (check name, human label, wall-clock budget in seconds)
_CRITERIA = [
    ("01-fbs-indexing", "criterion 1: fbs of indexing", 5.0),
    ("02-measures-catalog", "criterion 2: measures over the catalog", 30.0),
    ("03-fbs-certificate", "criterion 3: star certificates", 10.0),
    ("04-sabotage-certificate", "criterion 4: sabotage certificates", 20.0),
    ("05-indexing-relation", "criterion 5: indexing relation counts", 10.0),
    ("06-hybrid-argument", "criterion 6: hybrid inequality", 60.0),
    ("07-strong-conversion", "criterion 7: strong-oracle conversion", 30.0),
    ("08-grover-closed-form", "criterion 8: mark-search closed form", 10.0),
    ("09-index-finder", "criterion 9: index-finder identities", 30.0),
]


@pytest.mark.parametrize("name,label,budget", _CRITERIA, ids=[c[0] for c in _CRITERIA])
def test_criterion(name, label, budget):
    start = time.perf_counter()
    results = verify.run_checks(seed=0, only=name, determinism=False)
    elapsed = time.perf_counter() - start
    assert len(results) == 1
    result = results[0]
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  {label}  [{elapsed:.2f}s < {budget:.0f}s]  {result.computed}")
    assert result.passed, result.computed
    assert elapsed < budget, f"{label} took {elapsed:.2f}s, budget {budget}s"


def test_criterion_10_determinism(tmp_path, capsys):
    start = time.perf_counter()
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    code_a = main(["verify-all", "--seed", "0", "--out", str(first)])
    code_b = main(["verify-all", "--seed", "0", "--out", str(second)])
    elapsed = time.perf_counter() - start
    identical = first.read_bytes() == second.read_bytes()
    status = "PASS" if identical and code_a == code_b == 0 else "FAIL"
    print(f"{status}  criterion 10: byte-identical verify-all reports  [{elapsed:.2f}s]")
    assert code_a == 0 and code_b == 0
    assert identical
