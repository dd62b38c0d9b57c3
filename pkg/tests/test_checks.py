"""Check-suite registry behavior and CSV side outputs."""
import csv
import os

import pytest

from oscgauss.checks import SUITES, run_suites


def test_registry_names():
    assert set(SUITES) == {
        "moments", "symmetry", "orthogonality", "identities",
        "exactness", "breakdown", "superinterp", "order",
    }


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suites(["nope"], 256)


def test_moments_suite_passes():
    results = run_suites(["moments"], 256)
    assert results and all(r.passed for r in results)
    assert all(r.suite == "moments" for r in results)


def test_breakdown_suite_writes_samples_csv(tmp_path):
    results = run_suites(["breakdown"], 256, out_dir=str(tmp_path))
    assert all(r.passed for r in results)
    path = tmp_path / "breakdown_n2_samples.csv"
    assert path.exists()
    with open(path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["omega", "norm_re", "norm_im", "abs_norm"]
    assert len(rows) > 500
