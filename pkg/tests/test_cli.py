"""Command-line behavior: datasets, exit codes and byte determinism."""

import csv
import json
import math

import numpy as np
import pytest

from gwlab import GWSpec, gw_spec_to_json
from gwlab.cli import alpha_grid, cmd_figure, cmd_gamebounds, main, parse_partition
from gwlab.featured import FIG1_AMPLITUDES


@pytest.fixture
def spec_file(tmp_path):
    spec = GWSpec.qubit(FIG1_AMPLITUDES)
    path = tmp_path / "spec.json"
    path.write_text(gw_spec_to_json(spec))
    return str(path)


def _read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_alpha_grid_excludes_one():
    grid = alpha_grid(0.99, 1.01, 0.005)
    assert all(abs(v - 1.0) > 1e-9 for v in grid)
    assert len(grid) == 4
    full = alpha_grid(0.8229, 1.3027, 0.005)
    assert len(full) == 96
    assert full[0] == pytest.approx(0.8229)
    assert full[-1] <= 1.3027 + 1e-12


def test_parse_partition():
    p = parse_partition("0|1,2|3")
    assert [sorted(b) for b in p.blocks] == [[0], [1, 2], [3]]
    with pytest.raises(ValueError):
        parse_partition("0||2")


def test_figure1_rows_ordered(tmp_path):
    out = tmp_path / "fig1.csv"
    cmd_figure(1, str(out))
    rows = _read_csv(out)
    assert len(rows) == 96
    for row in rows:
        lower, mid, upper = (float(row[k]) for k in ("lower", "e_mid", "upper"))
        assert lower <= mid + 1e-9
        assert mid <= upper + 1e-9


def test_figure2_rows_bounded(tmp_path):
    out = tmp_path / "fig2.csv"
    cmd_figure(2, str(out))
    rows = _read_csv(out)
    assert len(rows) == 96
    for row in rows:
        assert float(row["lhs"]) <= float(row["upper_bound"]) + 1e-9


def test_figure3_rows_dominance(tmp_path):
    out = tmp_path / "fig3.csv"
    cmd_figure(3, str(out))
    rows = _read_csv(out)
    assert len(rows) == 101
    assert float(rows[0]["b_pow"]) == 0.0
    assert float(rows[-1]["b_pow"]) == pytest.approx(2.0)
    for row in rows:
        exact = float(row["exact"])
        k1, k2 = float(row["bound_k1"]), float(row["bound_k2"])
        assert k2 >= k1 - 1e-12
        assert exact >= k2 - 1e-9


def test_figure_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cmd_figure(2, str(a))
    cmd_figure(2, str(b))
    assert a.read_bytes() == b.read_bytes()


def test_verify_exit_zero_and_jsonl(spec_file, tmp_path):
    out = tmp_path / "reports.jsonl"
    code = main(
        [
            "verify",
            "--spec",
            spec_file,
            "--partition",
            "0|1|2|3",
            "--alpha",
            "0.9:1.25:0.05",
            "--mu",
            "2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    reports = [json.loads(line) for line in out.read_text().splitlines()]
    assert reports
    names = {r["name"] for r in reports}
    assert {"monogamy_sq", "polygamy", "monogamy_power", "reoa_triangle"} <= names
    for r in reports:
        assert set(r) == {
            "name",
            "lhs",
            "rhs",
            "slack",
            "satisfied",
            "applicability",
            "params",
        }
        if r["applicability"] == "APPLICABLE":
            assert r["satisfied"]


def test_verify_csv_projection(spec_file, tmp_path):
    out = tmp_path / "reports.csv"
    code = main(
        [
            "verify",
            "--spec",
            spec_file,
            "--alpha",
            "0.9:1.2:0.1",
            "--format",
            "csv",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "name,alpha,mu,k,lhs,rhs,slack,satisfied"


def test_verify_inline_spec(tmp_path):
    spec = gw_spec_to_json(GWSpec.qubit([0.6, 0.8]))
    out = tmp_path / "r.jsonl"
    code = main(["verify", "--spec", spec, "--alpha", "1.1:1.1:1", "--out", str(out)])
    assert code == 0


def test_verify_malformed_spec_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        '{"n": 4, "d": 2, "amplitudes": [[0.9, 0], [0.5, 0], [0.4, 0], [0.3, 0]],'
        ' "vacuum_weight": 0.0}'
    )
    assert main(["verify", "--spec", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert main(["verify", "--spec", str(missing)]) == 2


def test_verify_determinism(spec_file, tmp_path):
    args = [
        "verify",
        "--spec",
        spec_file,
        "--alpha",
        "0.83:1.3:0.05",
        "--mu",
        "0.5",
        "--c-pow",
        "2",
        "--b-pow",
        "1",
        "--k",
        "1",
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_oracle_reports_and_determinism(spec_file, tmp_path):
    args = [
        "oracle",
        "--spec",
        spec_file,
        "--partition",
        "0|1|2,3",
        "--trials",
        "400",
        "--seed",
        "123",
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    reports = [json.loads(line) for line in a.read_text().splitlines()]
    pairs = [r for r in reports if r["name"] == "c_equals_ca"]
    assert len(pairs) == 3  # all block pairs
    for r in pairs:
        assert r["satisfied"]


def test_oracle_env_seed(spec_file, tmp_path, monkeypatch):
    out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    monkeypatch.setenv("GWLAB_SEED", "777")
    main(["oracle", "--spec", spec_file, "--trials", "300", "--out", str(out1)])
    main(
        [
            "oracle",
            "--spec",
            spec_file,
            "--trials",
            "300",
            "--seed",
            "777",
            "--out",
            str(out2),
        ]
    )
    assert out1.read_bytes() == out2.read_bytes()


def test_oracle_low_trials_unconverged(spec_file, tmp_path):
    out = tmp_path / "r.jsonl"
    main(["oracle", "--spec", spec_file, "--trials", "10", "--seed", "1", "--out", str(out)])
    reports = [json.loads(line) for line in out.read_text().splitlines()]
    assert all(not r["params"]["converged"] for r in reports)
    assert all(r["applicability"] == "CONDITION_UNMET" for r in reports)


def test_gamebounds_table(tmp_path):
    out = tmp_path / "gb.csv"
    cmd_gamebounds([1, 16], [2, 4], str(out))
    rows = _read_csv(out)
    assert len(rows) == 4
    first = rows[0]
    assert float(first["new_bound"]) == pytest.approx(2 * math.sqrt(2), abs=1e-11)
    assert float(first["reference_bound"]) == pytest.approx(6.2, abs=1e-11)
    assert first["tighter"] == "true"
    assert first["log_base"] == "2"
    code = main(["gamebounds", "--n", "1,16", "--d", "2,4", "--out", str(tmp_path / "g2.csv")])
    assert code == 0
    assert (tmp_path / "g2.csv").read_bytes() == out.read_bytes()


def test_unknown_figure_id():
    with pytest.raises(ValueError):
        cmd_figure(7)
