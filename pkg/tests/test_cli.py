"""Command-line interface: formats, exit codes, round-trips, determinism."""

import csv
import io
import json

import pytest

import twotier
from twotier import cli


@pytest.fixture
def tiny_csv(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text("name,population\nA,4000000\nB,1000000\nC,1000000\n")
    return str(path)


@pytest.fixture
def single_csv(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("name,population\nSolo,81000000\n")
    return str(path)


@pytest.fixture
def big_csv(tmp_path):
    rows = "\n".join(f"S{i},{1000000 + i}" for i in range(31))
    path = tmp_path / "big.csv"
    path.write_text(f"name,population\n{rows}\n")
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# influence


def test_influence_uniform_bias(capsys):
    code, out, _ = run(capsys, "influence", "--model=uniform-bias", "--m=5")
    assert code == 0
    assert "alpha" in out and "0.200" in out
    assert "closed-form" in out


def test_influence_fair_small(capsys):
    code, out, _ = run(
        capsys, "influence", "--model=fair", "--m=3", "--format=json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["alpha"] == pytest.approx(0.5, abs=1e-15)
    assert payload["kappa"] == pytest.approx(0.5, abs=1e-15)
    assert payload["eta"] == pytest.approx(0.75, abs=1e-15)


def test_influence_circular_enumeration(capsys):
    code, out, _ = run(
        capsys, "influence", "--model=circular", "--m=7", "--format=json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["route"] == "enumeration"
    assert payload["alpha"] == pytest.approx(3 / 16, abs=1e-15)


def test_influence_two_atoms(capsys):
    code, out, _ = run(
        capsys,
        "influence",
        "--model=two-atoms:0.3333333333333333,0.6666666666666667",
        "--m=3",
        "--format=json",
    )
    assert code == 0
    assert json.loads(out)["alpha"] == pytest.approx(4 / 9, abs=1e-10)


def test_influence_even_m_exits_2(capsys):
    code, _, err = run(capsys, "influence", "--model=fair", "--m=4")
    assert code == 2
    assert "odd" in err


def test_influence_unknown_model_exits_2(capsys):
    code, _, _ = run(capsys, "influence", "--model=nonsense", "--m=3")
    assert code == 2


# ---------------------------------------------------------------------------
# analyze


def test_analyze_tiny_table(capsys, tiny_csv):
    code, out, _ = run(capsys, "analyze", tiny_csv, "--quota=zero", "--threads=1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["j", "state", "w", "w_norm", "beta", "beta_norm", "ratio"]
    assert "Totals" in lines[-1]


def test_analyze_single_state(capsys, single_csv):
    code, out, _ = run(
        capsys, "analyze", single_csv, "--quota=zero", "--format=json"
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["rows"]) == 1
    assert payload["rows"][0]["beta"] == 1.0


def test_analyze_eu27_germany_row(capsys):
    code, out, _ = run(
        capsys,
        "analyze",
        str(twotier.eu27_path()),
        "--quota=star",
        "--format=json",
    )
    assert code == 0
    germany = json.loads(out)["rows"][0]
    assert germany["state"] == "Germany"
    assert germany["weight"] == pytest.approx(9.059, abs=1e-3)
    assert germany["weight_normalised"] == pytest.approx(9.963, abs=2e-3)
    assert germany["beta"] == pytest.approx(0.211, abs=1.5e-3)
    assert germany["beta_normalised"] == pytest.approx(9.937, abs=5e-3)
    assert germany["ratio"] == pytest.approx(0.997, abs=1e-3)


def test_analyze_missing_dataset_exits_2(capsys):
    code, _, err = run(capsys, "analyze", "no-such-file.csv", "--quota=zero")
    assert code == 2
    assert "not found" in err


def test_analyze_bad_quota_exits_2(capsys, tiny_csv):
    code, _, _ = run(capsys, "analyze", tiny_csv, "--quota=banana")
    assert code == 2


def test_analyze_too_many_states_exits_3(capsys, big_csv):
    code, _, err = run(capsys, "analyze", big_csv, "--quota=zero")
    assert code == 3
    assert "Gaussian" in err


def test_bundled_dataset_resolves_by_name(tmp_path, monkeypatch):
    # the bundled roster resolves even when the file is not in cwd
    monkeypatch.chdir(tmp_path)
    assert cli._resolve_dataset("eu27_qmv2017.csv") == twotier.eu27_path()
    assert cli._resolve_dataset("eu27") == twotier.eu27_path()


def test_analyze_determinism(capsys, tiny_csv):
    code1, out1, _ = run(capsys, "analyze", tiny_csv, "--quota=star", "--threads=1")
    code2, out2, _ = run(capsys, "analyze", tiny_csv, "--quota=star", "--threads=2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_analyze_output_file(capsys, tiny_csv, tmp_path):
    target = tmp_path / "result.csv"
    code, out, _ = run(
        capsys,
        "analyze",
        tiny_csv,
        "--quota=zero",
        "--format=csv",
        f"--output={target}",
    )
    assert code == 0
    assert target.read_text(encoding="utf-8") == out


def test_analyze_csv_roundtrip(capsys, tiny_csv):
    code, out, _ = run(capsys, "analyze", tiny_csv, "--quota=star", "--format=csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    u = twotier.load_union(tiny_csv)
    w = twotier.sqrt_weights(u)
    q = twotier.jagcom_quota(u)
    alpha = [twotier.asymptotic_fair_influence(p) for p in u.populations]
    expected = twotier.analyze(w, q, alpha, threads=1)
    assert len(rows) == 3
    for j, row in enumerate(rows):
        assert float(row["beta"]) == expected.beta[j]
        assert float(row["weight"]) == w.weights[j]
        assert float(row["ratio"]) == expected.ratios[j]


def test_analyze_json_roundtrip(capsys, tiny_csv):
    code, out, _ = run(capsys, "analyze", tiny_csv, "--quota=zero", "--format=json")
    assert code == 0
    payload = json.loads(out)
    u = twotier.load_union(tiny_csv)
    w = twotier.sqrt_weights(u)
    alpha = [twotier.asymptotic_fair_influence(p) for p in u.populations]
    expected = twotier.analyze(w, twotier.QuotaSpec.zero(), alpha, threads=1)
    for j, row in enumerate(payload["rows"]):
        assert row["beta"] == expected.beta[j]
        assert row["beta_normalised"] == expected.beta_normalised[j]
    assert payload["totals"]["beta_total"] == expected.beta_total


# ---------------------------------------------------------------------------
# approx


def test_approx_near_unanimity_betas_vanish(capsys):
    code, out, _ = run(
        capsys,
        "approx",
        str(twotier.eu27_path()),
        "--quota=0.99",
        "--format=json",
    )
    assert code == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 27
    assert all(row["beta_exact"] < 1e-6 for row in rows)


def test_approx_tiny_columns(capsys, tiny_csv):
    code, out, _ = run(capsys, "approx", tiny_csv, "--quota=star", "--format=csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert set(rows[0]) == {"j", "state", "beta_exact", "jagcom", "be_lo", "be_hi"}
    for row in rows:
        assert float(row["be_hi"]) - float(row["be_lo"]) > 0


def test_approx_clip(capsys, tiny_csv):
    code, out, _ = run(
        capsys, "approx", tiny_csv, "--quota=star", "--clip", "--format=json"
    )
    assert code == 0
    for row in json.loads(out)["rows"]:
        assert 0.0 <= row["be_lo"] <= row["be_hi"] <= 1.0


def test_approx_large_union_omits_exact_column(capsys, big_csv):
    code, out, err = run(capsys, "approx", big_csv, "--quota=zero", "--format=json")
    assert code == 0
    assert "omitted" in err
    rows = json.loads(out)["rows"]
    assert len(rows) == 31
    assert "beta_exact" not in rows[0]


# ---------------------------------------------------------------------------
# quota-sweep


def test_sweep_eu27_objective_ordering(capsys):
    code, out, _ = run(
        capsys,
        "quota-sweep",
        str(twotier.eu27_path()),
        "--grid=0,star",
        "--format=json",
    )
    assert code == 0
    payload = json.loads(out)
    q_zero, q_star = payload["points"]
    assert q_zero["objective"] > q_star["objective"]
    assert payload["argmin_index"] == 1


def test_sweep_paper_grid_tiny(capsys, tiny_csv):
    code, out, _ = run(
        capsys, "quota-sweep", tiny_csv, "--grid=paper", "--format=json"
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["points"]) == 4
    star = twotier.jagcom_quota(twotier.load_union(tiny_csv)).q
    grid = [p["q"] for p in payload["points"]]
    assert grid == pytest.approx([0.0, 0.5 * star, star, 1.5 * star], abs=1e-15)


def test_sweep_single_point_grid(capsys, tiny_csv):
    code, out, _ = run(capsys, "quota-sweep", tiny_csv, "--grid=0", "--format=json")
    assert code == 0
    payload = json.loads(out)
    assert payload["argmin_index"] == 0
    assert payload["argmin_q"] == 0.0


def test_sweep_table_has_argmin_line(capsys, tiny_csv):
    code, out, _ = run(capsys, "quota-sweep", tiny_csv, "--grid=0,star")
    assert code == 0
    assert "argmin: q =" in out


def test_sweep_empty_grid_exits_2(capsys, tiny_csv):
    code, _, _ = run(capsys, "quota-sweep", tiny_csv, "--grid=,")
    assert code == 2


# ---------------------------------------------------------------------------
# Parser plumbing


def test_unknown_subcommand_exits_2(capsys):
    assert cli.main(["frobnicate"]) == 2


def test_help_exits_0(capsys):
    assert cli.main(["--help"]) == 0
