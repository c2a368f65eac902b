import csv
import json

import pytest

from gencast.cli import main

CONFLICT_SFM_TEXT = (
    "4 6\n"
    "1 1 0 0 0 0\n"
    "0 1 1 0 0 0\n"
    "1 0 1 0 1 0\n"
    "0 0 0 1 1 1\n"
)


@pytest.fixture
def sfm_file(tmp_path):
    path = tmp_path / "sfm.txt"
    path.write_text(CONFLICT_SFM_TEXT)
    return path


@pytest.fixture
def zero_sfm_file(tmp_path):
    path = tmp_path / "zeros.txt"
    path.write_text("2 4\n0 0 0 0\n0 0 0 0\n")
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPartitionCommand:
    def test_all_zero_heuristic(self, capsys, zero_sfm_file):
        code, out, err = run_cli(capsys, "partition", "--sfm", str(zero_sfm_file),
                                 "--gamma", "1")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["generations"]) == 1
        assert "M=1" in err

    def test_oracle_on_conflict_fixture(self, capsys, sfm_file):
        code, out, err = run_cli(capsys, "partition", "--sfm", str(sfm_file),
                                 "--gamma", "1", "--algorithm", "oracle")
        assert code == 0
        assert len(json.loads(out)["generations"]) == 3
        assert "M=3" in err

    def test_deterministic_output_bytes(self, capsys, sfm_file):
        runs = [run_cli(capsys, "partition", "--sfm", str(sfm_file), "--gamma", "2")
                for _ in range(2)]
        assert runs[0] == runs[1]

    def test_blind_algorithm(self, capsys, sfm_file):
        code, out, err = run_cli(capsys, "partition", "--sfm", str(sfm_file),
                                 "--gamma", "1", "--algorithm", "blind")
        assert code == 0
        doc = json.loads(out)
        flat = [k for g in doc["generations"] for k in g]
        assert sorted(flat) == list(range(6))

    def test_parse_error_diagnostics(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 3\n1 0 1\n0 2 0\n")
        code, out, err = run_cli(capsys, "partition", "--sfm", str(bad), "--gamma", "1")
        assert code == 1
        assert "line 3" in err and "column 2" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "partition", "--sfm", str(tmp_path / "nope"),
                               "--gamma", "1")
        assert code == 1

    def test_usage_error_exit_code(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["partition", "--gamma", "1"])
        assert exc.value.code == 2


class TestSimulateCommand:
    def test_fig3_style_spec(self, capsys, tmp_path):
        spec = {
            "experiment": "fig3_U",
            "config": {"n_packets": 10, "n_receivers": 5, "trials": 30, "seed": 5},
            "gammas": [1, 2],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        out_dir = tmp_path / "results"
        code, out, _ = run_cli(capsys, "simulate", "--spec", str(spec_path),
                               "--out", str(out_dir))
        assert code == 0
        with open(out_dir / "aggregate.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert {(r["scheduler"], r["gamma"]) for r in rows} == {
            ("feedback_rr", "1"), ("feedback_rr", "2"),
            ("blind_rr", "1"), ("blind_rr", "2"),
        }
        assert "best U reduction" in out

    def test_erasure_free_u_equals_total_rank(self, capsys, tmp_path):
        spec = {
            "experiment": "fig3_U",
            # seed picked so no trial hits a coefficient rank shortfall, the
            # one event that breaks the erasure-free identity
            "config": {"n_packets": 8, "n_receivers": 3, "trials": 40, "seed": 0,
                       "coded_phase_erasures": False},
            "gammas": [2],
            "schedulers": ["feedback_rr"],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        out_dir = tmp_path / "results"
        code, _, _ = run_cli(capsys, "simulate", "--spec", str(spec_path),
                             "--out", str(out_dir))
        assert code == 0
        with open(out_dir / "per_trial.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert rows
        assert all(r["U"] == r["total_rank"] for r in rows)

    def test_invalid_spec_diagnostics(self, capsys, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"experiment": "fig3_U", "config": {"trials": 0}}))
        code, _, err = run_cli(capsys, "simulate", "--spec", str(spec_path))
        assert code == 1
        assert "trials" in err

    def test_unknown_keys_rejected(self, capsys, tmp_path):
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps({"experiment": "fig3_U", "bogus": 1}))
        code, _, err = run_cli(capsys, "simulate", "--spec", str(spec_path))
        assert code == 1
        assert "bogus" in err

    def test_same_seed_byte_identical_csvs(self, capsys, tmp_path):
        spec = {
            "experiment": "fig3_D",
            "config": {"n_packets": 8, "n_receivers": 4, "trials": 25, "seed": 9},
            "gammas": [1, 3],
        }
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(json.dumps(spec))
        outs = []
        for name in ("a", "b"):
            out_dir = tmp_path / name
            code, _, _ = run_cli(capsys, "simulate", "--spec", str(spec_path),
                                 "--out", str(out_dir))
            assert code == 0
            outs.append(((out_dir / "per_trial.csv").read_bytes(),
                         (out_dir / "aggregate.csv").read_bytes()))
        assert outs[0] == outs[1]

    def test_named_experiment_with_trial_override(self, capsys, tmp_path):
        out_dir = tmp_path / "r"
        code, out, _ = run_cli(capsys, "simulate", "--experiment", "tradeoff",
                               "--trials", "5", "--out", str(out_dir), "--seed", "3")
        assert code == 0
        assert (out_dir / "aggregate.csv").exists()

    def test_strict_paper_rounds_flag(self, capsys, tmp_path):
        out_dir = tmp_path / "strict"
        code, _, _ = run_cli(capsys, "simulate", "--experiment", "fig3_U",
                             "--trials", "4", "--out", str(out_dir), "--seed", "3",
                             "--strict-paper-rounds")
        assert code == 0
        assert (out_dir / "per_trial.csv").exists()


class TestOracleGapCommand:
    def test_csv_on_stdout_and_gap_sign(self, capsys):
        code, out, err = run_cli(capsys, "oracle-gap", "--packets", "6",
                                 "--receivers", "4", "--count", "20", "--seed", "1")
        assert code == 0
        rows = list(csv.DictReader(out.splitlines()))
        assert len(rows) == 20
        assert all(int(r["M_heur"]) >= int(r["M_opt"]) for r in rows)
        assert "mean_gap" in err

    def test_oversize_refused(self, capsys):
        code, _, err = run_cli(capsys, "oracle-gap", "--packets", "20", "--count", "1")
        assert code == 1
        assert "cap" in err

    def test_seed_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("GENCAST_SEED", "77")
        code1, out1, _ = run_cli(capsys, "oracle-gap", "--packets", "5",
                                 "--receivers", "3", "--count", "5")
        code2, out2, _ = run_cli(capsys, "oracle-gap", "--packets", "5",
                                 "--receivers", "3", "--count", "5", "--seed", "77")
        assert code1 == code2 == 0
        assert out1 == out2


class TestColorCommand:
    def test_edgeless_solve(self, capsys, tmp_path):
        path = tmp_path / "h.txt"
        path.write_text("4 0\n")
        code, out, _ = run_cli(capsys, "color", "--hypergraph", str(path),
                               "--gamma", "1", "--mode", "solve")
        assert code == 0
        assert json.loads(out)["chromatic_number"] == 1

    def test_conflict_fixture_needs_three_colors(self, capsys, tmp_path):
        path = tmp_path / "h.txt"
        path.write_text("6 4\n0 1\n1 2\n0 2 4\n3 4 5\n")
        code, out, _ = run_cli(capsys, "color", "--hypergraph", str(path),
                               "--gamma", "1", "--mode", "solve")
        assert code == 0
        assert json.loads(out)["chromatic_number"] == 3

    def test_oversize_solve_refused(self, capsys, tmp_path):
        path = tmp_path / "big.txt"
        path.write_text("13 1\n0 1 2\n")
        code, _, err = run_cli(capsys, "color", "--hypergraph", str(path),
                               "--gamma", "1", "--mode", "solve")
        assert code == 1
        assert "cap" in err

    def test_validate_good_and_bad(self, capsys, tmp_path):
        h = tmp_path / "h.txt"
        h.write_text("3 1\n0 1 2\n")
        good = tmp_path / "good.txt"
        good.write_text("0 1 2\n")
        bad = tmp_path / "bad.txt"
        bad.write_text("0 0 1\n")
        code, out, _ = run_cli(capsys, "color", "--hypergraph", str(h),
                               "--gamma", "1", "--mode", "validate", "--coloring", str(good))
        assert code == 0
        assert "valid" in out
        code, out, _ = run_cli(capsys, "color", "--hypergraph", str(h),
                               "--gamma", "1", "--mode", "validate", "--coloring", str(bad))
        assert code == 1
        assert "violation" in out
