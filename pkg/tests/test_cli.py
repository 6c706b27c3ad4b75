"""Command-line contract tests."""

import csv
import json

import pytest

from onebit_mimo.cli import main


@pytest.fixture
def cfg_path(tmp_path):
    cfg = dict(K=1, M=2, N_c=16, N_cp=2, L_tap=2, snr_db=10.0, T=3, seed=21)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


class TestSingleRun:
    def test_deterministic_single_record(self, cfg_path, tmp_path, capsys):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        assert main(["single-run", "--config", str(cfg_path), "--variants", "gda-ada-2",
                     "--seed", "7", "--out", str(out1)]) == 0
        assert main(["single-run", "--config", str(cfg_path), "--variants", "gda-ada-2",
                     "--seed", "7", "--out", str(out2)]) == 0
        rows1, rows2 = read_rows(out1), read_rows(out2)
        assert len(rows1) == 2  # header + one NMSE record
        # identical except the wall-clock column
        assert [r[:8] for r in rows1] == [r[:8] for r in rows2]
        assert rows1[1][4] == "nmse"

    def test_summary_line_printed(self, cfg_path, capsys):
        assert main(["single-run", "--config", str(cfg_path), "--variants", "gda-ada-2"]) == 0
        out = capsys.readouterr().out
        assert "[channel_estimation] gda-ada-2 snr_db=10.0" in out


class TestEstimateSweep:
    def test_record_count(self, cfg_path, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main([
            "estimate-sweep", "--config", str(cfg_path),
            "--axis", "snr_db", "--values", "-10,-5,0,5,10,15,20",
            "--variants", "gda-ada-1,gda-ada-2", "--trials", "2",
            "--out", str(out), "--jobs", "1",
        ])
        assert code == 0
        rows = read_rows(out)
        assert rows[0] == list(
            ("mode", "variant", "axis", "axis_value", "metric", "value", "trials", "seed", "wall_s")
        )
        assert len(rows) - 1 == 7 * 2
        meta = json.loads(out.with_suffix(".meta.json").read_text())
        assert meta["axis"] == "snr_db"


class TestDetectSweep:
    def test_perfect_csi_mode(self, cfg_path, tmp_path):
        out = tmp_path / "det.csv"
        code = main([
            "detect-sweep", "--config", str(cfg_path), "--values", "10",
            "--variants", "gda-ada-2", "--trials", "2", "--out", str(out), "--jobs", "1",
        ])
        assert code == 0
        rows = read_rows(out)
        assert rows[1][0] == "detection_perfect_csi"
        assert rows[1][4] == "ber"

    def test_default_variants_exclude_full_covariance(self, cfg_path, tmp_path):
        out = tmp_path / "det.csv"
        code = main([
            "detect-sweep", "--config", str(cfg_path), "--values", "10",
            "--trials", "1", "--out", str(out), "--jobs", "1",
        ])
        assert code == 0
        variants = {r[1] for r in read_rows(out)[1:]}
        assert variants == {"gda-ada-1", "gda-ada-2"}


class TestBench:
    def test_bench_smoke(self, cfg_path, tmp_path):
        out = tmp_path / "bench.csv"
        code = main([
            "bench", "--config", str(cfg_path), "--axis", "K", "--values", "1,2",
            "--variants", "gda-ada-2", "--ops", "estimator", "--reps", "1",
            "--warmup", "0", "--out", str(out),
        ])
        assert code == 0
        rows = read_rows(out)
        assert {r[4] for r in rows[1:]} == {"estimator_runtime_s"}


class TestErrorContracts:
    def test_missing_config_exit_2_with_path(self, tmp_path, capsys):
        missing = tmp_path / "nope.json"
        assert main(["single-run", "--config", str(missing)]) == 2
        assert str(missing) in capsys.readouterr().err

    def test_invalid_json_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{oops")
        assert main(["single-run", "--config", str(bad)]) == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_unknown_config_field_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "extra.json"
        bad.write_text(json.dumps(dict(
            K=1, M=2, N_c=16, N_cp=2, L_tap=2, snr_db=10.0, T=3, seed=21, foo=1
        )))
        assert main(["single-run", "--config", str(bad)]) == 2
        assert "unknown" in capsys.readouterr().err

    def test_unknown_flag_exit_2(self, cfg_path):
        with pytest.raises(SystemExit) as excinfo:
            main(["single-run", "--config", str(cfg_path), "--bogus"])
        assert excinfo.value.code == 2

    def test_unknown_variant_exit_2(self, cfg_path, capsys):
        assert main(["single-run", "--config", str(cfg_path), "--variants", "magic"]) == 2
        assert "unknown variant" in capsys.readouterr().err
