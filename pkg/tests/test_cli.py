"""
命令行测试
"""
import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import database
from cli import main
from config import PRESET_DIR

PARTITION = os.path.join(PRESET_DIR, "example_partition.txt")
PROFILE = os.path.join(PRESET_DIR, "example_profile.txt")


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def vacuum_file(tmp_path):
    path = tmp_path / "vacuum.txt"
    path.write_text("1 0 -10 1\n1 0 10 1\n")
    return str(path)


class TestCommands:
    """各子命令"""

    def test_counterexample(self, capsys):
        code, out, _ = _run(capsys, "counterexample", "--preset", "paper")
        assert code == 0
        report = json.loads(out)
        assert set(report) == {"command", "inputs", "outputs", "residuals", "verdicts"}
        assert report["outputs"]["self_similar_rate"] == pytest.approx(-1661.456, abs=1e-2)
        assert report["outputs"]["fan_rate"] == pytest.approx(867.268, abs=1e-2)
        assert report["verdicts"]["verdict"] == "SelfSimilarNotEntropyRateAdmissible"
        assert report["verdicts"]["diperna"] is True

    def test_riemann(self, capsys):
        code, out, _ = _run(capsys, "riemann")
        assert code == 0
        report = json.loads(out)
        assert report["outputs"]["p_M"] == pytest.approx(7700.164, abs=1e-2)
        assert report["verdicts"]["pattern"] == "S-C-S"

    def test_riemann_constant_data(self, capsys, tmp_path):
        path = tmp_path / "constant.txt"
        path.write_text("2 0 3 5\n2 0 3 5\n")
        code, out, _ = _run(capsys, "riemann", "--data", str(path))
        assert code == 0
        assert json.loads(out)["verdicts"]["constant"] is True

    def test_rate(self, capsys):
        code, out, _ = _run(capsys, "rate")
        assert code == 0
        report = json.loads(out)
        assert report["verdicts"]["oracle_agrees"] is True
        assert report["verdicts"]["self_similar_in_bracket"] is True

    def test_subsolution_with_scan(self, capsys):
        code, out, _ = _run(capsys, "subsolution", "--rho1", "14", "--rho1-grid", "13.9,14,14.1")
        assert code == 0
        report = json.loads(out)
        assert report["verdicts"]["admissible"] is True
        assert report["verdicts"]["admissible_interval"] == [13.9, 14.1]
        assert [point["rho1"] for point in report["outputs"]["scan"]] == [13.9, 14.0, 14.1]

    def test_sweep_csv(self, capsys):
        code, out, _ = _run(capsys, "sweep", "--cv-grid", "1,1.5", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "cv,rho1,rate_self_similar,rate_fan,verdict,max_residual"
        assert len(lines) == 3

    def test_profile(self, capsys):
        code, out, _ = _run(capsys, "profile", "--partition", PARTITION, "--profile", PROFILE)
        assert code == 0
        report = json.loads(out)
        assert report["verdicts"]["entropy_identity"] is True
        assert report["verdicts"]["kinetic_energy_positive"] is True

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.txt"
        code, out, _ = _run(capsys, "riemann", "--format", "text", "--out", str(target))
        assert code == 0
        assert out == ""
        assert target.read_text().startswith("# riemann")


class TestExitCodes:
    """退出码与错误信息"""

    def test_rho1_must_be_positive(self, capsys):
        code, out, err = _run(capsys, "subsolution", "--rho1", "-1")
        assert code == 1
        assert out == ""
        assert "rho1 must be positive" in err

    def test_unknown_command(self, capsys):
        code, _, _ = _run(capsys, "explode")
        assert code == 1

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 0 0\n")
        code, _, err = _run(capsys, "riemann", "--data", str(path))
        assert code == 1
        assert "ParseError: line 1" in err

    def test_invalid_utf8_data(self, capsys, tmp_path):
        path = tmp_path / "binary.txt"
        path.write_bytes(b"1 0 0 2\n10 0 -100 \xff\n")
        code, out, err = _run(capsys, "riemann", "--data", str(path))
        assert code == 1
        assert out == ""
        assert "ParseError: line 2, column 11" in err

    def test_unwritable_output(self, capsys, tmp_path):
        code, out, err = _run(capsys, "riemann", "--out", str(tmp_path))
        assert code == 1
        assert out == ""
        assert "InputError: cannot write" in err

    def test_solver_error(self, capsys, vacuum_file):
        code, out, err = _run(capsys, "rate", "--data", vacuum_file)
        assert code == 2
        assert out == ""
        assert "VacuumFormation" in err

    def test_profile_needs_inputs(self, capsys):
        code, _, err = _run(capsys, "profile")
        assert code == 1
        assert "--partition" in err


class TestDeterminism:
    """相同输入输出逐字节一致"""

    def test_repeated_runs(self, capsys):
        _, first, _ = _run(capsys, "counterexample")
        _, second, _ = _run(capsys, "counterexample")
        assert first == second

    def test_json_round_trip(self, capsys):
        _, out, _ = _run(capsys, "counterexample")
        report = json.loads(out)
        assert json.loads(json.dumps(report, sort_keys=True)) == report


class TestRecording:
    """--record 写入运行记录"""

    def test_record_run(self, capsys, tmp_path):
        database.init_database(str(tmp_path))
        code, _, _ = _run(capsys, "riemann", "--record")
        assert code == 0
        from models import RunRecord, RunStatus
        with database.get_db_session() as db:
            records = db.query(RunRecord).all()
            assert len(records) == 1
            assert records[0].status is RunStatus.COMPLETED
            assert records[0].verdict == "S-C-S"

    def test_failed_run_recorded(self, capsys, tmp_path, vacuum_file):
        database.init_database(str(tmp_path))
        code, _, _ = _run(capsys, "rate", "--data", vacuum_file, "--record")
        assert code == 2
        from models import RunRecord, RunStatus
        with database.get_db_session() as db:
            record = db.query(RunRecord).one()
            assert record.status is RunStatus.FAILED
            assert record.error_name == "VacuumFormation"
