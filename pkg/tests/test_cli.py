"""
Unit tests for the command-line front end

Author: Mohammed Ismail AbdElmageid
"""
import csv
import io
import json
import pytest

import mpmath

from cli.app import EXIT_BUDGET, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, main
from core.exceptions import InternalConsistencyError
from counting.count_manager import read_count_csv


@pytest.fixture(autouse=True)
def restore_precision():
    dps = mpmath.mp.dps
    yield
    mpmath.mp.dps = dps


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"workers": 1, "checkpoints": 8, "fit_min_bound": 10, "fit_correction": False,
                                "primes_cutoff": 1000, "audit_fraction": 0.1, "precision_dps": 20}),
                    encoding="utf-8")
    return str(path)


class TestCheck:
    """Test the check subcommand"""

    def test_library_fan(self, capsys, small_config):
        """Test P1xP1 is regular, complete and of Picard rank 2"""
        assert main(["check", "--fan", "P1xP1", "--config", small_config]) == EXIT_OK
        out = capsys.readouterr().out
        assert "regular" in out
        assert "Picard rank b = 2" in out

    def test_shipped_file(self, capsys, small_config):
        """Test a file under fans/ is found by its stem and its weights are used"""
        assert main(["check", "--fan", "P1_squarefull", "--config", small_config]) == EXIT_OK
        out = capsys.readouterr().out
        assert "alpha_direct = 1/4" in out
        assert "alpha_paper = 1/2" in out

    def test_invalid_fan_file(self, tmp_path, capsys, small_config):
        """Test a malformed .fan file exits with code 2"""
        bad = tmp_path / "bad.fan"
        bad.write_text("dim 2\nray 1 0\nray 0 one\n", encoding="utf-8")
        assert main(["check", "--fan", str(bad), "--config", small_config]) == EXIT_INVALID
        assert "FanFileError" in capsys.readouterr().err

    def test_unknown_fan(self, capsys, small_config):
        assert main(["check", "--fan", "no-such-fan", "--config", small_config]) == EXIT_INVALID

    def test_broken_config(self, tmp_path, capsys):
        """Test an unreadable config.json exits with code 2"""
        path = tmp_path / "config.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["check", "--fan", "P1", "--config", str(path)]) == EXIT_INVALID
        assert "ConfigurationError" in capsys.readouterr().err

    def test_weight_mismatch(self, capsys, small_config):
        """Test weights must match the number of orbits"""
        assert main(["check", "--fan", "P2", "--weights", "2,2", "--config", small_config]) == EXIT_INVALID


NON_REGULAR_FAN = """dim 2
rays 4
1 0
1 2
-1 0
0 -1
cones 4
0 1
1 2
2 3
0 3
"""

OVERLAPPING_FAN = """dim 2
rays 3
1 0
0 1
1 1
cones 2
0 1
0 2
"""

SUBCOMMAND_ARGS = [
    ["locate", "--vector", "1,1"],
    ["classify", "--point", "4/9,6"],
    ["height", "--point", "4/9,6"],
    ["qpoly"],
    ["density", "--prime", "2"],
    ["predict"],
    ["count", "--bound", "20"],
    ["report", "--bound", "50"],
]


class TestInvalidFans:
    """Test every subcommand rejects an invalid fan before doing arithmetic"""

    @pytest.mark.parametrize("text,kind", [(NON_REGULAR_FAN, "non-regular"), (OVERLAPPING_FAN, "overlap")])
    @pytest.mark.parametrize("args", SUBCOMMAND_ARGS, ids=lambda a: a[0])
    def test_rejected(self, tmp_path, capsys, small_config, text, kind, args):
        """Test a non-regular or overlapping fan exits with code 2 and names the violation"""
        bad = tmp_path / "bad.fan"
        bad.write_text(text, encoding="utf-8")
        code = main([args[0], "--fan", str(bad), *args[1:], "--config", small_config])
        assert code == EXIT_INVALID
        err = capsys.readouterr().err
        assert "FanValidationError" in err
        assert kind in err

    @pytest.mark.parametrize("text", [NON_REGULAR_FAN, OVERLAPPING_FAN])
    def test_check_lists_issues(self, tmp_path, capsys, small_config, text):
        bad = tmp_path / "bad.fan"
        bad.write_text(text, encoding="utf-8")
        assert main(["check", "--fan", str(bad), "--config", small_config]) == EXIT_INVALID

    def test_internal_error_exit_code(self, monkeypatch, capsys, small_config):
        """Test an internal consistency failure maps to exit code 4 instead of a traceback"""
        def broken(*args, **kwargs):
            raise InternalConsistencyError("non-integral multiplicities (1/2, 1/2) at p=2")

        monkeypatch.setattr("cli.app.classify_batch", broken)
        code = main(["classify", "--fan", "P1", "--point", "2", "--config", small_config])
        assert code == EXIT_INTERNAL
        assert "InternalConsistencyError" in capsys.readouterr().err


class TestLocate:
    def test_locate(self, capsys, small_config):
        """Test (1,1) lies in the interior of the cone spanned by e1 and e2 on P2"""
        assert main(["locate", "--fan", "P2", "--vector", "1,1", "--config", small_config]) == EXIT_OK
        out = capsys.readouterr().out
        assert "coefficients=1,1" in out

    def test_wrong_dimension(self, capsys, small_config):
        assert main(["locate", "--fan", "P2", "--vector", "1,1,1", "--config", small_config]) == EXIT_INVALID


class TestClassify:
    """Test the classify subcommand"""

    def test_squarefull_point(self, capsys, small_config):
        """Test 4/9 on P1 with m=(2,2) is Campana and Darmon, 8 is Campana only"""
        code = main(["classify", "--fan", "P1", "--weights", "2,2", "--point", "4/9", "--point", "8",
                     "--config", small_config])
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        verdicts = {(r["point"], r["variant"]): r["verdict"] for r in rows}
        assert verdicts[("4/9", "campana")] == "true"
        assert verdicts[("4/9", "darmon")] == "true"
        assert verdicts[("8", "campana")] == "true"
        assert verdicts[("8", "darmon")] == "false"

    def test_single_variant_to_file(self, tmp_path, capsys, small_config):
        out = tmp_path / "verdicts.csv"
        code = main(["classify", "--fan", "P1", "--weights", "2,2", "--point", "2", "--variant", "campana",
                     "--out", str(out), "--config", small_config])
        assert code == EXIT_OK
        rows = list(csv.DictReader(out.open(encoding="utf-8")))
        assert len(rows) == 1
        assert rows[0]["verdict"] == "false"
        assert rows[0]["witness_prime"] == "2"

    def test_bad_variant(self, capsys, small_config):
        code = main(["classify", "--fan", "P1", "--point", "2", "--variant", "bogus", "--config", small_config])
        assert code == EXIT_INVALID

    def test_missing_point(self, capsys, small_config):
        assert main(["classify", "--fan", "P1", "--config", small_config]) == EXIT_INVALID


class TestHeight:
    def test_anticanonical(self, capsys, small_config):
        """Test H(2,3) = 27 on P2"""
        code = main(["height", "--fan", "P2", "--point", "2,3", "--anticanonical", "--config", small_config])
        assert code == EXIT_OK
        assert capsys.readouterr().out.strip().endswith("= 27")

    def test_squarefull(self, capsys, small_config):
        """Test H(4/9) = 9 on P1 with m=(2,2)"""
        assert main(["height", "--fan", "P1", "--weights", "2,2", "--point", "4/9", "--config", small_config]) == 0
        assert "2^1 * 3^1 * 1.5 = 9" in capsys.readouterr().out


class TestQpoly:
    def test_plain(self, capsys, small_config):
        """Test the plain Q of P1"""
        code = main(["qpoly", "--fan", "P1", "--variant", "plain", "--config", small_config])
        assert code == EXIT_OK
        assert "Q = 1 + -1 * u[0,0]^1 * u[1,0]^1" in capsys.readouterr().out

    def test_inertia_count(self, capsys, small_config):
        """Test one inertia degree per orbit is required"""
        code = main(["qpoly", "--fan", "P1", "--inertia", "1,2,3", "--config", small_config])
        assert code == EXIT_INVALID


class TestDensity:
    def test_worked_value(self, capsys, small_config):
        """Test P1, m=(2,2), p=2 prints agreement and d_inf = 8"""
        code = main(["density", "--fan", "P1", "--weights", "2,2", "--prime", "2", "--config", small_config])
        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert "agree within the tail bound" in out
        assert "d_inf=8" in out

    def test_below_abscissa(self, capsys, small_config):
        """Test s = 1/2 diverges for m=(2,2) and exits with code 2"""
        code = main(["density", "--fan", "P1", "--weights", "2,2", "--s", "1/2", "--config", small_config])
        assert code == EXIT_INVALID


class TestPredict:
    def test_keyvalue_and_csv(self, tmp_path, capsys, small_config):
        out = tmp_path / "predict.csv"
        code = main(["predict", "--fan", "P1", "--weights", "1,1", "--out", str(out), "--config", small_config])
        assert code == EXIT_OK
        text = capsys.readouterr().out
        assert "d_inf=4" in text
        assert "primes_cutoff=1000" in text
        rows = list(csv.DictReader(out.open(encoding="utf-8")))
        assert rows[0]["fan"] == "P1"
        assert rows[0]["primes_cutoff"] == "1000"

    def test_primes_cutoff_override(self, capsys, small_config):
        code = main(["predict", "--fan", "P1", "--primes-cutoff", "500", "--config", small_config])
        assert code == EXIT_OK
        assert "primes_cutoff=500" in capsys.readouterr().out


class TestCount:
    """Test the count subcommand"""

    def test_count_csv(self, capsys, small_config):
        """Test 22 Campana points of height <= 10 on P1 with m=(2,2)"""
        code = main(["count", "--fan", "P1", "--weights", "2,2", "--bound", "10", "--checkpoints", "4",
                     "--config", small_config])
        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "B,count,variant,fan,weights,elapsed_ms"
        assert lines[-1].startswith('10,22,campana,P1,"2,2",')

    def test_list(self, capsys, small_config):
        """Test --list prints each Darmon point with its height"""
        code = main(["count", "--fan", "P1", "--weights", "2,2", "--variant", "darmon", "--bound", "10", "--list",
                     "--config", small_config])
        assert code == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert len(rows) == 14
        assert all(float(r["height"]) <= 10 for r in rows)

    def test_missing_bound(self, capsys, small_config):
        assert main(["count", "--fan", "P1", "--config", small_config]) == EXIT_INVALID

    def test_negative_bound(self, capsys, small_config):
        assert main(["count", "--fan", "P1", "--bound", "-3", "--config", small_config]) == EXIT_INVALID

    def test_budget(self, capsys, small_config):
        """Test an oversized generic search exits with code 3"""
        code = main(["count", "--fan", "F1", "--weights", "2,2,2,2", "--bound", "1e4", "--config", small_config])
        assert code == EXIT_BUDGET
        assert "budget" in capsys.readouterr().err


class TestReport:
    def test_rational_points(self, tmp_path, capsys, small_config):
        """Test the report on P1 with m=1 writes both CSV files and a ratio near 1"""
        out = tmp_path / "report.csv"
        counts_out = tmp_path / "counts.csv"
        code = main(["report", "--fan", "P1", "--weights", "1,1", "--bound", "5000", "--out", str(out),
                     "--counts-out", str(counts_out), "--config", small_config])
        assert code == EXIT_OK
        row = next(csv.DictReader(out.open(encoding="utf-8")))
        assert float(row["ratio"]) == pytest.approx(1, abs=0.1)
        rows = read_count_csv(counts_out)
        assert len(rows) == 8
        assert rows[-1]["B"] == "5000"
