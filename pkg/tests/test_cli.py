import json
import math
import subprocess
import sys

import pytest

from genzgamma.cli import main
from genzgamma.report import RunReport, dumps


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestEval:
    def test_gamma_p(self, capsys):
        code, out, _ = run(capsys, "eval", "gamma_p", "--p", "1", "--t", "1", "--format", "json")
        assert code == 0
        cert = json.loads(out)["certificates"][0]
        assert cert["value"] == 0.5

    def test_psi_p(self, capsys):
        code, out, _ = run(capsys, "eval", "psi_p", "--p", "1", "--t", "1", "--format", "json")
        assert code == 0 and json.loads(out)["certificates"][0]["value"] == -1.5

    def test_gamma_k_text(self, capsys):
        code, out, _ = run(capsys, "eval", "gamma_k", "--k", "2", "--t", "2,4")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 2 and lines[0].startswith("t=2 value=1 ")

    def test_psi_pq_forms(self, capsys):
        vals = {}
        for form in ("series", "definitional"):
            _, out, _ = run(capsys, "eval", "psi_pq", "--p", "1", "--q", "0.5", "--t", "1",
                            "--pq-form", form, "--format", "json")
            vals[form] = json.loads(out)["certificates"][0]["value"]
        assert vals["series"] - vals["definitional"] == pytest.approx(math.log(2) / 3, abs=1e-15)

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "eval", "classical", "--t", "0.5,1", "--format", "csv")
        assert code == 0
        rows = out.splitlines()
        assert rows[0].split(",")[:2] == ["check", "t"] and len(rows) == 3

    @pytest.mark.parametrize("argv", [
        ("eval", "gamma_q", "--q", "1.5", "--t", "1"),
        ("eval", "gamma_q", "--q", "0.5", "--t", "-1"),
        ("eval", "gamma_p", "--t", "1"),
        ("eval", "gamma_p", "--p", "0", "--t", "1"),
        ("eval", "nope", "--t", "1"),
        ("eval", "gamma_k", "--k", "1", "--t", "x"),
        ("eval", "gamma_k", "--k", "1", "--t", "1", "--workers", "0"),
    ])
    def test_invalid_input_exits_2(self, capsys, argv):
        code = None
        try:
            code = main(list(argv))
        except SystemExit as exc:
            code = exc.code
        assert code == 2

    def test_budget_exit_3(self, capsys):
        code, _, err = run(capsys, "eval", "gamma_q", "--q", "0.9", "--t", "1.5", "--max-terms", "3")
        assert code == 3 and "budget" in err


class TestVerify:
    def test_lemma_subset(self, capsys):
        code, out, _ = run(capsys, "verify-lemmas", "--only", "3", "--p", "1,5", "--q", "0.5",
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["summary"]["failed"] == 0 and data["summary"]["passed"] > 0

    def test_out_of_hypothesis_rejected(self, capsys):
        code, _, err = run(capsys, "verify-lemmas", "--lambda", "0.5", "--mu", "1")
        assert code == 2 and "lambda" in err

    def test_out_of_hypothesis_exploratory(self, capsys):
        code, out, _ = run(capsys, "verify-lemmas", "--only", "1", "--lambda", "0.5", "--mu", "1",
                           "--allow-out-of-hypothesis", "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert data["exploratory"]["failed"] > 0
        assert data["violations"] == []
        assert all(c["status"] == "exploratory" for c in data["certificates"])

    def test_lambda_needs_mu(self, capsys):
        code, _, _ = run(capsys, "verify-lemmas", "--lambda", "2")
        assert code == 2

    def test_theorem_subset(self, capsys):
        code, out, _ = run(capsys, "verify-theorems", "--only", "4", "--q", "0.5", "--k", "2",
                           "--g", "exponential_saturating", "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert data["config"]["unit_interval"]["included"] is False
        assert data["summary"]["failed"] == 0
        assert all(c["routes_agree"] for c in data["certificates"])

    def test_short_t_grid(self, capsys):
        code, _, err = run(capsys, "verify-theorems", "--only", "1", "--t", "0,1,2")
        assert code == 2

    def test_json_is_byte_identical(self, capsys, tmp_path):
        outs = []
        for i in range(2):
            path = tmp_path / f"r{i}.json"
            run(capsys, "verify-theorems", "--only", "2", "--q", "0.3", "--format", "json", "--out", str(path))
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        assert b"wall_clock" not in outs[0]

    def test_timing_flag(self, capsys):
        _, out, _ = run(capsys, "eval", "classical", "--t", "1", "--timing", "--format", "json")
        assert json.loads(out)["wall_clock_seconds"] >= 0


class TestLimits:
    def test_all_pass(self, capsys):
        code, out, _ = run(capsys, "limits")
        assert code == 0
        assert "gamma_k (t=1.5): passed" in out
        assert "limits: passed=5 failed=0" in out

    def test_degenerate_t(self, capsys):
        # at t = 2 both Gamma and Gamma_k(2, .) equal 1, so the k-path error is not monotone
        code, out, _ = run(capsys, "limits", "--t", "2")
        assert code == 1 and "failed=2" in out


class TestExplore:
    def test_writes_csv_and_json(self, capsys, tmp_path):
        code, out, _ = run(capsys, "explore", "P1", "--p-range", "1:3", "--q-range", "0.5:0.9:3",
                           "--t-range", "0.5:2:3:log", "--out", str(tmp_path))
        assert code == 0
        lines = (tmp_path / "explore_P1.csv").read_text().splitlines()
        assert lines[0] == "p,q,t,value,tail_bound,verdict"
        assert len(lines) == 1 + 27
        data = json.loads((tmp_path / "explore_P1.json").read_text())
        assert data["region_map"]["shape"] == [3, 3, 3]
        assert "27 points" in out

    def test_max_points_one(self, capsys, tmp_path):
        code, _, _ = run(capsys, "explore", "P2", "--max-points", "1", "--out", str(tmp_path))
        assert code == 0
        assert len((tmp_path / "explore_P2.csv").read_text().splitlines()) == 2

    def test_bad_range(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["explore", "P1", "--q-range", "0.1", "--out", str(tmp_path)])
        assert exc.value.code == 2

    def test_range_needs_steps(self, capsys, tmp_path):
        code, _, _ = run(capsys, "explore", "P1", "--q-range", "0.1:0.5", "--out", str(tmp_path))
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genzgamma", "eval", "gamma_p", "--p", "1", "--t", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "value=0.5 " in proc.stdout


class TestDumps:
    def test_floats_and_nonfinite(self):
        text = dumps({"a": 0.1, "b": [1, 2.5], "c": float("inf"), "d": None, "e": {}})
        assert '"a": 0.10000000000000001' in text
        assert '"c": null' in text
        assert json.loads(text)["b"] == [1, 2.5]
        assert text.endswith("}\n")

    def test_roundtrip_exact(self):
        vals = [math.pi, 1e-300, -2.0 / 3.0, 123456789.123]
        assert json.loads(dumps(vals)) == vals

    def test_report_exit_code(self):
        r = RunReport("x", {}, [{"outcome": "failed", "status": "exploratory"}])
        assert r.exit_code == 0 and r.summary["failed"] == 0 and r.exploratory["failed"] == 1
        r.certificates.append({"outcome": "failed", "status": "verified"})
        assert r.exit_code == 1 and len(r.violations) == 1
