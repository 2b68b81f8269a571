"""Integration tests driving the formscheme command line end to end."""

import csv
import json
import os
import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from formscheme import config
from formscheme.cli import main


class TestEigCommand:
    """formscheme eig."""

    def test_csv_table(self, capsys):
        """Q for m = 3, q = 2 as CSV: header plus five class rows."""
        with tempfile.TemporaryDirectory() as tmpdir:
            code = main(["eig", "--m", "3", "--q", "2", "--which", "Q", "--format", "csv", "--out", tmpdir])
            assert code == 0
            path = Path(tmpdir) / "quad_Q_m3_q2.csv"
            with path.open("r", encoding="utf-8", newline="") as f:
                rows = list(csv.reader(f))
        assert rows[0] == ["Q", "0+", "1", "2+", "2-", "3"]
        assert len(rows) == 6
        assert "Wrote table:" in capsys.readouterr().out

    def test_both_tables_json(self):
        """--which both writes P and Q for the symmetric scheme."""
        with tempfile.TemporaryDirectory() as tmpdir:
            code = main(["eig", "--m", "2", "--q", "3", "--scheme", "sym", "--out", tmpdir])
            assert code == 0
            names = sorted(p.name for p in Path(tmpdir).iterdir())
            obj = json.loads((Path(tmpdir) / "sym_P_m2_q3.json").read_text(encoding="utf-8"))
        assert names == ["sym_P_m2_q3.json", "sym_Q_m2_q3.json"]
        assert obj["scheme"] == "symmetric"

    def test_oracle(self, capsys):
        """Closed forms agree with the character sums for m = 2, q = 2."""
        with tempfile.TemporaryDirectory() as tmpdir:
            assert main(["eig", "--m", "2", "--q", "2", "--oracle", "--out", tmpdir]) == 0
        assert "Oracle: PASS" in capsys.readouterr().out

    def test_bad_field(self, capsys):
        """q = 6 is a usage error."""
        assert main(["eig", "--m", "1", "--q", "6"]) == 1
        assert capsys.readouterr().out.startswith("Error:")


class TestCodePipeline:
    """construct, innerdist and code on one set of forms."""

    def test_construct_innerdist_code(self, capsys):
        """The maximal 5-code in Q(5,2) and its code of minimum distance 11."""
        with tempfile.TemporaryDirectory() as tmpdir:
            tmpdir = Path(tmpdir)
            forms = tmpdir / "y.json"
            code = main(["construct", "--family", "quad-oo", "--m", "5", "--d", "5", "--q", "2",
                         "--check", "--out", str(forms)])
            assert code == 0
            assert len(json.loads(forms.read_text(encoding="utf-8"))["forms"]) == 32

            dist = tmpdir / "d.json"
            assert main(["innerdist", "--in", str(forms), "--dual", "--out", str(dist)]) == 0
            obj = json.loads(dist.read_text(encoding="utf-8"))
            assert obj["min_rank"] == 5
            assert obj["design_strength"] >= 2
            values = dict(zip(obj["index"], obj["values"]))
            assert values["5"] == "31"
            assert values["0+"] == "1"

            enums = tmpdir / "e.json"
            words = tmpdir / "words.csv"
            code = main(["code", "--in", str(forms), "--enum", "both", "--delta", "2",
                         "--out", str(enums), "--dump", str(words)])
            assert code == 0
            obj = json.loads(enums.read_text(encoding="utf-8"))
            assert obj["length"] == 31
            assert obj["size"] == "2048"
            assert obj["min_distance"] == 11
            assert obj["designed_distance"] == 11
            assert obj["equal"] is True
            assert len(words.read_text(encoding="utf-8").splitlines()) == 2049
        assert "Theory vs brute force: EQUAL" in capsys.readouterr().out

    def test_puncture(self, capsys):
        """Puncturing the 5-code gives a 3-code in Q(4,2)."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir) / "p.json"
            code = main(["construct", "--family", "quad-oo", "--m", "5", "--d", "5", "--q", "2",
                         "--puncture", "--check", "--out", str(out)])
            assert code == 0
            obj = json.loads(out.read_text(encoding="utf-8"))
        assert obj["m"] == 4
        assert len(obj["forms"]) == 32
        assert "3-code: yes" in capsys.readouterr().out

    def test_wrong_parity(self):
        """quad-oo needs m and d odd."""
        assert main(["construct", "--family", "quad-oo", "--m", "4", "--d", "3", "--q", "2"]) == 1

    def test_code_from_bilinear_forms(self):
        """Codes need quadratic forms."""
        with tempfile.TemporaryDirectory() as tmpdir:
            forms = Path(tmpdir) / "s.json"
            assert main(["construct", "--family", "sym", "--m", "3", "--d", "3", "--q", "2",
                         "--out", str(forms)]) == 0
            assert main(["code", "--in", str(forms)]) == 1

    def test_missing_input(self, capsys):
        """A missing file is a usage error."""
        assert main(["innerdist", "--in", "/nonexistent/forms.json"]) == 1
        assert "Error:" in capsys.readouterr().out

    def test_stored_distributions(self, capsys):
        """innerdist reloads its own output and refuses a dual distribution."""
        with tempfile.TemporaryDirectory() as tmpdir:
            tmpdir = Path(tmpdir)
            forms, dist, dual = tmpdir / "y.json", tmpdir / "d.json", tmpdir / "dp.json"
            assert main(["construct", "--family", "quad-oo", "--m", "3", "--d", "3", "--q", "2",
                         "--out", str(forms)]) == 0
            code = main(["innerdist", "--in", str(forms), "--out", str(dist),
                         "--dual-out", str(dual)])
            assert code == 0
            first = json.loads(dist.read_text(encoding="utf-8"))
            assert json.loads(dual.read_text(encoding="utf-8"))["dual"] is True
            assert first["dual"] is False
            assert first["aggregate"]["B"] == ["1", "7"]
            assert "dual_distribution" in first

            again = tmpdir / "d2.json"
            assert main(["innerdist", "--dist", str(dist), "--out", str(again)]) == 0
            second = json.loads(again.read_text(encoding="utf-8"))
            assert second["values"] == first["values"]
            assert "Loaded inner distribution of size 8" in capsys.readouterr().out

            assert main(["innerdist", "--dist", str(dual)]) == 1
        assert "dual distribution" in capsys.readouterr().out

    def test_compare_stored_enumerator(self, capsys):
        """code --compare agrees with --enum-out and flags a different enumerator."""
        with tempfile.TemporaryDirectory() as tmpdir:
            tmpdir = Path(tmpdir)
            forms, stored = tmpdir / "y.json", tmpdir / "e.json"
            assert main(["construct", "--family", "quad-oo", "--m", "3", "--d", "3", "--q", "2",
                         "--out", str(forms)]) == 0
            code = main(["code", "--in", str(forms), "--enum", "theory",
                         "--enum-out", str(stored)])
            assert code == 0
            assert json.loads(stored.read_text(encoding="utf-8"))["length"] == 7

            code = main(["code", "--in", str(forms), "--enum", "brute",
                         "--compare", str(stored)])
            assert code == 0
            assert "EQUAL" in capsys.readouterr().out

            other = tmpdir / "other.json"
            stale = {"length": 7, "enum": [[0, "1"], [7, "1"]]}
            other.write_text(json.dumps(stale), encoding="utf-8")
            assert main(["code", "--in", str(forms), "--compare", str(other)]) == 2
        assert "DIFFER" in capsys.readouterr().out

    def test_innerdist_needs_one_source(self):
        """--in and --dist are mutually exclusive and one is required."""
        with pytest.raises(SystemExit):
            main(["innerdist"])
        with pytest.raises(SystemExit):
            main(["innerdist", "--in", "a.json", "--dist", "b.json"])


class TestVerifyCommand:
    """formscheme verify."""

    def test_qnum_suite(self):
        """The F-number suite passes and writes its report."""
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir) / "report.json"
            assert main(["verify", "--suite", "qnum", "--max-m", "2", "--max-q", "2", "--out", str(out)]) == 0
            report = json.loads(out.read_text(encoding="utf-8"))
        assert report["passed"] is True
        assert report["suite"] == "qnum"

    def test_unknown_suite(self):
        """Unknown suites exit with 1."""
        assert main(["verify", "--suite", "everything"]) == 1

    def test_strict_exit_code(self, capsys):
        """--strict exits with 2 when checks were skipped at a cap."""
        saved = dict(config.settings())
        try:
            with patch.dict(os.environ, {config.CAP_ENV_VAR: "4"}):
                code = main(["verify", "--suite", "scheme", "--max-m", "2", "--max-q", "2", "--strict"])
        finally:
            config.configure(saved)
        assert code == 2
        out = capsys.readouterr().out
        assert "Skipped:" in out
        assert "Verdict: FAIL" in out
