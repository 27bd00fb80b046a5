"""End-to-end runs of the command-line interface."""

import csv
import hashlib
import json
import math

import pytest

from invlang.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def read_manifest(path):
    with open(str(path) + ".manifest.json") as fh:
        return json.load(fh)


class TestSeries:
    def test_inverse_csv(self, tmp_path):
        out = tmp_path / "inv.csv"
        assert main(["series", "--function", "inverse", "--order", "9",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert [r["power"] for r in rows] == ["1", "3", "5", "7", "9"]
        assert [r["numerator"] for r in rows] == ["3", "9", "297", "1539", "126117"]
        assert [r["denominator"] for r in rows] == ["1", "5", "175", "875", "67375"]
        got = float(rows[2]["float64_value"])
        assert got == pytest.approx(297 / 175, rel=1e-16)

    def test_forward_csv(self, tmp_path):
        out = tmp_path / "fwd.csv"
        assert main(["series", "--function", "langevin", "--order", "11",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows[0]["numerator"] == "1" and rows[0]["denominator"] == "3"
        assert rows[1]["numerator"] == "-1" and rows[1]["denominator"] == "45"
        assert rows[5]["numerator"] == "-1382"
        assert rows[5]["denominator"] == "638512875"

    def test_json_format(self, tmp_path):
        out = tmp_path / "h.json"
        assert main(["series", "--function", "h", "--order", "8",
                     "--out", str(out), "--format", "json"]) == 0
        doc = json.loads(out.read_text())
        assert doc["columns"] == ["power", "numerator", "denominator", "float64_value"]
        assert doc["rows"][0][:3] == ["0", "1", "1"]

    def test_manifest_digest(self, tmp_path):
        out = tmp_path / "d.csv"
        main(["series", "--function", "f", "--order", "12", "--out", str(out)])
        man = read_manifest(out)
        digest = hashlib.sha256(out.read_bytes()).hexdigest()
        assert man["outputs"][out.name] == digest
        assert man["command"] == "series"
        assert "created_utc" in man

    def test_determinism(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        main(["series", "--function", "g", "--order", "30", "--out", str(a)])
        main(["series", "--function", "g", "--order", "30", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_order_validation(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["series", "--function", "inverse", "--order", "0",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestEstimate:
    def test_three_term_exact_auto(self, tmp_path):
        out = tmp_path / "tt.csv"
        assert main(["estimate", "--method", "three-term-exact",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert rows[0]["anchor"] == "262"
        assert rows[-1]["anchor"] == "300"
        mid = [r for r in rows if r["anchor"] == "290"][0]
        assert float(mid["r"]) == pytest.approx(0.9046, abs=2e-3)
        assert float(mid["alpha"]) == pytest.approx(0.5, abs=0.1)

    def test_domb_sykes_fit(self, tmp_path):
        out = tmp_path / "ds.csv"
        assert main(["estimate", "--method", "domb-sykes", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 1
        assert float(rows[0]["radius"]) == pytest.approx(0.90465671, abs=1e-6)
        assert float(rows[0]["alpha"]) == pytest.approx(0.48914, abs=1e-4)
        assert rows[0]["n_points"] == "112"

    def test_too_narrow_window_is_numerical_error(self, tmp_path):
        rc = main(["estimate", "--method", "domb-sykes", "--window", "446:448",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 3

    def test_bad_window_syntax(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["estimate", "--method", "domb-sykes", "--window", "abc",
                  "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestPoles:
    def test_small_map(self, tmp_path):
        out = tmp_path / "p.csv"
        assert main(["poles", "--depths", "20", "--function", "f",
                     "--filter", "none", "--out", str(out)]) == 0
        rows = read_csv(out)
        kinds = {r["kind"] for r in rows}
        assert kinds == {"pole", "zero"}
        poles = [r for r in rows if r["kind"] == "pole"]
        assert len(poles) == 20  # 10 poles in x^2, listed as +- pairs in x
        assert all(r["kept"] == "true" for r in rows)
        # nearest pole modulus should sit near the true radius
        mods = sorted(math.hypot(float(r["re"]), float(r["im"])) for r in poles)
        assert mods[0] == pytest.approx(0.9046, abs=2e-2)

    def test_depth_validation(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["poles", "--depths", "500", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestBranchPoints:
    def test_first_three(self, tmp_path):
        out = tmp_path / "bp.csv"
        assert main(["branch-points", "--n", "3", "--out", str(out)]) == 0
        rows = read_csv(out)
        assert len(rows) == 3
        assert float(rows[0]["modulus"]) == pytest.approx(0.904643679457684, rel=1e-14)
        assert float(rows[1]["modulus"]) == pytest.approx(0.957309439091278, rel=1e-14)
        assert float(rows[0]["defining_residual"]) < 1e-30

    def test_standard_precision_flag(self, tmp_path):
        out = tmp_path / "bps.csv"
        assert main(["branch-points", "--n", "1", "--precision", "standard",
                     "--out", str(out)]) == 0
        rows = read_csv(out)
        assert float(rows[0]["z_re"]) == pytest.approx(0.889240427271280, rel=1e-11)
        man = read_manifest(out)
        assert man["precision_mode"] == "standard"

    def test_n_validation(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["branch-points", "--n", "0", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2

    def test_env_default(self, tmp_path, monkeypatch):
        monkeypatch.setenv("INVLANG_PRECISION", "nonsense")
        with pytest.raises(SystemExit) as exc:
            main(["branch-points", "--n", "1", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestEval:
    def test_grid_with_reference_row(self, tmp_path):
        out = tmp_path / "e.csv"
        assert main(["eval", "--grid", "0:0.5:0.25", "--mu", "0.6",
                     "--Im", "25", "--out", str(out)]) == 0
        rows = read_csv(out)
        xs = [float(r["x"]) for r in rows]
        x0 = math.sqrt(3 / 25)
        assert xs == sorted(xs)
        assert any(abs(x - x0) < 1e-15 for x in xs)
        ref = [r for r in rows if abs(float(r["x"]) - x0) < 1e-15][0]
        assert ref["W"] == "0.0000000000000000e+00"
        zero = [r for r in rows if r["x"] == "0.0000000000000000e+00"][0]
        assert zero["Linv"] == "0.0000000000000000e+00"
        assert zero["W"] == ""  # I_1 below 3 has no energy value
        half = [r for r in rows if float(r["x"]) == 0.5][0]
        assert float(half["cohen"]) == pytest.approx(11 / 6, rel=1e-15)
        assert float(half["f"]) == pytest.approx(
            (1 - 0.25) * float(half["Linv"]) / 1.5, rel=1e-13)

    def test_negative_branch_blanks_beta(self, tmp_path):
        out = tmp_path / "neg.csv"
        assert main(["eval", "--grid=-0.5:0.5:0.5", "--out", str(out)]) == 0
        rows = read_csv(out)
        neg = [r for r in rows if float(r["x"]) == -0.5][0]
        assert neg["beta"] == ""
        assert float(neg["Linv"]) == -float(
            [r for r in rows if float(r["x"]) == 0.5][0]["Linv"])

    def test_grid_cap(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--grid", "0:1.5:0.1", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2

    def test_material_validation(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["eval", "--Im", "2.0", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "0.1.0" in capsys.readouterr().out

    def test_no_command_errors(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2
