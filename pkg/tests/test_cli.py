from __future__ import annotations

import csv
import io
import json
import math

import numpy as np
import pytest

from artifact import cli


def run(capsys, *argv):
    code = cli.run(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestStiffness:
    def test_reference_row(self, capsys):
        code, out, _ = run(capsys, "stiffness", "--model", "relaxed", "--variant", "zeroPoisson-oneCurv",
                           "--params", "relaxed_zeroPoisson_oneCurv", "--lc-range", "1:1:2")
        assert code == 0
        row = table(out)[0]
        got = [float(row[k]) for k in ("Mc_norm", "Mm_norm", "Wtot_norm", "Deff")]
        np.testing.assert_allclose(got, [0.284782, 1.430436, 1.715218, 0.1429348], atol=1e-6)

    def test_default_sweep(self, capsys):
        code, out, _ = run(capsys, "stiffness", "--model", "cosserat")
        rows = table(out)
        assert code == 0 and len(rows) == 121
        assert float(rows[0]["Lc_over_h"]) == pytest.approx(1e-2)
        assert float(rows[-1]["Lc_over_h"]) == pytest.approx(1e2)

    @pytest.mark.parametrize("model", ["cauchy", "relaxed", "micro-stretch", "cosserat", "couple-stress",
                                       "micro-void", "micromorphic", "micro-strain", "second-gradient"])
    def test_small_length_row(self, capsys, model):
        code, out, _ = run(capsys, "stiffness", "--model", model, "--lc-range", "1e-3:1e-3:2")
        assert code == 0
        row = table(out)[0]
        assert float(row["Mm_norm"]) <= 1e-3

    def test_cosserat_rows_affine_in_length_squared(self, capsys):
        _, out, _ = run(capsys, "stiffness", "--model", "cosserat", "--lc-range", "0.1:10:7")
        rows = table(out)
        r2 = np.array([float(r["Lc_over_h"]) ** 2 for r in rows])
        mm = np.array([float(r["Mm_norm"]) for r in rows])
        mc = np.array([float(r["Mc_norm"]) for r in rows])
        np.testing.assert_allclose(mm / r2, mm[0] / r2[0], rtol=1e-13)
        np.testing.assert_allclose(mc, mc[0], rtol=1e-15)

    def test_deterministic_and_full_precision(self, capsys):
        args = ("stiffness", "--model", "relaxed", "--lc-range", "0.1:10:5")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b
        value = table(a)[0]["Deff"]
        assert float(value) == float(repr(float(value)))

    def test_json_format(self, capsys):
        _, out, _ = run(capsys, "stiffness", "--model", "micro-void", "--lc-range", "1:2:2", "--format", "json")
        rows = [json.loads(line) for line in out.splitlines()]
        assert len(rows) == 2 and set(rows[0]) == {"Lc_over_h", "Mc_norm", "Mm_norm", "Wtot_norm", "Deff"}

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "s.csv"
        code, out, _ = run(capsys, "stiffness", "--model", "cauchy", "--lc-range", "1:2:2", "--out", str(path))
        assert code == 0 and out == ""
        assert table(path.read_text())[0]["Deff"] == repr(2.0 / 9.0)


class TestProfile:
    def test_relaxed_limit_curves(self, capsys):
        code, out, _ = run(capsys, "profile", "--model", "relaxed", "--variant", "zeroPoisson-oneCurv",
                           "--params", "relaxed_zeroPoisson_oneCurv", "--fields", "P11", "--grid", "11")
        assert code == 0
        rows = table(out)
        x = np.array([float(r["x2_over_h"]) for r in rows])
        np.testing.assert_allclose([float(r["P11@Lc0"]) for r in rows], -0.5 * x, atol=1e-12)

    def test_general_limits(self, capsys):
        _, out, _ = run(capsys, "profile", "--model", "relaxed", "--variant", "general",
                        "--params", "relaxed_general_profile", "--fields", "P11", "--grid", "11")
        rows = table(out)
        x = np.array([float(r["x2_over_h"]) for r in rows])
        np.testing.assert_allclose([float(r["P11@Lc0"]) for r in rows], -x / 4.0, atol=1e-12)
        np.testing.assert_allclose([float(r["P11@Lcinf"]) for r in rows], -x, atol=1e-8)

    def test_unbounded_model_has_no_upper_curve(self, capsys):
        _, out, _ = run(capsys, "profile", "--model", "cosserat", "--grid", "5")
        assert "Lcinf" not in out.splitlines()[0]

    def test_unknown_field(self, capsys):
        code, _, err = run(capsys, "profile", "--model", "cosserat", "--fields", "P11")
        assert code == 2 and "P11" in err


class TestTables:
    def test_lakes_example(self, capsys):
        code, out, _ = run(capsys, "lakes", "--params", "cosserat")
        row = table(out)[0]
        assert code == 0
        assert float(row["Omega"]) == pytest.approx(7.75, rel=1e-15)
        assert float(row["ell_b"]) == pytest.approx(math.sqrt(0.375), rel=1e-15)

    def test_lakes_override(self, capsys):
        _, out, _ = run(capsys, "lakes", "--params", "cosserat", "--gamma-tilde", "0")
        assert float(table(out)[0]["Omega"]) == 1.0

    def test_convert_unit_weights(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"mu_e": 1.0, "mu_micro": 1.0, "mu": 1.0, "Lc": 1.0}))
        code, out, _ = run(capsys, "convert", "--model", "relaxed", "--params", str(path))
        vals = {r["coefficient"]: float(r["value"]) for r in table(out)}
        assert code == 0
        assert vals["a_hat10"] == 1.0 and vals["a_hat15"] == -1.0
        # the energy-equivalent mapping leaves a_hat1 at zero for equal weights
        others = [v for k, v in vals.items() if k.startswith("a_hat") and k not in ("a_hat10", "a_hat15")]
        assert others == [0.0] * len(others)

    def test_limits_all_models(self, capsys):
        code, out, _ = run(capsys, "limits", "--params", "relaxed_general")
        rows = {r["model"]: r for r in table(out)}
        assert code == 0 and len(rows) == 9
        assert rows["cosserat"]["D_inf"] == "inf"
        assert float(rows["relaxed"]["D_zero"]) == pytest.approx(1.0 / 9.0, rel=1e-15)

    def test_presets_listing(self, capsys):
        code, out, _ = run(capsys, "presets")
        assert code == 0 and len(out.splitlines()) == len(cli.preset_index())


class TestVerify:
    def test_single_model(self, capsys):
        code, out, _ = run(capsys, "verify", "--model", "micro-void", "--params", "micro_void")
        rows = [json.loads(line) for line in out.splitlines()]
        assert code == 0 and rows and all(r["pass"] for r in rows)

    def test_failure_exits_one(self, capsys, monkeypatch):
        from artifact import oracle

        def failing(p, grids):
            rep = oracle.VerificationReport()
            rep.add("forced", 1.0, 0.0)
            return rep

        monkeypatch.setattr(oracle, "verify_model", failing)
        code, out, _ = run(capsys, "verify", "--model", "cauchy")
        assert code == 1 and json.loads(out)["pass"] is False

    def test_small_grid_rejected(self, capsys):
        code, _, _ = run(capsys, "verify", "--model", "cauchy", "--grid", "201")
        assert code == 2


class TestUsage:
    @pytest.mark.parametrize("argv", [
        ["stiffness", "--model", "nope"],
        ["stiffness", "--model", "relaxed", "--variant", "nope"],
        ["stiffness", "--model", "relaxed", "--lc-range", "1:2"],
        ["stiffness", "--model", "relaxed", "--lc-range", "-1:2:3"],
        ["stiffness", "--model", "relaxed", "--params", "no_such_preset"],
        ["stiffness"],
        [],
    ])
    def test_exit_two(self, capsys, argv):
        assert cli.run(argv) == 2

    def test_bad_param_key(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"mu_e": 1.0, "nu": 0.3}))
        code, _, err = run(capsys, "stiffness", "--model", "cauchy", "--params", str(path))
        assert code == 2 and "nu" in err

    def test_degenerate_material(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"mu_e": 1.0, "mu_micro": 1.0, "Lc": 1.0, "a1": 0.0}))
        code, _, _ = run(capsys, "stiffness", "--model", "relaxed", "--variant", "general", "--params", str(path))
        assert code == 2

    def test_fmt_negative_zero(self):
        assert cli.fmt(-0.0) == "0.0"
        assert cli.fmt(math.inf) == "inf"


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "artifact", "lakes", "--params", "cosserat"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and "7.75" in res.stdout
