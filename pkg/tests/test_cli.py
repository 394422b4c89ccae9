"""CLI surface: commands, exit codes, format determinism."""

from __future__ import annotations

import json

import pytest

from crownvol.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCrownCommand:
    def test_symbolic(self, capsys):
        code, out, _ = run(capsys, "crown", "--n", "3")
        assert code == 0
        assert out.strip() == "(d^2 + pi^2) / (4 cosh(d/2))"

    def test_numeric_at_zero(self, capsys):
        code, out, _ = run(capsys, "crown", "--n", "3", "--d", "0")
        assert code == 0
        assert out.startswith("pi^2/4 = 2.4674011")

    def test_numeric(self, capsys):
        code, out, _ = run(capsys, "crown", "--n", "1", "--d", "2")
        assert code == 0
        assert out.startswith("0.324027136")

    def test_total(self, capsys):
        code, out, _ = run(capsys, "crown", "--n", "2", "--total")
        assert code == 0
        assert out.strip() == "pi^2/2"

    def test_bad_n(self, capsys):
        code, _, err = run(capsys, "crown", "--n", "0")
        assert code == 2
        assert "at least 1" in err


class TestAnnulusCommand:
    def test_exact(self, capsys):
        code, out, _ = run(capsys, "annulus", "--a1", "1", "--a2", "2")
        assert code == 0
        assert out.strip() == "7/4 * zeta(3)"

    def test_exact_even(self, capsys):
        code, out, _ = run(capsys, "annulus", "--a1", "2", "--a2", "2")
        assert code == 0
        assert out.strip() == "6 * zeta(3)"

    def test_numeric(self, capsys):
        code, out, _ = run(capsys, "annulus", "--a1", "1", "--a2", "1", "--d", "1")
        assert code == 0
        # 1/(4 cosh^2(1/2)) = 0.19661...
        assert out.startswith("0.196611")


class TestNgonCommand:
    def test_conjecture_labelled(self, capsys):
        code, out, _ = run(capsys, "ngon", "--n", "9", "--method", "conjecture")
        assert code == 0
        assert out.strip() == "5/112 * pi^6 [CONJECTURE]"

    def test_quadrature(self, capsys):
        code, out, _ = run(capsys, "ngon", "--n", "8", "--method", "quadrature",
                           "--target", "1e-7")
        assert code == 0
        assert out.startswith("17.3171717")

    def test_mc_deterministic_given_seed(self, capsys):
        args = ("--seed", "7", "ngon", "--n", "5", "--method", "mc",
                "--samples", "20000")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_small_n_rejected_for_numeric(self, capsys):
        code, _, err = run(capsys, "ngon", "--n", "4", "--method", "quadrature")
        assert code == 2
        assert "exactly 1" in err

    def test_convergence_failure_exit_3(self, capsys):
        code, _, err = run(capsys, "ngon", "--n", "8", "--method", "quadrature",
                           "--target", "1e-12")
        assert code == 3
        assert "did not reach target" in err


@pytest.fixture
def v03_file(tmp_path):
    path = tmp_path / "v03.json"
    path.write_text(json.dumps({
        "genus": 0, "vars": ["b1", "b2", "b3"],
        "terms": [{"pi2": 0, "pows": [0, 0, 0], "coeff": "1"}],
    }))
    return str(path)


class TestSurfaceCommand:
    def test_free_neck_beta(self, capsys, v03_file):
        code, out, _ = run(capsys, "surface", "--genus", "0", "--cuffs", "2",
                           "--crowns", "1", "--wp", v03_file)
        assert code == 0
        assert out.strip() == "4 * beta(2)"

    def test_free_neck_zeta(self, capsys, v03_file):
        code, out, _ = run(capsys, "surface", "--genus", "0", "--cuffs", "2",
                           "--crowns", "2", "--wp", v03_file)
        assert code == 0
        assert out.strip() == "14 * zeta(3)"

    def test_fixed_symbolic(self, capsys, v03_file):
        code, out, _ = run(capsys, "surface", "--genus", "0", "--cuffs", "2",
                           "--crowns", "1", "--wp", v03_file, "--fixed")
        assert code == 0
        assert out.strip() == "b3 / (2 cosh(b3/2))"

    def test_fixed_numeric(self, capsys, v03_file):
        code, out, _ = run(capsys, "surface", "--genus", "0", "--cuffs", "2",
                           "--crowns", "1", "--wp", v03_file, "--necks", "1")
        assert code == 0
        assert out.startswith("0.443409")  # 1/(2 cosh(1/2))

    def test_missing_wp_is_usage_error(self, capsys, v03_file):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "surface", "--genus", "0", "--cuffs", "2", "--crowns", "1")
        assert exc.value.code == 2

    def test_invalid_wp_schema(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"genus": 0, "vars": ["b1", "b2", "b3"],
                                   "terms": [{"pi2": 0, "pows": [1, 0, 0],
                                              "coeff": "1"}]}))
        code, _, err = run(capsys, "surface", "--genus", "0", "--cuffs", "2",
                           "--crowns", "1", "--wp", str(bad))
        assert code == 2
        assert "/terms/0/pows/0" in err

    def test_special_surface_delegated(self, capsys, v03_file):
        code, _, err = run(capsys, "surface", "--genus", "0", "--cuffs", "0",
                           "--crowns", "3", "--wp", v03_file)
        assert code == 2
        assert "crown operations" in err


class TestRecognizeCommand:
    def test_found(self, capsys):
        from mpmath import mp
        with mp.workdps(60):
            text = mp.nstr(mp.mpf(7) / 4 * mp.zeta(3), 50, strip_zeros=False)
        code, out, _ = run(capsys, "recognize", "--value", text, "--degree", "3")
        assert code == 0
        assert out.strip() == "7/4 * zeta(3)"

    def test_not_found(self, capsys):
        from mpmath import mp
        with mp.workdps(60):
            text = mp.nstr(mp.sqrt(2), 50, strip_zeros=False)
        code, out, _ = run(capsys, "recognize", "--value", text, "--degree", "1")
        assert code == 0
        assert out.strip() == "NOT FOUND"

    def test_insufficient_precision_exit_4(self, capsys):
        code, _, err = run(capsys, "recognize", "--value", "1.6449",
                           "--degree", "6", "--include-beta")
        assert code == 4
        assert "digits" in err

    def test_at_file(self, capsys, tmp_path):
        from mpmath import mp
        with mp.workdps(60):
            text = mp.nstr(mp.pi ** 2 / 6, 50, strip_zeros=False)
        f = tmp_path / "value.txt"
        f.write_text(text + "\n")
        code, out, _ = run(capsys, "recognize", "--value", f"@{f}", "--degree", "2")
        assert code == 0
        assert out.strip() == "pi^2/6"


class TestFormats:
    def test_json_deterministic(self, capsys):
        args = ("--format", "json", "annulus", "--a1", "3", "--a2", "3")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["command"] == "annulus"
        assert doc["value"][0]["coeff"] == "225/8"

    def test_json_term_objects(self, capsys):
        _, out, _ = run(capsys, "--format", "json", "crown", "--n", "2", "--total")
        doc = json.loads(out)
        assert doc["value"] == [{"coeff": "1/2", "pi": 2, "log2": 0,
                                 "zeta": {}, "beta": {}, "vars": {}}]

    def test_latex(self, capsys):
        _, out, _ = run(capsys, "--format", "latex", "annulus", "--a1", "1", "--a2", "2")
        assert "\\zeta(3)" in out

    def test_csv(self, capsys):
        _, out, _ = run(capsys, "--format", "csv", "crown", "--n", "1", "--total")
        assert out.splitlines()[0] == "key,value"

    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    @pytest.mark.parametrize("argv", [
        ["ngon", "--n", "5", "--method", "sorcery"],
        ["verify", "--suite", "everything"],
        ["crown"],
        ["annulus", "--a1", "1"],
        ["recognize", "--value", "1.5", "--degree", "-2"],
        ["recognize", "--value", "nan", "--degree", "2"],
        ["crown", "--n", "2", "--d", "inf"],
        ["crown", "--n", "2", "--d", "bogus"],
        ["ngon", "--n", "two", "--method", "mc"],
    ])
    def test_malformed_inputs_exit_2(self, capsys, argv):
        try:
            code = main(argv)
        except SystemExit as exc:  # argparse-level rejections
            code = exc.code
        assert code == 2


class TestEnvironmentOverrides:
    def test_seed_from_environment(self, capsys, monkeypatch):
        args = ("ngon", "--n", "5", "--method", "mc", "--samples", "20000")
        monkeypatch.setenv("CROWNVOL_SEED", "21")
        _, out_env, _ = run(capsys, *args)
        monkeypatch.delenv("CROWNVOL_SEED")
        _, out_flag, _ = run(capsys, "--seed", "21", *args)
        assert out_env == out_flag

    def test_flag_beats_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("CROWNVOL_SEED", "21")
        args = ("--seed", "3", "ngon", "--n", "5", "--method", "mc",
                "--samples", "20000")
        _, out1, _ = run(capsys, *args)
        monkeypatch.setenv("CROWNVOL_SEED", "99")
        _, out2, _ = run(capsys, *args)
        assert out1 == out2

    def test_bad_env_value_is_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("CROWNVOL_PRECISION_BITS", "lots")
        code, _, err = run(capsys, "crown", "--n", "1", "--total")
        assert code == 2
        assert "CROWNVOL_PRECISION_BITS" in err


class TestVerifyCommand:
    def test_conjectures_suite(self, capsys, tmp_path):
        out_path = tmp_path / "report.json"
        code, out, _ = run(capsys, "--format", "json", "verify",
                           "--suite", "conjectures", "--out", str(out_path))
        assert code == 0
        doc = json.loads(out)
        assert doc["passed"] is True
        statuses = {c["status"] for c in doc["checks"]}
        assert "CONSISTENT" in statuses  # n-gon consistency entries
        assert all(s in ("PASS", "CONSISTENT") for s in statuses)
        saved = json.loads(out_path.read_text())
        assert saved["suite"] == "conjectures"
        for c in saved["checks"]:
            assert set(c) == {"check", "status", "expected", "got", "tolerance"}
