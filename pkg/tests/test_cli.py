import csv
import json

import pytest

from almost_soliton.cli import CSV_HEADER, main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestConstruct:
    def test_translation(self, tmp_path, capsys):
        out, table = tmp_path / "a.json", tmp_path / "a.csv"
        code, text, _ = run(["construct", "--family", "translation", "--profile", "paperA", "--n", "3",
                             "--alphas", "1,0,0", "--signature", "+++", "--out", str(out),
                             "--csv", str(table)], capsys)
        assert code == 0 and "PASS" in text
        doc = json.loads(out.read_text())
        for key in ("family", "n", "m", "signature", "alphas", "eps_i0", "c", "k", "base", "checks",
                    "skipped_points"):
            assert key in doc
        assert {c["name"] for c in doc["checks"]} == {"ode_translation", "pde_conformal", "full_tensor"}
        assert all(set(c) >= {"name", "sup", "rms", "tol", "pass"} for c in doc["checks"])
        rows = list(csv.reader(table.open()))
        assert tuple(rows[0]) == CSV_HEADER and len(rows) == 257
        # repr round-trip
        assert float(rows[1][1]) == doc["samples_table"][0][1]

    def test_exit_matches_report(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        code, _, _ = run(["construct", "--family", "translation", "--profile", "paperA",
                          "--tol", "1e-20", "--out", str(out)], capsys)
        doc = json.loads(out.read_text())
        assert code == 1 and not doc["pass"]
        assert doc["pass"] == all(c["pass"] for c in doc["checks"])

    def test_byte_stable(self, tmp_path, capsys):
        paths = [tmp_path / "1.json", tmp_path / "2.json"]
        for p in paths:
            run(["construct", "--family", "radial", "--profile", "paperC", "--samples", "32",
                 "--grid", "3", "--out", str(p)], capsys)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_radial_variable_mismatch(self, capsys):
        code, _, err = run(["construct", "--family", "radial", "--profile", "xi"], capsys)
        assert code == 2 and "offset" in err

    def test_warped(self, capsys):
        code, text, _ = run(["construct", "--family", "warped", "--profile", "paperB", "--n", "3",
                             "--m", "2", "--grid", "2"], capsys)
        assert code == 0 and "rho_consistency" in text

    def test_vanishing_profile(self, capsys):
        code, _, err = run(["construct", "--family", "translation", "--profile", "xi"], capsys)
        assert code == 2 and "error" in err

    def test_bad_signature_length(self, capsys):
        code, _, _ = run(["construct", "--family", "translation", "--profile", "paperA",
                          "--signature", "-+"], capsys)
        assert code == 2

    def test_quadrature_failure(self, capsys):
        code, _, err = run(["construct", "--family", "translation", "--profile", "exp(40*xi^2)",
                            "--window", "-3,3"], capsys)
        assert code == 3 and "quadrature" in err


class TestVerify:
    def test_gaussian(self, capsys):
        code, _, _ = run(["verify", "--family", "radial", "--profile", "1", "--f", "r/2",
                          "--rho", "1"], capsys)
        assert code == 0

    def test_gaussian_wrong_rho(self, tmp_path, capsys):
        out = tmp_path / "v.json"
        code, _, _ = run(["verify", "--family", "radial", "--profile", "1", "--f", "r/2", "--rho", "2",
                          "--out", str(out)], capsys)
        doc = json.loads(out.read_text())
        assert code == 1
        assert all(c["sup"] == pytest.approx(1.0) for c in doc["checks"])

    def test_malformed(self, capsys):
        code, _, err = run(["verify", "--family", "radial", "--profile", "1", "--f", "1+(",
                            "--rho", "1"], capsys)
        assert code == 2 and "offset 3" in err

    def test_missing_rho(self, capsys):
        code, _, _ = run(["verify", "--family", "radial", "--profile", "1", "--f", "r"], capsys)
        assert code == 2

    def test_warped_lambda(self, capsys):
        code, text, _ = run(["verify", "--family", "warped", "--profile", "1", "--f", "1", "--h", "xi",
                             "--rho", "0", "--lambda-f", "0.05", "--grid", "2"], capsys)
        assert code == 1 and "full_tensor" not in text


class TestGallery:
    def test_default(self, capsys):
        code, text, _ = run(["gallery"], capsys)
        assert code == 0 and "all cases pass" in text
        for case in ("A ", "B ", "C "):
            assert case in text

    def test_tolerance_floor(self, capsys):
        code, _, err = run(["gallery", "--tol", "1e-14"], capsys)
        assert code != 0 and "case" in err

    def test_lorentzian(self, tmp_path, capsys):
        out = tmp_path / "g.json"
        code, _, _ = run(["gallery", "--signature", "-++", "--alphas", "0,1,0", "--out", str(out)],
                         capsys)
        doc = json.loads(out.read_text())
        assert code == 0
        assert doc["cases"][0]["signature"] == "-++" and doc["cases"][0]["eps_i0"] == 1.0
