"""CLI behavior: subcommands, formats, exit codes, determinism."""

import csv
import io
import json

import pytest

from ellmom.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_moment_mixed_with_exact_tag(capsys):
    code, out, _ = run_cli(capsys, "moment", "--product", "K Kc", "-n", "1",
                           "--digits", "25")
    assert code == 0
    assert "1/16*pi^3" in out
    assert "closed_form=1.93789229251874" in out


def test_moment_zeta3_tag(capsys):
    code, out, _ = run_cli(capsys, "moment", "--product", "Kc^2", "-n", "1",
                           "--digits", "25")
    assert code == 0
    assert "7/4*zeta(3)" in out


def test_moment_no_closed_form_is_quadrature_only(capsys):
    code, out, _ = run_cli(capsys, "moment", "--product", "E^2", "-n", "0",
                           "--digits", "20")
    assert code == 0
    assert "closed_form=None" in out and "quadrature=2.0279891" in out


def test_moment_divergent_exits_nonzero(capsys):
    code, _, err = run_cli(capsys, "moment", "--product", "K Kc", "-n", "-1",
                           "--digits", "20")
    assert code == 1
    assert "error" in err


def test_moment_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "moment", "--product", "K Kc", "-n", "1",
                           "--digits", "20", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["product"] == "K Kc"


def test_verify_suite_exit_zero(capsys):
    code, out, err = run_cli(capsys, "verify", "--suite", "k-minus-e",
                             "--digits", "30", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert all(r["passed"] for r in rows)


def test_verify_corrupted_catalog_exit_one(capsys, tmp_path, monkeypatch):
    bad = [{"id": "broken", "lhs": ["rat", 1, 2], "rhs": ["rat", 1, 3],
            "status": "theorem", "ref": "fixture", "tol_digits": 30,
            "suites": ["fixture"]}]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    monkeypatch.setenv("ELLMOM_CATALOG", str(path))
    code, out, _ = run_cli(capsys, "verify", "--suite", "fixture", "--digits", "20",
                           "--format", "json")
    assert code == 1


def test_verify_csv_format(capsys):
    code, out, _ = run_cli(capsys, "verify", "--suite", "g4-ksqrt2",
                           "--digits", "25", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["id"] == "g4-ksqrt2" and rows[0]["passed"] == "True"


def test_cli_determinism(capsys):
    _, out1, _ = run_cli(capsys, "moment", "--product", "E Kc", "-n", "3",
                         "--digits", "30")
    _, out2, _ = run_cli(capsys, "moment", "--product", "E Kc", "-n", "3",
                         "--digits", "30")
    assert out1 == out2


def test_hyper_command(capsys):
    code, out, _ = run_cli(capsys, "hyper", "--upper", "1/2,1/2", "--lower", "1",
                           "--z", "1/4", "--digits", "25")
    assert code == 0
    assert "value=1.0731820071" in out


def test_fourier_command(capsys):
    code, out, _ = run_cli(capsys, "fourier", "--kind", "K", "-n", "0",
                           "--digits", "25")
    assert code == 0
    assert "harmonic=1" in out and "3.14159265" in out


def test_pslq_command(capsys, tmp_path):
    with open(tmp_path / "vals.txt", "w") as fh:
        fh.write("# golden ratio relation\n")
        fh.write("1.0\n")
        fh.write("1.61803398874989484820458683436563811772030917980576286213545\n")
        fh.write("2.61803398874989484820458683436563811772030917980576286213545\n")
    code, out, _ = run_cli(capsys, "pslq", str(tmp_path / "vals.txt"),
                           "--max-coeff-bits", "8", "--digits", "65")
    assert code == 0
    assert "[1, 1, -1]" in out or "[-1, -1, 1]" in out


def test_pslq_no_relation(capsys, tmp_path):
    with open(tmp_path / "vals.txt", "w") as fh:
        fh.write("1.0\n3.14159265358979323846264338327950288419716939937510582097494\n")
    code, _, err = run_cli(capsys, "pslq", str(tmp_path / "vals.txt"),
                           "--max-coeff-bits", "6", "--digits", "45")
    assert code == 1
    assert "no relation" in err


def test_zudilin3d_preset(capsys):
    code, out, _ = run_cli(capsys, "zudilin3d", "--kernel", "kc2",
                           "--target", "1e-5")
    assert code == 0
    row = out.strip()
    assert "oracle_1d" in row and "absdiff_vs_8x" in row


def test_conjectures_command(capsys):
    code, out, _ = run_cli(capsys, "conjectures", "--digits", "30",
                           "--format", "json")
    assert code == 0
    rows = json.loads(out)
    ids = {r["id"] for r in rows}
    assert {"conj1", "conj2", "conj2-sum-form"} <= ids


def test_usage_error_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--format", "yaml"])
    assert exc.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
