import json

import pytest

from rlogconvex.cli import run


def test_analyze_motzkin(capsys):
    assert run(["analyze", "--seq", "motzkin", "-K", "12"]) == 0
    out = capsys.readouterr().out
    assert "alpha = 2" in out and "c = 3/2" in out and "r = 6" in out


def test_expand_h3(capsys):
    assert run(["expand", "--seq", "h3", "-K", "6", "--decimal", "4"]) == 0
    out = capsys.readouterr().out
    assert "3/4*n^(3)" in out and "25/12*n^(1)" in out and "28/9*n^(0)" in out
    assert "[~0.75]" in out


def test_certify_verify_roundtrip(tmp_path, capsys):
    cert = tmp_path / "h3.cert"
    assert run(["certify", "--seq", "h3", "-r", "2", "-o", str(cert)]) == 0
    data = json.loads(cert.read_text())
    assert data["N"] <= 30
    assert run(["verify-cert", "--seq", "h3", "--cert", str(cert)]) == 0
    assert "Verified" in capsys.readouterr().out


def test_tampered_certificate_exit_1(tmp_path, capsys):
    cert = tmp_path / "h3.cert"
    run(["certify", "--seq", "h3", "-r", "2", "-o", str(cert)])
    data = json.loads(cert.read_text())
    data["thresholds"]["N2"] -= 1
    data["N"] = max(data["thresholds"].values())
    cert.write_text(json.dumps(data))
    assert run(["verify-cert", "--seq", "h3", "--cert", str(cert)]) == 1
    assert "Rejected" in capsys.readouterr().err


def test_scan_motzkin(capsys):
    assert run(["scan", "--seq", "motzkin", "-r", "2", "--upto", "300"]) == 0
    out = capsys.readouterr().out
    assert "(n <= 300): 6" in out and "2  5  -5080" in out


def test_catalog_roundtrip_parallel(tmp_path, capsys):
    out = tmp_path / "certs"
    assert run(["certify", "--seq", "all", "-r", "1", "-o", str(out), "--jobs", "2"]) == 0
    assert run(["verify-cert", "--seq", "all", "--cert", str(out)]) == 0
    assert capsys.readouterr().out.count("Verified") == 6


def test_rec_file_json(tmp_path, capsys):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"order": 1, "coefficients": ["-(4*n+2)", "n+2"],
                                "initial": {"0": "1"}}))
    assert run(["certify", "--rec", str(path)]) == 0
    assert '"N"' in capsys.readouterr().out


def test_exit_unsupported(tmp_path, capsys):
    path = tmp_path / "fib.rec"
    path.write_text("a(n+2) - a(n+1) - a(n) = 0\na(0) = 0\na(1) = 1\n")
    assert run(["analyze", "--rec", str(path)]) == 2
    assert "IrrationalOrComplexBranch" in capsys.readouterr().err


def test_exit_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.rec"
    path.write_text("a(n+2) - * a(n)\n")
    assert run(["expand", "--rec", str(path)]) == 3
    assert run(["expand", "--seq", "nosuch"]) == 3
    assert run(["expand", "--rec", str(tmp_path / "missing")]) == 3


def test_exit_search_exhausted(capsys):
    assert run(["certify", "--seq", "motzkin", "-r", "2", "--n-cap", "50"]) == 4


def test_exit_not_log_convex(tmp_path, capsys):
    path = tmp_path / "inv_fact.rec"
    path.write_text("(n+1)*a(n+1) - a(n) = 0\na(0) = 1\n")
    assert run(["certify", "--rec", str(path)]) == 1
    assert "NotAsymptoticallyLogConvex" in capsys.readouterr().err


def test_missing_initial_values(tmp_path):
    path = tmp_path / "noinit.rec"
    path.write_text("(n+2)*a(n+1) - (4*n+2)*a(n) = 0\n")
    assert run(["scan", "--rec", str(path)]) == 3


def test_requires_source():
    with pytest.raises(SystemExit):
        run(["analyze"])
