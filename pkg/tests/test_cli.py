import csv
import json

import pytest

from qbc.cli import RunConfig, main
from qbc.image_io import load_image, save_pgm, synth_image


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_compress_constant(tmp_path):
    assert main(["compress", "synth:constant:128:64x64", "--qfs", "8", "-o", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "report.csv")
    assert len(rows) == 2
    assert all(r["br_bits"] == "0" and r["psnr_db"] == "inf" for r in rows)
    assert list(rows[0]) == ["qf", "scheme", "n_tcn", "q_ones", "s_state", "s_bit", "a_bit",
                             "b_e", "br_bits", "psnr_db", "clamped_count"]
    assert load_image(tmp_path / "recon_qf8.pgm").data.shape == (64, 64)
    run = json.loads((tmp_path / "run.json").read_text())
    assert run["qfs"] == [8] and run["command"] == "compress"


def test_compress_checkerboard_schemes(tmp_path):
    assert main(["compress", "synth:checkerboard:8:32x32", "--qfs", "8",
                 "--schemes", "SCMNEQR,EFRQI", "-o", str(tmp_path)]) == 0
    rows = {r["scheme"]: r for r in read_csv(tmp_path / "report.csv")}
    assert int(rows["SCMNEQR"]["br_bits"]) < int(rows["EFRQI"]["br_bits"])
    assert rows["SCMNEQR"]["psnr_db"] == rows["EFRQI"]["psnr_db"]


def test_missing_input(tmp_path, capsys):
    missing = tmp_path / "nope.pgm"
    assert main(["compress", str(missing), "-o", str(tmp_path / "o")]) != 0
    err = capsys.readouterr().err
    assert str(missing) in err and len(err.strip().splitlines()) == 1


def test_bad_config_values(tmp_path, capsys):
    assert main(["compress", "synth:gradient:16x16", "--block", "32", "-o", str(tmp_path)]) == 2
    assert main(["compress", "synth:gradient:16x16", "-q", "0", "-o", str(tmp_path)]) == 2
    assert main(["compress", "synth:gradient:16x16", "--schemes", "NCQI", "-o", str(tmp_path)]) == 2
    assert main(["compress", "synth:plaid:16x16", "-o", str(tmp_path)]) == 2
    assert main(["compress", "-o", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_rdc_outputs(tmp_path):
    assert main(["rdc", "synth:gradient:64x64", "-o", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "rdc.csv")
    assert len(rows) == 14
    assert [r["scheme"] for r in rows] == ["SCMNEQR"] * 7 + ["EFRQI"] * 7
    by = {(r["scheme"], r["qf"]): r for r in rows}
    for qf in ("1", "2", "4", "8", "16", "32", "64"):
        s, e = by["SCMNEQR", qf], by["EFRQI", qf]
        assert int(s["br_bits"]) <= int(e["br_bits"]) and s["psnr_db"] == e["psnr_db"]
    blocks = (tmp_path / "rdc.dat").read_text().split("\n\n\n")
    assert len(blocks) == 2
    assert all(len([ln for ln in b.splitlines() if ln and not ln.startswith("#")]) == 7
               for b in blocks)


def test_rdc_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["synth:checkerboard:2:48x40", "--qfs", "1,8,64"]
    assert main(["rdc", *argv, "-o", str(a)]) == 0
    assert main(["rdc", *argv, "-o", str(b)]) == 0
    for name in ("rdc.csv", "rdc.dat", "recon_qf1.pgm", "recon_qf8.pgm", "recon_qf64.pgm"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input": "synth:gradient:32x32", "qfs": [4, 16],
                               "schemes": ["efrqi"]}))
    out = tmp_path / "env-out"
    monkeypatch.setenv("QBC_OUTPUT_DIR", str(out))
    assert main(["compress", "--config", str(cfg), "--qfs", "2"]) == 0
    rows = read_csv(out / "report.csv")
    assert [(r["qf"], r["scheme"]) for r in rows] == [("2", "EFRQI")]
    cfg.write_text(json.dumps({"input": "x", "colour": True}))
    assert main(["compress", "--config", str(cfg)]) == 2


def test_pgm_file_input_and_units(tmp_path, capsys):
    src = tmp_path / "in.pgm"
    save_pgm(synth_image("gradient", 20, 18), src)
    assert main(["compress", str(src), "--qfs", "4", "--units", "KB", "-o", str(tmp_path / "o")]) == 0
    assert " KB" in capsys.readouterr().out
    assert load_image(tmp_path / "o" / "recon_qf4.pgm").data.shape == (18, 20)


def test_verify_rows(tmp_path):
    assert main(["verify", "synth:gradient:32x32", "--qfs", "8", "--block", "4", "-q", "8",
                 "--verify-block-limit", "3", "-o", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "verify.csv")
    assert len(rows) == 3
    assert list(rows[0]) == ["block_x", "block_y", "n_tcn", "efrqi_fidelity",
                             "scmneqr_channel_fidelity", "scmneqr_idealized_decode_exact",
                             "unrecoverable_positions"]
    for r in rows:
        assert int(r["n_tcn"]) >= 1
        assert float(r["efrqi_fidelity"]) >= 0.9999999999
        assert float(r["scmneqr_channel_fidelity"]) < 1 - 1e-6
        assert r["scmneqr_idealized_decode_exact"] == "true"
        assert int(r["unrecoverable_positions"]) > 0


def test_verify_empty_image(tmp_path):
    assert main(["verify", "synth:constant:128:32x32", "-o", str(tmp_path)]) == 0
    assert read_csv(tmp_path / "verify.csv") == []


def test_verify_reports_clamped_block_as_inexact(tmp_path):
    # q=4 saturates the DC coefficients of a gradient at qf=8
    assert main(["verify", "synth:gradient:32x32", "--qfs", "8", "--block", "4", "-q", "4",
                 "--verify-block-limit", "2", "-o", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "verify.csv")
    assert rows and all(r["scmneqr_idealized_decode_exact"] == "false" for r in rows)
    assert all(float(r["efrqi_fidelity"]) >= 0.9999999999 for r in rows)


def test_verify_all_skipped(tmp_path, monkeypatch):
    import qbc.verify as verify_mod

    monkeypatch.setattr(verify_mod, "MAX_QUBITS", 10)
    assert main(["verify", "synth:gradient:16x16", "--qfs", "1", "-o", str(tmp_path)]) == 4
    assert (tmp_path / "verify_skipped.csv").exists()


def test_run_config_defaults():
    cfg = RunConfig(input="synth:gradient:16x16").validate()
    assert cfg.qfs == [1, 2, 4, 8, 16, 32, 64] and cfg.block == 16 and cfg.q == 8


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "qbc", "compress", "synth:gradient:16x16",
                        "--qfs", "4", "-o", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
