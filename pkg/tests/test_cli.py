"""Command-line surface: exit codes, file outputs, reproducibility."""

import json
import subprocess
import sys

from zczseq import cli, format_gbf_text
from zczseq.cli import EXIT_CERT_FAIL, EXIT_OK, EXIT_USAGE


def run_cli(*argv):
    return cli.main(list(argv))


def test_construct_example_and_verify(tmp_path, capsys):
    out = tmp_path / "fam"
    assert run_cli("construct", "--example1", "-o", str(out)) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "sets: 2  sequences/set: 8  length: 256" in stdout
    assert "per-set rho (binary): 1 (optimal)" in stdout
    assert "union: (16,7,256)  rho: 7/8 (near-optimal)" in stdout
    assert (out / "manifest.json").exists()
    assert (out / "0" / "0.seq").exists() and (out / "1" / "7.seq").exists()

    assert run_cli("verify", str(out)) == EXIT_OK
    report = json.loads((out / "certificates.json").read_text())
    assert report["pass"]
    assert [c["pass"] for c in report["sets"]] == [True, True]
    assert report["union"]["parameters"] == {"K": 16, "Z": 7, "L": 256, "q": 2}


def test_construct_system_model_topology(tmp_path, capsys):
    out = tmp_path / "fam"
    assert run_cli("construct", "-q", "2", "-m", "4", "-k", "2", "-s", "2",
                   "-o", str(out)) == EXIT_OK
    stdout = capsys.readouterr().out
    assert "sets: 4  sequences/set: 8  length: 256" in stdout
    assert "inter-set zone Zc: 3" in stdout


def test_construct_constraint_violation(tmp_path, capsys):
    code = run_cli("construct", "-q", "2", "-m", "3", "-k", "2", "-s", "3",
                   "-o", str(tmp_path / "x"))
    assert code == EXIT_USAGE
    assert "0 <= s <= k <= m-2" in capsys.readouterr().err


def test_construct_rebuild_from_manifest_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli("construct", "--example1", "-o", str(a), "--no-certify") == EXIT_OK
    params = json.loads((a / "manifest.json").read_text())["params"]
    f_file = tmp_path / "f.gbf"
    from zczseq import ConstructionParams

    f_file.write_text(format_gbf_text(ConstructionParams.from_json_dict(params).f))
    assert run_cli(
        "construct", "-q", str(params["q"]), "-m", str(params["m"]),
        "-k", str(params["k"]), "-s", str(params["s"]),
        "--J", ",".join(map(str, params["J"])),
        "--pi", ",".join(map(str, params["pi"])),
        "--f", str(f_file),
        "--h-c", ",".join(map(str, params["h"]["c"])),
        "--h-e", ",".join(map(str, params["h"]["e"])),
        "-o", str(b), "--no-certify",
    ) == EXIT_OK
    for rel in ("0/0.seq", "0/7.seq", "1/0.seq", "1/7.seq"):
        assert (a / rel).read_bytes() == (b / rel).read_bytes()


def test_construct_verify_round_trip_over_grid(tmp_path):
    # every default build up to m=4 certifies against its own declared zones
    case = 0
    for m in (3, 4):
        for k in range(1, m - 1):
            for s in range(0, k + 1):
                out = tmp_path / f"fam{case}"
                assert run_cli("construct", "-q", "2", "-m", str(m), "-k", str(k),
                               "-s", str(s), "-o", str(out), "--no-certify") == EXIT_OK
                assert run_cli("verify", str(out)) == EXIT_OK
                case += 1
    assert case == 7


def test_verify_detects_corruption(tmp_path, capsys):
    out = tmp_path / "fam"
    run_cli("construct", "--example1", "-o", str(out), "--no-certify")
    target = out / "0" / "0.seq"
    lines = target.read_text().splitlines()
    lines[4] = "1" if lines[4] == "0" else "0"  # flip the first chip
    target.write_text("\n".join(lines) + "\n")
    assert run_cli("verify", str(out)) == EXIT_CERT_FAIL
    assert "witness" in capsys.readouterr().out
    report = json.loads((out / "certificates.json").read_text())
    assert not report["pass"]
    assert report["sets"][0]["witnesses"]


def test_verify_claim_overrides(tmp_path):
    out = tmp_path / "fam"
    run_cli("construct", "--example1", "-o", str(out), "--no-certify")
    assert run_cli("verify", str(out), "--zcz", "16", "--zccz", "7") == EXIT_OK
    assert run_cli("verify", str(out), "--zccz", "8") == EXIT_CERT_FAIL
    assert run_cli("verify", str(out), "--zcz", "17") == EXIT_CERT_FAIL


def test_verify_deep(tmp_path, capsys):
    out = tmp_path / "fam"
    run_cli("construct", "--example1", "-o", str(out), "--no-certify")
    assert run_cli("verify", str(out), "--deep") == EXIT_OK
    stdout = capsys.readouterr().out
    assert "seed-cancellation PASS" in stdout
    assert "chunk-decomposition PASS" in stdout
    report = json.loads((out / "certificates.json").read_text())
    assert report["deep"]["chunk_decomposition"]["checked"] == 2 * 2 * 8 * 8 * 17


def test_verify_missing_directory(tmp_path, capsys):
    assert run_cli("verify", str(tmp_path / "nope")) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_spectrum_outputs_and_cap(tmp_path, capsys):
    out = tmp_path / "fam"
    run_cli("construct", "--example1", "-o", str(out), "--no-certify")
    csv_path = tmp_path / "spec.csv"
    assert run_cli("spectrum", str(out), "-o", str(csv_path)) == EXIT_OK
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "pair_i,pair_j,shift,re,im"
    assert len(lines) == 1 + 16 * 16 * 256
    # in-zone rows are all zero: shift 1..16 of the (0,0) pair
    for ln in lines[2:18]:
        assert ln.endswith(",0,0")
    assert run_cli("spectrum", str(out), "-o", str(csv_path), "--max-cells", "10") == EXIT_USAGE
    assert "cap" in capsys.readouterr().err


def test_simulate_round_trip_and_determinism(tmp_path):
    cfg = {
        "construction": {"q": 2, "m": 4, "k": 2, "s": 2},
        "clusters": 4,
        "users_per_cluster": 8,
        "max_delay_chips": 3,
        "snr_db": [0.0],
        "bits_per_iteration": 1000,
        "iterations": 3,
        "seed": 99,
    }
    cfg_path = tmp_path / "sim.json"
    cfg_path.write_text(json.dumps(cfg))
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert run_cli("simulate", str(cfg_path), "-o", str(out1)) == EXIT_OK
    assert run_cli("simulate", str(cfg_path), "-o", str(out2)) == EXIT_OK
    assert (out1 / "ber.csv").read_bytes() == (out2 / "ber.csv").read_bytes()
    lines = (out1 / "ber.csv").read_text().strip().splitlines()
    assert lines[0] == "snr_db,user_id,ber,ci_halfwidth,bits"
    assert len(lines) == 1 + 4  # one observed user per cluster, one SNR point
    manifest = json.loads((out1 / "manifest.json").read_text())
    assert manifest["command"] == "simulate"
    assert set(manifest["outputs"]) == {"ber.csv", "summary.json"}


def test_simulate_noiseless_and_family_dir(tmp_path):
    fam_dir = tmp_path / "fam"
    run_cli("construct", "-q", "2", "-m", "4", "-k", "2", "-s", "2",
            "-o", str(fam_dir), "--no-certify")
    cfg = {
        "family_dir": str(fam_dir),
        "clusters": 4,
        "users_per_cluster": 8,
        "max_delay_chips": 3,
        "noiseless": True,
        "bits_per_iteration": 1000,
        "iterations": 2,
        "seed": 7,
    }
    cfg_path = tmp_path / "sim.json"
    cfg_path.write_text(json.dumps(cfg))
    out = tmp_path / "run"
    assert run_cli("simulate", str(cfg_path), "-o", str(out)) == EXIT_OK
    for ln in (out / "ber.csv").read_text().strip().splitlines()[1:]:
        assert ln.split(",")[2] == "0.0"
    summary = json.loads((out / "summary.json").read_text())
    assert all(p["errors"] == 0 for c in summary["curves"] for p in c["points"])


def test_simulate_config_schema_violation(tmp_path, capsys):
    cfg_path = tmp_path / "sim.json"
    cfg_path.write_text(json.dumps({"clusters": 1}))
    assert run_cli("simulate", str(cfg_path), "-o", str(tmp_path / "o")) == EXIT_USAGE
    cfg_path.write_text("{not json")
    assert run_cli("simulate", str(cfg_path), "-o", str(tmp_path / "o")) == EXIT_USAGE


def test_usage_errors_exit_one(capsys):
    assert run_cli("construct", "-q", "2", "-m", "4") == EXIT_USAGE
    assert "error" in capsys.readouterr().err.lower()
    assert run_cli("bogus") == EXIT_USAGE


def test_console_entry_point_smoke(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "zczseq.cli", "construct", "--example1",
         "-o", str(tmp_path / "fam"), "--no-certify"],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert "wrote:" in result.stdout
