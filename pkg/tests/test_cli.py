import json
import os
import subprocess
import sys

import pytest

from egs.cli import main, parse_int, parse_t


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parsers():
    assert parse_int("1e5") == parse_int("10^5") == 10**5
    assert parse_int("3*10^5") == 300000
    assert parse_t("N/3", 100) == 33
    assert parse_t("ceil(N/3)", 100) == 34
    assert parse_t("2N/7", 100) == 28
    assert parse_t("N/3+5", 100) == 38
    assert parse_t("41", 100) == 41


def test_t_exact_and_verify(tmp_path, capsys):
    code, out, err = run(["t-exact", "--n", "9", "--cert-dir", str(tmp_path)], capsys)
    assert code == 0 and "t(9) = 3" in out
    assert err.startswith("# invocation: egs t-exact")
    cert = tmp_path / "t_exact_N9.cert"
    assert cert.exists()
    code, out, _ = run(["verify", str(cert)], capsys)
    assert code == 0 and "accepted" in out
    lines = cert.read_text().splitlines()
    lines = [("F 9 3" if l == "F 4 3" else l) for l in lines]
    bad = tmp_path / "bad.cert"
    bad.write_text("\n".join(lines) + "\n")
    code, _, _ = run(["verify", str(bad)], capsys)
    assert code == 1


def test_malformed_certificate(tmp_path, capsys):
    bad = tmp_path / "junk.cert"
    bad.write_text("not a certificate\n")
    code, out, _ = run(["verify", str(bad), "--format", "json"], capsys)
    assert code == 2
    assert json.loads(out)["status"] == 2


def test_unknown_flag(capsys):
    assert main(["t-exact", "--n", "9", "--bogus"]) == 2
    assert main([]) == 2


def test_resource_limit_exit_code(tmp_path):
    env = dict(os.environ, EGS_SIEVE_LIMIT="1000")
    p = subprocess.run([sys.executable, "-m", "egs.cli", "greedy", "--n", "100000", "--t", "N/3", "--format", "json",
                        "--cert-dir", str(tmp_path)], capture_output=True, text=True, env=env)
    assert p.returncode == 3
    assert json.loads(p.stdout)["error"] == "resource"


def test_greedy_and_lp(tmp_path, capsys):
    code, out, _ = run(["greedy", "--n", "2000", "--t", "620", "--format", "json", "--cert-dir", str(tmp_path)], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(["lp-upper", "--n", "155", "--format", "json", "--cert-dir", str(tmp_path)], capsys)
    d = json.loads(out)
    assert code == 0 and d["t_upper"] == 46 and d["verified"]
    code, _, _ = run(["verify-dual", d["certificate"]], capsys)
    assert code == 0
    code, _, _ = run(["verify-dual", d["certificate"], "--format", "json"], capsys)
    assert code == 0


def test_constants_json(capsys):
    code, out, _ = run(["constants", "--format", "json", "--c0-only"], capsys)
    assert code == 0
    data = json.loads(out)
    c0 = data["constants"][0]
    assert c0["name"] == "c0"
    assert c0["lo_float"] <= 0.30441901 <= c0["hi_float"] + 1e-8
    assert set(c0) >= {"lo", "hi", "digits"}


def test_table_csv_stable(capsys):
    runs = []
    for threads in ("1", "4", "4"):
        code, out, _ = run(["table", "--figure", "small-n", "--lo", "1", "--hi", "40", "--format", "csv",
                            "--threads", threads], capsys)
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1] == runs[2]
    assert runs[0].splitlines()[0].startswith("N,")


def test_tne_table(capsys):
    code, out, _ = run(["tne-scan", "--lo", "80", "--hi", "120", "--format", "csv"], capsys)
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 42 and all(r.endswith(",1,1") for r in rows[1:])


def test_kb_and_quarter(capsys):
    code, out, _ = run(["kb-check"], capsys)
    assert code == 0 and "0.4" in out
    code, out, _ = run(["quarter-cert", "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 0 and d["threshold"] == 1328148 and d["eps"] == "218038591/4458050224128"


def test_repair_verify_ledger_json(tmp_path, capsys):
    dump = tmp_path / "ledger.json"
    code, out, _ = run(["repair-verify", "--range", "1e11", "5e11", "--ledger-json", str(dump)], capsys)
    assert code == 0 and "OK" in out
    data = json.loads(dump.read_text())
    first = data[0] if isinstance(data, list) else data
    assert "deltas" in first and "alphas" in first
    code, _, _ = run(["repair-verify", "--range", "1e6", "1e6"], capsys)
    assert code == 1


def test_rearrange_and_t23(capsys):
    code, _, _ = run(["rearrange-verify", "--table", "three_sixteenths"], capsys)
    assert code == 0
    code, out, _ = run(["t23", "--n", "26244", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["t23"] == 6561


def test_ip_subcommand(tmp_path, capsys):
    code, out, _ = run(["ip", "--n", "155", "--t", "46", "--format", "json", "--cert-dir", str(tmp_path)], capsys)
    d = json.loads(out)
    assert code == 0 and d["status"] == 0 and d["ip_status"] == "optimal"
    assert d["lower"] == d["upper"] == 154 and d["verified"]
    code, out, _ = run(["ip", "--n", "155", "--t", "45", "--target", "155", "--cert-dir", str(tmp_path)], capsys)
    assert code == 0 and "M(155,45) >= 155" in out
