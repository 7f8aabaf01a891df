import subprocess
import sys

import numpy as np
import pytest

from leeisd import formats
from leeisd.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def kv(text):
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def test_version_names_cost_model(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "cost-model=paper-2bit" in out
    _, out, _ = run(capsys, "--cost-model", "lut", "--version")
    assert "cost-model=lut-1bit" in out


def test_bounds(capsys):
    _, out, _ = run(capsys, "bounds", "--n", 150, "--d", 81, "--format", "kv")
    assert kv(out)["gv_dimension"] == "26"
    _, out, _ = run(capsys, "bounds", "--n", 8, "--k1", 8, "--k2", 0, "--format", "kv")
    assert kv(out)["singleton_dL_max"] == "2"
    _, out, _ = run(capsys, "bounds", "--n", 425, "--k1", 55, "--k2", 370, "--format", "kv")
    assert kv(out)["rate"] == "480/850" and kv(out)["rate_reduced"] == "48/85"
    code, _, err = run(capsys, "bounds", "--n", 5)
    assert code == 2 and err.startswith("error:")


def test_table_text_and_csv(capsys):
    code, out, _ = run(capsys, "table", "--n", 150, "--d", 81, "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0].startswith("k1,k2,key_size,security_bits")
    assert len(rows) == 26
    keys = {int(r.split(",")[0]): int(r.split(",")[2]) for r in rows[1:]}
    assert keys[1] == 5198 and keys[25] == 6446
    _, again, _ = run(capsys, "table", "--n", 150, "--d", 81, "--format", "csv", "--threads", 2)
    assert again == out
    _, md, _ = run(capsys, "table", "--n", 150, "--d", 81, "--format", "md")
    assert "| 13 | 26 | 6110 | 134.34 |" in md


def test_table_infeasible_and_target(capsys):
    code, out, _ = run(capsys, "table", "--n", 150, "--d", 301)
    assert code == 0 and "(no rows)" in out and "GV bound supports no positive" in out
    _, out, _ = run(capsys, "table", "--n", 425, "--d", 85, "--target-bits", 128, "--stop-at-target")
    assert "first k1 reaching 128.0 bits: k1=33" in out
    _, out, _ = run(capsys, "table", "--n", 425, "--d", 85, "--dim", 240, "--target-bits", 128, "--stop-at-target")
    assert "k1=55 k2=370 key_size=20350" in out and "20335" in out


def test_estimate_and_optimize(capsys):
    code, out, _ = run(capsys, "estimate", "--field", "F2", "--n", 300, "--k", 26, "--t", 40, "--v", 1, "--ell", 0, "--m1", 13, "--m2", 13)
    d = kv(out)
    assert code == 0 and d["key_size"] == "7124" and d["security_bits"] == "27.81" and d["iter_cost"] == "22637422"
    _, out, _ = run(capsys, "optimize", "--n", 425, "--k1", 55, "--k2", 370, "--t", 42)
    d = kv(out)
    assert float(d["security_bits"]) >= 128 and "20335" in d["note"]
    code, _, err = run(capsys, "estimate", "--n", 10, "--k1", 2, "--k2", 2, "--t", 3, "--v", 3, "--ell", 0, "--m1", 2, "--m2", 2)
    assert code == 3 and err.startswith("error:")
    code, _, err = run(capsys, "estimate", "--n", 10, "--t", 3, "--v", 0, "--ell", 0, "--m1", 2, "--m2", 2)
    assert code == 2 and err.startswith("error:")


def test_gen_and_decode_round_trip(tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    assert run(capsys, "gen-instance", "--n", 12, "--k1", 2, "--k2", 1, "--t", 3, "--seed", 42, "--unique", "--out", inst)[0] == 0
    first = inst.read_bytes()
    run(capsys, "gen-instance", "--n", 12, "--k1", 2, "--k2", 1, "--t", 3, "--seed", 42, "--unique", "--out", inst)
    assert inst.read_bytes() == first
    code, out, _ = run(capsys, "isd-decode", inst, "--seed", 1, "--oracle", "--answer", f"{inst}.answer")
    d = kv(out)
    assert code == 0 and d["status"] == "found" and d["answer_matches"] == "yes" and d["oracle_agrees"] == "yes"
    truth = formats.parse_answer((tmp_path / "inst.txt.answer").read_text())
    assert d["error"] == formats.format_vector(truth)


def test_decode_not_found_and_parse_errors(tmp_path, capsys):
    inst = tmp_path / "inst.txt"
    run(capsys, "gen-instance", "--field", "F2", "--n", 20, "--k", 6, "--t", 4, "--seed", 3, "--out", inst)
    code, out, err = run(capsys, "isd-decode", inst, "--seed", 1, "--v", 0, "--ell", 0, "--m1", 3, "--m2", 3, "--max-iters", 0)
    assert code == 1 and kv(out)["status"] == "not-found" and err.startswith("error:")
    code, _, err = run(capsys, "isd-decode", inst, "--seed", 1, "--v", 1)
    assert code == 2
    lines = inst.read_text().splitlines()
    lines[3] = "0 1 2"
    bad = tmp_path / "bad.txt"
    bad.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "isd-decode", bad, "--seed", 1)
    assert code == 4 and err.startswith("error: line 4:")
    code, _, err = run(capsys, "isd-decode", tmp_path / "missing.txt", "--seed", 1)
    assert code == 4 and err.startswith("error: cannot read")
    code, _, err = run(capsys, "isd-decode", inst, "--seed", 1, "--v", 5, "--ell", 0, "--m1", 3, "--m2", 3)
    assert code == 3


@pytest.mark.parametrize("system,msg", [("mceliece", "1 2 0 1"), ("niederreiter", "0 0 3 0 0 0 0 0 0 0 1 0")])
def test_crypto_round_trip(tmp_path, capsys, system, msg):
    keys = tmp_path / "keys"
    code, _, _ = run(capsys, "keygen", "--system", system, "--n", 12, "--k1", 2, "--k2", 2, "--t", 2, "--seed", 7, "--out-dir", keys)
    assert code == 0
    priv = (keys / f"{system}.priv").read_bytes()
    run(capsys, "keygen", "--system", system, "--n", 12, "--k1", 2, "--k2", 2, "--t", 2, "--seed", 7, "--out-dir", keys)
    assert (keys / f"{system}.priv").read_bytes() == priv
    (tmp_path / "msg").write_text(msg + "\n")
    ct = tmp_path / "ct"
    assert run(capsys, "encrypt", "--pubkey", keys / f"{system}.pub", "--msg", tmp_path / "msg", "--seed", 7, "--out", ct)[0] == 0
    code, out, _ = run(capsys, "decrypt", "--privkey", keys / f"{system}.priv", "--ct", ct)
    assert code == 0 and out.strip() == msg
    code, out, _ = run(capsys, "attack", "--privkey", keys / f"{system}.priv", "--seed", 1)
    assert code == 0 and kv(out)["matches_planted_error"] == "yes"


def test_decryption_failure_exit_code(tmp_path, capsys):
    keys = tmp_path / "keys"
    run(capsys, "keygen", "--system", "niederreiter", "--n", 10, "--k1", 2, "--k2", 2, "--t", 1, "--seed", 2, "--out-dir", keys)
    kp = formats.parse_key((keys / "niederreiter.priv").read_text())
    from leeisd.errors import DecryptionFailure
    from itertools import product

    for cand in product(range(4), repeat=8):
        try:
            kp.private.code.decode_syndrome(np.asarray(kp.private.s) @ np.array(cand) % 4)
        except DecryptionFailure:
            break
    (tmp_path / "ct").write_text(formats.format_vector(cand) + "\n")
    code, _, err = run(capsys, "decrypt", "--privkey", keys / "niederreiter.priv", "--ct", tmp_path / "ct")
    assert code == 5 and err.startswith("error: decryption failure")


def test_usage_error_first_line(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["table", "--n", "5"])
    assert exc.value.code == 2
    assert capsys.readouterr().err.startswith("error:")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "leeisd", "--version"], capture_output=True, text=True, check=True)
    assert out.stdout.startswith("leeisd ")
