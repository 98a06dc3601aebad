"""Command line behavior: output shapes, exit codes, environment handling."""

import json
import os
import subprocess
import sys

import pytest

from modbetti.cli import main
from modbetti.instances import generate, spec_to_json_dict


def _write_instance(tmp_path, family="curve-ci23-g4", name="inst.json", **kw):
    path = tmp_path / name
    rc = main(["gen", "--family", family, "-o", str(path), *map(str, kw.get("extra", ()))])
    assert rc == 0
    return path


def _degenerate_instance(tmp_path):
    doc = spec_to_json_dict(generate("curve-ci23-g4", seed=1))
    quad = doc["payload"]["generators"][0]
    doc["payload"]["generators"][1] = {
        "degree": 3,
        "terms": [
            {"c": t["c"], "e": [t["e"][0] + 1] + t["e"][1:]} for t in quad["terms"]
        ],
    }
    path = tmp_path / "degen.json"
    path.write_text(json.dumps(doc))
    return path


# ---------------------------------------------------------------------------
# gen

def test_gen_writes_canonical_json(tmp_path, capsys):
    path = tmp_path / "rnc4.json"
    assert main(["gen", "--family", "rnc", "--genus", "4", "-o", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["family"] == "rnc" and doc["genus"] == 4
    assert main(["gen", "--family", "rnc", "--genus", "4"]) == 0
    assert capsys.readouterr().out == path.read_text()


def test_gen_rejects_unknown_family(capsys):
    assert main(["gen", "--family", "nope"]) == 2
    assert "unknown family" in capsys.readouterr().err


def test_gen_rejects_bad_genus(capsys):
    assert main(["gen", "--family", "tandev", "--genus", "5"]) == 2
    assert "supports genus" in capsys.readouterr().err


def test_gen_seed_changes_output(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    main(["gen", "--family", "curve-ci23-g4", "--seed", "1", "-o", str(a)])
    main(["gen", "--family", "curve-ci23-g4", "--seed", "2", "-o", str(b)])
    assert a.read_text() != b.read_text()


# ---------------------------------------------------------------------------
# betti

def test_betti_grid_output(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["betti", str(inst)]) == 0
    out = capsys.readouterr().out
    assert "total:" in out
    assert "hilbert  PASS" in out and "duality  PASS" in out


def test_betti_json_output(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["betti", str(inst), "--format", "json", "--qmax", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"]["hilbert"] == "PASS"
    assert doc["instance"]["family"] == "curve-ci23-g4"
    assert doc["kappa"][0][0] == 1


def test_betti_output_file(tmp_path):
    inst = _write_instance(tmp_path)
    out = tmp_path / "table.txt"
    assert main(["betti", str(inst), "-o", str(out)]) == 0
    assert "total:" in out.read_text()


def test_betti_skips_duality_when_range_is_thin(tmp_path, capsys):
    inst = _write_instance(tmp_path)
    assert main(["betti", str(inst), "--qmax", "1"]) == 0
    assert "duality  SKIP" in capsys.readouterr().out


def test_betti_exit_codes_for_bad_input(tmp_path, capsys):
    missing = main(["betti", str(tmp_path / "none.json")])
    assert missing == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["betti", str(bad)]) == 2
    assert "instance json" in capsys.readouterr().err


def test_betti_degenerate_payload_fails_checks(tmp_path, capsys):
    inst = _degenerate_instance(tmp_path)
    assert main(["betti", str(inst)]) == 1
    assert "FAIL hilbert" in capsys.readouterr().err


def test_betti_tables_are_byte_stable_across_runs(tmp_path, capsys):
    # regenerating the instance and recomputing must reproduce the table
    # byte for byte; only the timing fields may move
    first = _write_instance(tmp_path, name="a.json")
    second = _write_instance(tmp_path, name="b.json")
    assert first.read_text() == second.read_text()
    docs = []
    for inst in (first, second):
        assert main(["betti", str(inst), "--format", "json"]) == 0
        docs.append(json.loads(capsys.readouterr().out))
    for doc in docs:
        doc["meta"].pop("seconds")
        for cell in doc["cells"]:
            cell.pop("seconds")
    assert docs[0] == docs[1]


# ---------------------------------------------------------------------------
# verify-green

def test_verify_green_pass_and_json(tmp_path, capsys):
    inst = _write_instance(tmp_path, family="tandev", extra=("--genus", "6"))
    rc = main(["verify-green", str(inst)])
    assert rc == 0
    assert "kappa = 0 -> PASS" in capsys.readouterr().out
    assert main(["verify-green", str(inst), "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["kappa"] == 0 and doc["passed"] is True


def test_verify_green_rejects_odd_models(tmp_path, capsys):
    inst = _write_instance(tmp_path, family="rnc", name="rnc.json", extra=("--genus", "5"))
    assert main(["verify-green", str(inst)]) == 2
    assert "even-genus" in capsys.readouterr().err


def test_verify_green_degenerate_payload(tmp_path, capsys):
    inst = _degenerate_instance(tmp_path)
    assert main(["verify-green", str(inst)]) == 1
    assert "FAIL hilbert" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# process-level behavior

def test_console_entry_point_help():
    out = subprocess.run(
        [sys.executable, "-m", "modbetti", "--help"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert "verify-green" in out.stdout


def test_usage_error_exits_two():
    out = subprocess.run(
        [sys.executable, "-m", "modbetti", "frobnicate"], capture_output=True, text=True
    )
    assert out.returncode == 2


def test_prime_env_override(tmp_path):
    env = dict(os.environ, MODBETTI_PRIME="65537")
    path = tmp_path / "env.json"
    out = subprocess.run(
        [sys.executable, "-m", "modbetti", "gen", "--family", "rnc",
         "--genus", "3", "-o", str(path)],
        capture_output=True,
        text=True,
        env=env,
    )
    assert out.returncode == 0
    assert json.loads(path.read_text())["prime"] == 65537
    env["MODBETTI_PRIME"] = "not-a-number"
    bad = subprocess.run(
        [sys.executable, "-m", "modbetti", "gen", "--family", "rnc", "--genus", "3"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert bad.returncode != 0
    assert "MODBETTI_PRIME" in bad.stderr


def test_threads_flag_pins_blas_pool(tmp_path):
    inst = tmp_path / "t.json"
    subprocess.run(
        [sys.executable, "-m", "modbetti", "gen", "--family", "rnc",
         "--genus", "2", "-o", str(inst)],
        check=True,
    )
    probe = (
        "import os, sys; sys.argv = ['modbetti', '--threads', '1', 'betti', %r]; "
        "from modbetti.cli import main; rc = main(sys.argv[1:]); "
        "print(os.environ['OPENBLAS_NUM_THREADS']); sys.exit(rc)"
    ) % str(inst)
    out = subprocess.run(
        [sys.executable, "-c", probe], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert out.stdout.splitlines()[-1] == "1"


@pytest.mark.slow
def test_selftest_command():
    out = subprocess.run(
        [sys.executable, "-m", "modbetti", "selftest"], capture_output=True, text=True
    )
    assert out.returncode == 0
    assert "selftest: ok" in out.stdout
