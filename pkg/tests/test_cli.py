import json
import subprocess
import sys

import pytest

from quam.cli import main

from conftest import SAMPLE_STRINGS, STORED


@pytest.fixture
def pattern_file(tmp_path):
    path = tmp_path / "sample.txt"
    path.write_text("# four patterns\n" + "\n".join(SAMPLE_STRINGS) + "\n")
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def amplitudes(doc):
    return [complex(re, im) for re, im in doc["amplitudes"]]


def test_encode_reduced(capsys, pattern_file):
    code, out, _ = run(capsys, "encode", pattern_file, "--method", "pt-reduced")
    assert code == 0
    amps = amplitudes(json.loads(out))
    for i, a in enumerate(amps):
        assert abs(a - (0.5 if i in STORED else 0)) < 1e-12


def test_encode_methods_agree(capsys, pattern_file):
    dumps = {}
    for method in ("vm", "pt", "pt-reduced"):
        code, out, _ = run(capsys, "encode", pattern_file, "--method", method)
        assert code == 0
        dumps[method] = amplitudes(json.loads(out))
    for a, b in zip(dumps["vm"], dumps["pt"]):
        assert abs(a - b) < 1e-10


def test_encode_artifacts(capsys, pattern_file, tmp_path):
    circ = tmp_path / "c.txt"
    code, _, err = run(
        capsys, "encode", pattern_file, "--emit-circuit", circ, "--explain-plan",
        "--out", tmp_path / "state.json",
    )
    assert code == 0
    assert circ.read_text().startswith("# width 5")
    assert "cluster on qubit 2" in err
    assert json.loads((tmp_path / "state.json").read_text())["k"] == 4


def test_encode_bad_inputs(capsys, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert run(capsys, "encode", empty)[0] == 2
    assert run(capsys, "encode", tmp_path / "missing.txt")[0] == 2
    three = tmp_path / "three.txt"
    three.write_text("001\n010\n100\n")
    assert run(capsys, "encode", three, "--method", "pt")[0] == 2
    assert run(capsys, "encode", three, "--method", "vm")[0] == 0


def test_retrieve_vm_and_pt(capsys, pattern_file):
    code, out, err = run(capsys, "retrieve", pattern_file, "--method", "vm", "--query", "0110", "--trace")
    doc = json.loads(out)
    assert code == 0 and "outcome 0110" in err
    assert doc["rotations"] == 3 and doc["outcome"]["pattern"] == "0110"
    assert len(doc["snapshots"]) == 4
    code, out, _ = run(capsys, "retrieve", pattern_file, "--method", "pt", "--query", "0110")
    doc = json.loads(out)
    assert doc["rotations"] == 1 and doc["outcome"]["pattern"] == "0110"
    assert "snapshots" not in doc


def test_retrieve_with_map(capsys, pattern_file, tmp_path):
    amap = tmp_path / "map.txt"
    amap.write_text("00 -> 1111\n01 -> 1001\n10 -> 0110\n11 -> 0011\n")
    code, out, _ = run(
        capsys, "retrieve", pattern_file, "--method", "pt", "--map", amap, "--query", "0110", "--trace"
    )
    doc = json.loads(out)
    assert code == 0
    assert [round(re, 12) for re, _ in doc["address_states"][0]] == [0.5, 0.5, -0.5, 0.5]


def test_retrieve_no_solution(capsys, pattern_file):
    code, _, err = run(capsys, "retrieve", pattern_file, "--query", "0000")
    assert code == 3
    assert "no 0-similar stored pattern" in err


def test_retrieve_wide_epsilon(capsys, pattern_file):
    code, out, _ = run(capsys, "retrieve", pattern_file, "--query", "0000", "--epsilon", "9")
    assert code == 0
    assert len(json.loads(out)["marked"]) == 4


def test_retrieve_bad_query(capsys, pattern_file):
    assert run(capsys, "retrieve", pattern_file, "--query", "011")[0] == 2


def test_compare_formats(capsys, pattern_file):
    code, out_json, _ = run(capsys, "compare", pattern_file, "--query", "0110")
    code2, out_csv, _ = run(capsys, "compare", pattern_file, "--query", "0110", "--format", "csv")
    assert code == code2 == 0
    doc = json.loads(out_json)
    vm = doc["reports"][0]
    assert (vm["pred_cu"], vm["pred_ccx"], vm["pred_mcx"], vm["act_rotations"]) == (3, 16, 6, 3)
    assert out_csv.splitlines()[1].startswith("VM,10,")


def test_out_dir_env(capsys, pattern_file, tmp_path, monkeypatch):
    monkeypatch.setenv("QUAM_OUT_DIR", str(tmp_path / "out"))
    code, out, _ = run(capsys, "retrieve", pattern_file, "--query", "0110")
    assert code == 0
    assert out.strip() == "outcome 0110"
    assert (tmp_path / "out" / "sample.retrieve.json").exists()


def test_deterministic_output(pattern_file):
    cmd = [sys.executable, "-m", "quam.cli", "retrieve", str(pattern_file),
           "--method", "grover", "--query", "0110", "--seed", "3", "--trace"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert json.loads(first)["method"] == "grover"
