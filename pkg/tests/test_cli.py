import json
import subprocess
import sys
from pathlib import Path

from polarium.cli import main

GOLDENS = Path(__file__).parent / "goldens"


def run_main(capsys, *argv) -> tuple[int, str]:
    status = main(list(argv))
    return status, capsys.readouterr().out


def test_classify_golden(capsys):
    status, out = run_main(
        capsys, "classify", "--input", str(GOLDENS / "sl3_classify_request.json"))
    assert status == 0
    assert out == (GOLDENS / "sl3_classify_output.json").read_text()


def test_yu_sequence_golden_and_chaining(capsys, tmp_path):
    status, out = run_main(
        capsys, "yu-sequence", "--input", str(GOLDENS / "sl3_classify_request.json"))
    assert status == 0
    assert out == (GOLDENS / "sl3_yu_output.json").read_text()
    doc = json.loads(out)
    assert doc["ladder"]["breaks"] == ["1", "2"]
    assert doc["ladder"]["levels"] == [[], [1, 4], [0, 1, 2, 3, 4, 5]]
    # chain: classify output feeds yu-sequence directly
    classified = (GOLDENS / "sl3_classify_output.json").read_text()
    chained_input = tmp_path / "chained.json"
    chained_input.write_text(classified)
    status2, out2 = run_main(capsys, "yu-sequence", "--input", str(chained_input))
    assert status2 == 0
    assert json.loads(out2)["ladder"]["breaks"] == ["1", "2"]


def test_epipelagic_golden(capsys):
    status, out = run_main(
        capsys, "epipelagic", "--input", str(GOLDENS / "epi_request.json"))
    assert status == 0
    assert out == (GOLDENS / "epi_output.json").read_text()


def test_regular_numbers_golden(capsys):
    status, out = run_main(capsys, "regular-numbers", "--type", "G2")
    assert status == 0
    assert out == (GOLDENS / "g2_regular_output.json").read_text()
    assert 6 in json.loads(out)["regular"]


def test_partition_check_golden_deterministic(capsys):
    argv = ("partition-check", "--type", "A1", "--samples", "25", "--seed", "11")
    status, out = run_main(capsys, *argv)
    assert status == 0
    assert out == (GOLDENS / "partition_a1_output.json").read_text()
    status2, out2 = run_main(capsys, *argv)
    assert out2 == out


def test_jlattice_golden(capsys):
    status, out = run_main(
        capsys, "jlattice", "--input", str(GOLDENS / "jlattice_request.json"))
    assert status == 0
    assert out == (GOLDENS / "jlattice_output.json").read_text()
    doc = json.loads(out)
    assert doc["psi_lambda"] is True


def test_list_tori(capsys):
    status, out = run_main(capsys, "list-tori", "--type", "A2")
    assert status == 0
    classes = json.loads(out)["classes"]
    assert len(classes) == 3
    assert sorted(c["m"] for c in classes) == [1, 2, 3]


def test_verify_sl2(capsys):
    status, out = run_main(capsys, "verify-sl2")
    assert status == 0
    assert json.loads(out)["violations"] == []


def test_moveability_exit_codes(capsys, tmp_path):
    good = {
        "datum": {"type": "A1",
                  "lambda": {"m": 1, "terms": [{"q": "1", "coeff": ["1"]}]}},
        "x": ["1/4"],
        "variant": "K",
    }
    path = tmp_path / "good.json"
    path.write_text(json.dumps(good))
    status, out = run_main(capsys, "moveability", "--input", str(path))
    assert status == 0
    assert json.loads(out)["full_rank"] is True

    bad = {
        "datum": {"type": "A2", "levi": [], "validate": False,
                  "lambda": {"m": 1, "terms": [{"q": "1", "coeff": ["1", "0"]}]}},
        "variant": "K",
        "ladder": {"breaks": ["1"], "levels": [[], [0, 1, 2, 3, 4, 5]],
                   "validate": False},
    }
    path2 = tmp_path / "bad.json"
    path2.write_text(json.dumps(bad))
    status2, out2 = run_main(capsys, "moveability", "--input", str(path2))
    assert status2 == 2
    assert json.loads(out2)["full_rank"] is False


def test_error_exit_codes(capsys, tmp_path):
    # schema rejection before computation
    path = tmp_path / "bad.json"
    path.write_text('{"type":"A2","lambda":{"m":1,"terms":[{"q":"1","coeff":["x"]}]}}')
    status, out = run_main(capsys, "classify", "--input", str(path))
    assert status == 1
    assert json.loads(out)["error"]["code"] == "invalid-argument"

    path2 = tmp_path / "unsupported.json"
    path2.write_text('{"type":"E8","lambda":{"m":1,"terms":[]}}')
    status2, out2 = run_main(capsys, "classify", "--input", str(path2))
    assert status2 == 1
    assert json.loads(out2)["error"]["code"] == "unsupported-feature"

    path3 = tmp_path / "notjson.json"
    path3.write_text("{nope")
    status3, out3 = run_main(capsys, "classify", "--input", str(path3))
    assert status3 == 1


def test_table_format(capsys):
    status, out = run_main(capsys, "regular-numbers", "--type", "A2",
                           "--format", "table")
    assert status == 0
    assert "regular" in out and "[1, 2, 3]" in out


def test_out_file(tmp_path, capsys):
    target = tmp_path / "result.json"
    status, _ = run_main(capsys, "regular-numbers", "--type", "A1",
                         "--out", str(target))
    assert status == 0
    assert json.loads(target.read_text())["regular"] == [1, 2]


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "polarium", "regular-numbers", "--type", "B2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["regular"] == [1, 2, 4]


def test_outputs_conform_to_response_schemas(capsys, tmp_path):
    from polarium.jsonio import validate_response

    cases = [
        ("classify", ["--input", str(GOLDENS / "sl3_classify_request.json")]),
        ("yu-sequence", ["--input", str(GOLDENS / "sl3_classify_request.json")]),
        ("epipelagic", ["--input", str(GOLDENS / "epi_request.json")]),
        ("regular-numbers", ["--type", "G2"]),
        ("list-tori", ["--type", "A2"]),
        ("partition-check", ["--type", "A1", "--samples", "10", "--seed", "3"]),
        ("jlattice", ["--input", str(GOLDENS / "jlattice_request.json")]),
        ("verify-sl2", []),
    ]
    for command, argv in cases:
        status, out = run_main(capsys, command, *argv)
        assert status == 0, command
        validate_response(command, json.loads(out))


def test_homogeneous_cli(capsys, tmp_path):
    path = tmp_path / "req.json"
    path.write_text('{"type":"A2","m":3,"i":2}')
    status, out = run_main(capsys, "homogeneous", "--input", str(path))
    assert status == 0
    doc = json.loads(out)
    assert doc["lambda"]["terms"][0]["q"] == "2/3"
    from polarium.jsonio import validate_response

    validate_response("homogeneous", doc)


def test_twisted_datum_chains_through_lattice_commands(capsys, tmp_path):
    req = tmp_path / "epi.json"
    req.write_text('{"type":"A2","m":3}')
    status, out = run_main(capsys, "epipelagic", "--input", str(req))
    assert status == 0
    datum_doc = json.loads(out)
    for command, extra in (("jlattice", {}), ("moveability", {"variant": "J"})):
        payload = tmp_path / f"{command}.json"
        payload.write_text(json.dumps({"datum": datum_doc, **extra}))
        status2, out2 = run_main(capsys, command, "--input", str(payload))
        assert status2 == 0, (command, out2)
    report = json.loads(out2)
    assert report["full_rank"] is True
