"""Command-line behaviour: exit codes, artifacts and replay round trips."""

import json
import subprocess
import sys

import pytest

from weakfraisse.cli import main
from weakfraisse.formats import to_graph6
from weakfraisse.graph import Graph, cycle, empty, linear


@pytest.fixture
def pentagon(tmp_path):
    p = tmp_path / "pentagon.g6"
    p.write_text(to_graph6(cycle(5)) + "\n")
    return str(p)


def write(tmp_path, name, g):
    p = tmp_path / name
    p.write_text(to_graph6(g) + "\n")
    return str(p)


def test_member(pentagon, capsys):
    assert main(["member", "--class", "c4free", "--in", pentagon]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_enumerate(capsys):
    assert main(["enumerate", "--class", "all", "--order", "4"]) == 0
    lines = capsys.readouterr().out.split()
    assert len(lines) == 11


def test_config_errors_exit_2(pentagon, tmp_path, capsys):
    assert main(["member", "--class", "nope", "--in", pentagon]) == 2
    assert main(["enumerate", "--order", "42"]) == 2
    assert main(["member", "--in", str(tmp_path / "missing.g6")]) == 2
    assert main(["check-ap", "--order", "4", "--jobs", "0"]) == 2
    assert main(["replay", "--in", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_gadget_then_replay(pentagon, tmp_path, capsys):
    out = tmp_path / "g"
    assert main(["c4-gadget", "--witness", pentagon, "--out", str(out), "--format", "dot"]) == 0
    assert (out / "B.dot").exists() and json.loads((out / "C.g6.marks.json").read_text())["marks"]["p2"] == 16
    assert main(["replay", "--in", str(out / "c4_gadget.json")]) == 0
    assert capsys.readouterr().out.strip().endswith("no amalgam over the pentagon")


def test_property_violation_exits_1(tmp_path):
    assert main(["check-ap", "--class", "linear_forests", "--order", "4", "--out", str(tmp_path)]) == 1
    assert main(["replay", "--in", str(tmp_path / "ap_sweep.json")]) == 0


def test_identical_configs_give_identical_json(tmp_path, pentagon):
    runs = []
    for i in range(2):
        out = tmp_path / f"run{i}"
        assert main(["refutation-tree", "--depth", "1", "--out", str(out)]) == 0
        assert main(["chain", "--class", "c3free", "--steps", "15", "--seed", "3", "--out", str(out / "chain")]) == 0
        assert main(["check-wap", "--class", "c4free", "--base", pentagon, "--witness", pentagon,
                     "--ext-extra", "1", "--out", str(out)]) == 0
        runs.append(out)
    for name in ("refutation_tree.json", "chain/ledger.json", "chain/stages.g6", "wap_certificate.json"):
        assert (runs[0] / name).read_bytes() == (runs[1] / name).read_bytes()
    meta = json.loads((runs[0] / "refutation_tree.json.meta.json").read_text())
    assert "created" in meta and meta["seed"] == 0


def test_amalgamate_and_replay(tmp_path, capsys):
    base = write(tmp_path, "a.g6", empty(2))
    left = write(tmp_path, "b.g6", Graph.from_edges(3, [(0, 2), (1, 2)]))
    right = write(tmp_path, "c.g6", Graph.from_edges(4, [(0, 2), (2, 3), (3, 1)]))
    assert main(["amalgamate", "--class", "linear_forests", "--base", base, "--left", left, "--right", right,
                 "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.strip() == "none"
    assert main(["replay", "--in", str(tmp_path / "amalgam.json")]) == 0
    assert main(["amalgamate", "--class", "c4free", "--base", base, "--left", left, "--right", left,
                 "--left-map", "0,1", "--right-map", "1,0"]) == 0
    assert main(["amalgamate", "--base", base, "--left", left, "--right", left, "--left-map", "0"]) == 2


def test_cap_witness_search(tmp_path):
    base = write(tmp_path, "k1.g6", empty(1))
    assert main(["check-cap", "--class", "linear_forests", "--base", base, "--witness-extra", "2",
                 "--ext-extra", "2", "--out", str(tmp_path)]) == 0
    assert main(["replay", "--in", str(tmp_path / "cap_certificate.json")]) == 0


def test_wap_refutation_exits_1(tmp_path):
    base = write(tmp_path, "uv.g6", empty(2))
    assert main(["check-wap", "--class", "linear_forests", "--base", base, "--ext-extra", "2",
                 "--out", str(tmp_path)]) == 1
    bundle = json.loads((tmp_path / "wap_certificate.json").read_text())
    assert bundle["payload"]["verdict"] == "refuted"
    assert main(["replay", "--in", str(tmp_path / "wap_certificate.json")]) == 0


def test_windmill_witness(tmp_path, capsys):
    base = write(tmp_path, "p3.g6", linear(3))
    out = tmp_path / "w"
    assert main(["windmill-witness", "--in", base, "--ext-extra", "1", "--glue", "witness", "--centres", "base",
                 "--out", str(out)]) == 0
    for name in ("windmill_witness.json", "windmill_replay.json"):
        assert main(["replay", "--in", str(out / name)]) == 0
    # the literal free amalgam over the base fails, and says so
    assert main(["windmill-witness", "--in", base, "--ext-extra", "1", "--out", str(tmp_path / "lit")]) == 1


def test_prop_diam2_and_chain_tools(tmp_path, capsys):
    assert main(["prop-diam2", "--order", "6", "--jobs", "2", "--out", str(tmp_path)]) == 0
    assert main(["replay", "--in", str(tmp_path / "prop_diam2.json")]) == 0
    chain = tmp_path / "chain"
    assert main(["chain", "--steps", "10", "--out", str(chain)]) == 0
    assert main(["resume", "--in", str(chain), "--steps", "5"]) == 0
    capsys.readouterr()
    assert main(["diagnose", "--in", str(chain), "--k-pairs", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["total"] == 30


def test_tampered_bundle_fails_replay(tmp_path):
    assert main(["refutation-tree", "--depth", "1", "--out", str(tmp_path)]) == 0
    path = tmp_path / "refutation_tree.json"
    obj = json.loads(path.read_text())
    obj["payload"]["nodes"]["1"] = obj["payload"]["nodes"]["0"]
    path.write_text(json.dumps(obj))
    assert main(["replay", "--in", str(path)]) == 1
    obj["schema_version"] = 2
    path.write_text(json.dumps(obj))
    assert main(["replay", "--in", str(path)]) == 1


def test_console_script_runs(pentagon):
    res = subprocess.run([sys.executable, "-m", "weakfraisse.cli", "member", "--class", "c4free", "--in", pentagon],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "true"
