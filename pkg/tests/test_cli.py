import json
import subprocess
import sys
from pathlib import Path

import pytest

from qsolvable.cli import COMMANDS, RECORD_SCHEMA, RunConfig, main, render, run

GROUPS = Path(__file__).resolve().parents[1] / "groups"


def g(name):
    return str(GROUPS / name)


def record(capsys, *argv):
    code = main([*argv, "--record"])
    return code, json.loads(capsys.readouterr().out)


def test_order_on_d4(capsys):
    code, doc = record(capsys, "order", "--group", g("d4.json"))
    assert code == 0 and doc["order"] == 8
    assert doc["schema"] == RECORD_SCHEMA
    assert doc["seed"] == 1729 and doc["epsilon"] == 0.05 and doc["queries"] > 0


def test_solvable_on_s5_is_negative(capsys):
    code, doc = record(capsys, "solvable", "--group", g("s5.json"))
    assert code == 1 and doc["answer"] is False
    code, doc = record(capsys, "solvable", "--group", g("s4.json"))
    assert code == 0 and doc["derived_series_orders"] == [24, 12, 4, 1]


def test_malformed_spec(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["order", "--group", str(bad)]) == 2
    assert "error" in capsys.readouterr().out
    bad.write_text(json.dumps({"family": "dihedral", "params": {"q": 0}}))
    assert main(["order", "--group", str(bad)]) == 2
    assert main(["order", "--group", str(tmp_path / "missing.json")]) == 2


def test_usage_errors(capsys):
    assert main(["member", "--group", g("s3.json")]) == 2
    assert main(["member", "--group", g("s3.json"), "--element", "zz"]) == 2
    assert main(["normal", "--group", g("s3.json")]) == 2
    assert main(["order", "--group", g("s3.json"), "--epsilon", "1.5"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate", "--group", g("s3.json")])
    assert exc.value.code == 2


def test_not_solvable_and_limits(capsys):
    assert main(["order", "--group", g("s5.json")]) == 3
    assert main(["order", "--group", g("s4.json"), "--max-group-size", "5"]) == 4


def test_decisions(capsys):
    code, doc = record(capsys, "member", "--group", g("s3.json"), "--subgroup", "03", "--element", "01")
    assert code == 1 and doc["answer"] is False
    code, doc = record(capsys, "subgroup", "--group", g("s4.json"), "--subgroup", g("s4_v4.json"))
    assert code == 0 and doc["answer"] is True
    code, doc = record(capsys, "normal", "--group", g("s4.json"), "--subgroup", g("s4_v4.json"))
    assert code == 0 and doc["answer"] is True
    code, doc = record(capsys, "equal", "--group", g("s3.json"), "--subgroup", g("s3_a3.json"))
    assert code == 1 and doc["answer"] is False


def test_decompose_and_chain(capsys):
    code, doc = record(capsys, "decompose", "--group", g("s3.json"), "--subgroup", g("s3_a3.json"))
    assert code == 0 and doc["prime_powers"] == [2]
    code, doc = record(capsys, "chain", "--group", g("d4.json"))
    assert code == 0 and doc["subgroup_orders"][-1] == 8


def test_superpose_lists_the_group(capsys):
    code, doc = record(capsys, "superpose", "--group", g("q8.json"))
    assert code == 0 and doc["order"] == 8
    assert len([line for line in doc["state"] if line.strip()]) >= 8


def test_human_mode_reports_wall_time(capsys):
    assert main(["order", "--group", g("z12.json")]) == 0
    out = capsys.readouterr().out
    assert "wall_time_s" in out and "seed: 1729" in out and "order: 12" in out


def test_record_excludes_wall_time():
    rep = run(RunConfig("order", g("z12.json"), record=True))
    assert "wall_time_s" in rep.fields
    doc = json.loads(render(rep, True))
    assert "wall_time_s" not in doc


def test_seed_changes_nothing_but_randomness(capsys):
    _, a = record(capsys, "order", "--group", g("s4.json"), "--seed", "1")
    _, b = record(capsys, "order", "--group", g("s4.json"), "--seed", "2")
    assert a["order"] == b["order"] == 24 and a["seed"] != b["seed"]


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("order", "x", epsilon=0)
    with pytest.raises(ValueError):
        RunConfig("nope", "x")
    with pytest.raises(ValueError):
        RunConfig("order", "x", seed=-1)


def test_subprocess_record_is_byte_stable():
    argv = [sys.executable, "-m", "qsolvable", "order", "--group", g("ut33.json"), "--record", "--seed", "7"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and json.loads(first)["order"] == 27


def test_every_command_is_wired():
    assert set(COMMANDS) == {"order", "member", "subgroup", "equal", "normal", "decompose", "chain", "solvable", "superpose"}
