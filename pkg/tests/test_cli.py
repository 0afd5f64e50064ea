from __future__ import annotations

import json
import time

import pytest

from clusterweyl.cli import main


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_build_dot_A2(capsys):
    code, out = _run(capsys, ["build", "--type", "A2", "--m", "2", "--format", "dot"])
    assert code == 0
    assert out.startswith("digraph")
    assert out.count("[label=") == 4


def test_build_window_json(capsys):
    code, out = _run(capsys, ["build", "--type", "B4", "--window", "0", "5", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert {tuple(v)[0] for v in data["vertices"]} == {1, 2, 3, 4}


def test_build_dual_affine_has_node_zero(capsys):
    code, out = _run(capsys, ["build", "--type", "G2", "--m", "2", "--dual-affine", "--format", "json"])
    assert code == 0
    assert any(v[0] == 0 for v in json.loads(out)["vertices"])


def test_build_output_file(capsys, tmp_path):
    target = tmp_path / "q.dot"
    assert main(["build", "--type", "A3", "--m", "2", "--format", "dot", "--output", str(target)]) == 0
    assert target.read_text().startswith("digraph")


def test_mutate_empty_sequence(capsys, tmp_path):
    f = tmp_path / "empty.txt"
    f.write_text("# nothing\n\n")
    code, out = _run(capsys, ["mutate", "--type", "A2", "--m", "2", str(f)])
    assert code == 0
    data = json.loads(out)
    assert data["moves"] == []
    assert all(sign == "positive" for sign in data["tropical_signs"].values())


def test_mutate_R1_is_green(capsys, tmp_path):
    f = tmp_path / "r1.txt"
    f.write_text("R 1\n")
    code, out = _run(capsys, ["mutate", "--type", "A2", "--m", "2", str(f)])
    assert code == 0
    data = json.loads(out)
    assert data["green_trace"] == ["positive", "positive"]
    assert data["quiver_preserved"]


def test_mutate_longest_word_is_maximal_green(capsys, tmp_path):
    f = tmp_path / "w0.txt"
    f.write_text("Rword 1 2 1\n")
    code, out = _run(capsys, ["mutate", "--type", "A2", "--m", "2", "--tropical-only", str(f)])
    assert code == 0
    data = json.loads(out)
    assert set(data["green_trace"]) == {"positive"}
    assert set(data["tropical_signs"].values()) == {"negative"}


def test_mutate_malformed_move(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("flip 1 0\n")
    assert main(["mutate", "--type", "A2", "--m", "2", str(f)]) == 2


def test_mutate_vertex_outside_quiver(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("mu 5 0\n")
    assert main(["mutate", "--type", "A2", "--m", "2", str(f)]) == 2


def test_verify_braid_B2(capsys):
    code, out = _run(capsys, ["verify", "braid", "--type", "B2", "--m", "2"])
    assert code == 0
    data = json.loads(out)
    assert data["suite"] == "braid"
    assert all(c["status"] == "pass" for c in data["checks"])
    assert set(data["checks"][0]) == {"name", "ref", "status", "detail"}


def test_verify_all_A2_under_a_minute(capsys):
    t0 = time.time()
    code, out = _run(capsys, ["verify", "all", "--type", "A2", "--m", "2"])
    assert code == 0
    assert time.time() - t0 < 60
    assert json.loads(out)["checks"]


def test_verify_suite_flag_equivalent(capsys):
    code, out = _run(capsys, ["verify", "--suite", "green", "--type", "A2"])
    assert code == 0
    assert json.loads(out)["suite"] == "green"


def test_verify_toda_numeric(capsys):
    code, out = _run(capsys, ["verify", "toda", "--type", "A2", "--numeric", "--samples", "3"])
    assert code == 0
    assert len(json.loads(out)["checks"]) == 2


@pytest.mark.parametrize("argv", [
    ["verify", "qchar", "--type", "A2", "--m", "1"],
    ["verify", "--type", "A2"],
    ["verify", "braid", "--type", "X9"],
    ["verify", "braid", "--type", "A2", "--i", "7"],
    ["verify", "green", "--type", "A2", "--infinite"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2
