import json
import subprocess
import sys

from coverforge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gm_verify(capsys):
    code, out, _ = run(capsys, "gm-verify", "--m", "8")
    assert code == 0
    assert json.loads(out)["properties"] == {"tree": True, "coloring": True, "symmetry": True, "consecutive": True}


def test_gm_build_formats(capsys, tmp_path):
    code, out, _ = run(capsys, "gm-build", "--m", "8")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 545 and len(data["edges"]) == 544
    target = tmp_path / "g.dot"
    code, out, _ = run(capsys, "gm-build", "--m", "8", "--format", "dot", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().count(" -- ") == 544


def test_tables_report_known_diffs(capsys):
    code, out, err = run(capsys, "tables", "--m", "8")
    report = json.loads(out)
    assert code == 1
    assert len(report["diff"]) == 7
    assert json.loads(err)["type"] == "InvariantFailure"


def test_lift_check_on_graph_file(capsys, tmp_path):
    from coverforge.graph import build_Lm

    path = tmp_path / "l2.json"
    path.write_text(json.dumps(build_Lm(2).to_json()))
    code, out, _ = run(capsys, "lift-check", "--graph", str(path), "--arc", "1", "--k", "3")
    report = json.loads(out)
    assert code == 0
    assert report["oracle"] and report["agree"] and report["min_lifting_exponent"] == 3


def test_lift_check_random_sweep_is_deterministic(capsys):
    first = run(capsys, "lift-check", "--random", "5", "--seed", "7")
    second = run(capsys, "lift-check", "--random", "5", "--seed", "7")
    assert first == second
    assert first[0] == 0 and json.loads(first[1])["disagreements"] == []


def test_construct_hopf(capsys):
    code, out, _ = run(capsys, "construct", "--braid", "1 1", "--strands", "2")
    tower = json.loads(out)
    assert code == 0
    assert len(tower["stages"]) == 1 and tower["final_components"] == 1 and tower["ok"]


def test_construct_reads_braid_file(capsys, tmp_path):
    path = tmp_path / "b.txt"
    path.write_text("strands 2\n1 1\n")
    code, out, _ = run(capsys, "construct", "--braid", str(path), "--format", "text")
    assert code == 0 and "final: 1 component(s)" in out


def test_errors_are_json(capsys):
    code, _, err = run(capsys, "construct")
    assert code == 2 and json.loads(err)["type"] == "ValueError"
    code, _, err = run(capsys, "gm-build", "--m", "5")
    assert code == 2 and "m >= 8" in json.loads(err)["error"]
    code, _, err = run(capsys, "tables", "--m", "8", "--format", "dot")
    assert code == 2


def test_usage_errors_are_json():
    proc = subprocess.run([sys.executable, "-m", "coverforge.cli", "nope"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert json.loads(proc.stderr)["type"] == "UsageError"


def test_log_level_from_environment():
    env = {"COVERFORGE_LOG": "info", "PATH": ""}
    proc = subprocess.run(
        [sys.executable, "-m", "coverforge.cli", "construct", "--braid", "1 1", "--format", "text"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert proc.returncode == 0
    assert "INFO coverforge.universal" in proc.stderr
