import json
import pathlib

import pytest

from owjfa.cli import main
from owjfa.core import parse_automaton

GOLDEN = pathlib.Path(__file__).parent / "golden"


@pytest.fixture
def lab_file(fixtures):
    return str(fixtures / "lab.aut")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_owj(capsys, lab_file):
    code, out, _ = run_cli(capsys, "run", "--engine", "owj", lab_file, "aaaabbabbb")
    assert code == 0
    assert out == "ACCEPT sweeps=4 jumps=12 steps=22\n"


def test_run_classical_reject_is_not_error(capsys, lab_file):
    code, out, _ = run_cli(capsys, "run", "--engine", "classical", lab_file, "ba")
    assert code == 0 and out.startswith("REJECT ")


def test_run_jumping(capsys, lab_file):
    code, out, _ = run_cli(capsys, "run", "--engine", "jumping", lab_file, "ba")
    assert code == 0 and out == "ACCEPT engine=jumping\n"


def test_run_usage_errors(capsys, lab_file):
    assert run_cli(capsys, "run")[0] == 2
    assert run_cli(capsys, "run", lab_file, "ab")[0] == 2  # engine missing
    assert run_cli(capsys)[0] == 2
    assert run_cli(capsys, "compare", "--engine", "owj,foo", lab_file, "--n", "2")[0] == 2


def test_domain_errors_exit_one(capsys, lab_file, tmp_path):
    code, _, err = run_cli(capsys, "run", "--engine", "owj", lab_file, "abc")
    assert code == 1 and "error (core)" in err
    bad = tmp_path / "bad.aut"
    bad.write_text("alphabet: a\nstates: q\n")
    code, _, err = run_cli(capsys, "run", "--engine", "owj", str(bad), "a")
    assert code == 1 and "start" in err
    code, _, err = run_cli(capsys, "run", "--engine", "owj", str(tmp_path / "missing.aut"), "a")
    assert code == 1
    code, _, err = run_cli(capsys, "enumerate", "--engine", "owj", lab_file, "--max-len", "30")
    assert code == 1 and "error (langtools)" in err


def test_run_trace_flag(capsys, lab_file):
    code, out, _ = run_cli(capsys, "run", "--engine", "owj", "--trace", lab_file, "ab")
    assert out == "read 1 a q0 -> q1\nread 2 b q1 -> q0\nhalt accept\nACCEPT sweeps=1 jumps=0 steps=2\n"


def test_trace_text(capsys, lab_file):
    code, out, _ = run_cli(capsys, "trace", "--engine", "owj", lab_file, "aaaabbabbb")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 5
    assert lines[0] == "sweep 1: [a] a a a [b] b [a] [b] b b"
    assert lines[3] == "sweep 4: . . . [a] . . . . . [b]"
    assert lines[4].startswith("ACCEPT sweeps=4")


def test_trace_empty_and_short(capsys, lab_file):
    _, out, _ = run_cli(capsys, "trace", "--engine", "owj", lab_file, "")
    assert out == "ACCEPT sweeps=0 jumps=0 steps=0\n"
    _, out, _ = run_cli(capsys, "trace", "--engine", "owj", lab_file, "ab")
    assert out.splitlines()[0] == "sweep 1: [a] [b]"


@pytest.mark.parametrize(
    "golden, argv",
    [
        ("trace_fig2.json", ["trace", "--engine", "owj", "{F}", "aaaabbabbb", "--format", "json"]),
        ("run_fig2.json", ["run", "--engine", "owj", "{F}", "aaaabbabbb", "--format", "json"]),
        ("profile_lab_10.csv", ["profile", "--engine", "owj", "{F}", "--n", "10"]),
        ("profile_lab_8.json", ["profile", "--engine", "owj", "{F}", "--n", "8", "--format", "json"]),
        ("compare_lab.json", ["compare", "--engine", "owj,classical", "{F}", "--n", "4", "--format", "json"]),
        ("probe_lab.csv", ["probe", "{F}", "--p", "2", "--s", "3", "--format", "csv"]),
        ("enumerate_lab_3.json", ["enumerate", "--engine", "owj", "{F}", "--max-len", "3", "--format", "json"]),
    ],
)
def test_golden(capsys, lab_file, golden, argv):
    argv = [lab_file if a == "{F}" else a for a in argv]
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text(encoding="utf-8")


def test_trace_json_schema(capsys, lab_file):
    _, out, _ = run_cli(capsys, "trace", "--engine", "owj", lab_file, "aab", "--format", "json")
    doc = json.loads(out)
    assert list(doc) == ["engine", "word", "events", "sweeps", "outcome"]
    kinds = {e["kind"] for e in doc["events"]}
    assert kinds <= {"read", "skip", "sweep", "halt"}
    assert list(doc["outcome"]) == ["accepted", "final_state", "sweeps", "jumps", "steps", "consumed", "residue"]


def test_profile_seeded_rerun_identical(capsys, lab_file):
    argv = ["profile", "--engine", "owj", lab_file, "--n", "12", "--budget", "100", "--samples", "50", "--seed", "3"]
    _, a, _ = run_cli(capsys, *argv)
    _, b, _ = run_cli(capsys, *argv)
    assert a == b and "sampled" in a
    _, c, _ = run_cli(capsys, *argv[:-1], "4")
    assert c != a


def test_compare_complete_always_equal(capsys, tmp_path):
    for seed in range(5):
        path = tmp_path / f"c{seed}.aut"
        assert main(["gen", "complete_random", "4", "--seed", str(seed), "--out", str(path)]) == 0
        _, out, _ = run_cli(capsys, "compare", "--engine", "owj,classical", str(path), "--n", "8")
        assert out == "EQUAL up to n=8\n"


def test_gen_determinize_minimize(capsys, tmp_path):
    path = tmp_path / "k3.aut"
    assert main(["gen", "kth_last", "3", "--out", str(path)]) == 0
    capsys.readouterr()
    _, out, _ = run_cli(capsys, "determinize", str(path))
    assert parse_automaton(out).n_states == 8
    _, out, _ = run_cli(capsys, "minimize", str(path))
    assert parse_automaton(out).n_states == 8
    code, _, err = run_cli(capsys, "run", "--engine", "owj", str(path), "ab")
    assert code == 1 and "NFA" in err
    code, out, _ = run_cli(capsys, "run", "--engine", "jumping", str(path), "aab")
    assert code == 0 and out.startswith("ACCEPT")


def test_gen_errors(capsys):
    code, _, err = run_cli(capsys, "gen", "kth_last", "0")
    assert code == 1 and "error (langtools)" in err


def test_probe_text(capsys, lab_file):
    _, out, _ = run_cli(capsys, "probe", lab_file, "--p", "6", "--s", "7")
    assert out == "consistent with ≤ 13 residuals up to (p=6, s=7)\n"


def test_out_file(capsys, lab_file, tmp_path):
    target = tmp_path / "o.csv"
    assert main(["profile", "--engine", "owj", lab_file, "--n", "10", "--out", str(target)]) == 0
    assert target.read_text() == (GOLDEN / "profile_lab_10.csv").read_text()
