import json

import pytest

from syncflow import cli
from syncflow.machine import fixture_fig1, fixture_fig2
from syncflow.reductions import Nfa
from syncflow.serialize import dumps, machine_from_dict, machine_to_dict, nfa_to_dict, peek_to_dict
from syncflow.reductions import PeekInstance, peek_stages, stage_of
from syncflow.verdict import Status, Verdict


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, m in (("fig1", fixture_fig1()), ("fig2", fixture_fig2())):
        p = tmp_path / f"{name}.json"
        p.write_text(dumps(machine_to_dict(m)))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_exit_codes(files, capsys):
    assert run(capsys, "check", "--property", "ndi", files["fig1"])[:2] == (0, "ndi: satisfies\n")
    assert run(capsys, "check", "--property", "res", files["fig2"])[0] == 1
    assert run(capsys, "check", "--property", "nds", files["fig2"])[0] == 0


def test_check_nds_witness(files, capsys):
    code, out, _ = run(capsys, "check", "--property", "nds", files["fig1"], "--witness")
    assert code == 1
    beta = out.splitlines()[1]
    assert beta.replace(" ", "") in ("beta:00000", "beta:00001")


def test_structured_output_replays(files, capsys, tmp_path):
    code, out, _ = run(capsys, "check", "--property", "nds", files["fig1"], "--witness",
                       "--format", "structured", "--no-timing")
    doc = json.loads(out)
    assert code == 1 and doc["verdict"] == "violates" and "elapsed" not in doc["stats"]
    w = tmp_path / "w.json"
    w.write_text(out)
    assert run(capsys, "replay", "nds", files["fig1"], str(w))[:2] == (0, "valid\n")
    # the same strategy says nothing about fig2
    assert run(capsys, "replay", "nds", files["fig2"], str(w))[0] == 1


def test_structured_output_is_deterministic(files, capsys):
    args = ("check", "--property", "ndi", files["fig1"], "--format", "structured", "--no-timing")
    assert run(capsys, *args) == run(capsys, *args)
    _, out, _ = run(capsys, "check", "--property", "ndi", files["fig1"], "--format", "structured")
    assert "elapsed" in json.loads(out)["stats"]


def test_ndi_replay(tmp_path, capsys):
    a = Nfa.from_edges(["p", "q"], ["p"], "ab", [("p", "a", "p"), ("p", "b", "p"), ("p", "a", "q")], ["q"])
    nfa = tmp_path / "a.nfa"
    nfa.write_text(dumps(nfa_to_dict(a)))
    mach = tmp_path / "a.json"
    assert run(capsys, "gen", "nfa", str(nfa), "-o", str(mach))[0] == 0
    assert len(machine_from_dict(json.loads(mach.read_text())).states) == 6
    code, out, _ = run(capsys, "check", "--property", "ndi", str(mach), "--witness", "--format", "structured")
    assert code == 1
    w = tmp_path / "w.json"
    w.write_text(json.dumps(json.loads(out)["witness"]))
    assert run(capsys, "replay", "ndi", str(mach), str(w))[0] == 0


def test_input_errors(files, tmp_path, capsys):
    assert run(capsys, "check", "--property", "ndi", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "check", "--property", "ndi", str(bad))[0] == 2
    doc = machine_to_dict(fixture_fig1())
    doc["trans"] = [t for t in doc["trans"] if t[0] != "s3"]
    bad.write_text(json.dumps(doc))
    assert run(capsys, "check", "--property", "ndi", str(bad))[0] == 2
    assert run(capsys, "validate", str(bad))[0] == 1
    assert run(capsys, "validate", files["fig1"])[:2] == (0, "ok\n")
    assert run(capsys, "check", "--property", "xyz", files["fig1"])[0] == 2
    assert run(capsys, "check", "--property", "ndi", files["fig1"], "--bogus")[0] == 2
    assert run(capsys, "check", "--property", "nds", files["fig1"], "--limits", "0")[0] == 2
    assert run(capsys, "check", "--property", "res", files["fig1"], "--depth", "2")[0] == 2


def test_resource_exit(files, capsys):
    assert run(capsys, "check", "--property", "nds", files["fig2"], "--limits", "2")[0] == 3


def test_gen_random_deterministic(capsys, tmp_path):
    first = run(capsys, "gen", "random", "--states", "4", "--seed", "7")
    second = run(capsys, "gen", "random", "--states", "4", "--seed", "7")
    assert first == second and first[0] == 0
    assert len(json.loads(first[1])["states"]) == 4


def test_gen_peek(capsys, tmp_path):
    g = PeekInstance(2, 1, [[1]], [[-2]], (0, 1))
    p = tmp_path / "g.peek"
    p.write_text(dumps(peek_to_dict(g)))
    code, out, _ = run(capsys, "gen", "peek", str(p))
    m = machine_from_dict(json.loads(out))
    assert code == 0 and len(m.states) == 106
    stages = peek_stages(g)
    for s, _, _, t in m.trans:
        if s != "s0":
            assert stages.index(stage_of(t)) == (stages.index(stage_of(s)) + 1) % len(stages)


def test_oracle_commands(files, capsys):
    assert run(capsys, "oracle", "ndi", "--count", "40")[0] == 0
    assert run(capsys, "oracle", "nds", "--count", "20")[0] == 0
    assert run(capsys, "oracle", "res", files["fig1"], files["fig2"])[0] == 0
    code, out, _ = run(capsys, "oracle", "ndi", files["fig1"])
    assert code == 2


def test_oracle_catches_broken_checker(monkeypatch, capsys):
    monkeypatch.setattr(cli, "check_ndi", lambda m: Verdict("ndi", Status.SATISFIES))
    code, out, _ = run(capsys, "oracle", "ndi", "--count", "40")
    assert code == 1 and "disagreements" in out


def test_bench_writes_files(tmp_path, capsys):
    code, out, _ = run(capsys, "bench", "res", "--sizes", "20", "40", "--reps", "1", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "res_scaling.png").stat().st_size > 0
    assert out.startswith("states,reachable,blocks,splits,verdict,seconds")
    assert "exponent:" in out
