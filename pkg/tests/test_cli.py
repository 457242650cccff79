import io
import json
import subprocess
import sys

import pytest

from modalsep.cli import run
from modalsep.kripke import ModelClass, as_class, chain, cycle, load_class, loop, save_class, walks
from modalsep.semantics import sep_check
from modalsep.syntax import parse_formula


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, c in {"loop": as_class(loop()), "loop2": as_class(cycle(2)),
                    "chain1": as_class(chain(1)), "chain2": as_class(chain(2)),
                    "walks": walks(3), "u": ModelClass([loop(), chain(1), chain(2)]),
                    "pair": ModelClass([loop(), cycle(2)])}.items():
        path = tmp_path / f"{name}.json"
        path.write_text(save_class(c))
        out[name] = str(path)
    dsl = tmp_path / "chain2.txt"
    dsl.write_text(save_class(chain(2), "dsl"))
    out["chain2_dsl"] = str(dsl)
    return out


def call(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, io.StringIO(stdin), out, err)
    return code, out.getvalue(), err.getvalue()


def jcall(argv, stdin=""):
    code, out, err = call(argv, stdin)
    assert code == 0, err
    return json.loads(out)


def test_separate_walks(files):
    code, out, _ = call(["separate", "--c1", files["walks"], "--c2", files["loop"], "--format", "json"])
    assert code == 0
    obj = json.loads(out)
    assert obj["separable"] is True and obj["depth"] == 4 and obj["polarity"] == "forward"
    assert list(obj) == ["separable", "formula", "depth", "polarity"]
    f = parse_formula(obj["formula"])
    assert sep_check(walks(3), loop(), f) == "forward"


def test_bisim_and_eval(files):
    assert call(["bisim", "--m1", files["loop"], "--m2", files["loop2"]])[1] == '{"bisimilar":true}\n'
    assert call(["eval", "--model", files["loop"], "--formula", "<> true"])[1] == '{"value":true}\n'
    assert jcall(["bisim", "--m1", files["loop"], "--m2", files["chain2"], "--depth", "2"]) == \
        {"k_bisimilar": True, "depth": 2}
    assert jcall(["eval", "--model", files["u"], "--formula", "<> true"]) == \
        {"values": [True, True, True], "valid": True}


def test_negative_verdicts_exit_zero(files):
    assert jcall(["bisim", "--m1", files["loop"], "--m2", files["chain1"]]) == {"bisimilar": False}
    obj = jcall(["separate", "--c1", files["loop"], "--c2", files["u"]])
    assert obj == {"separable": False, "witness": [0, 0]}


def test_distinguish(files):
    obj = jcall(["distinguish", "--m1", files["loop"], "--m2", files["chain1"]])
    assert obj == {"bisimilar": False, "formula": "<> <> true", "depth": 2, "polarity": "forward"}
    obj = jcall(["distinguish", "--m1", files["loop"], "--m2", files["loop2"]])
    assert obj["bisimilar"] and obj["relation"] == [["a", "a"], ["a", "b"]]


def test_define_equiv_lift_compare(files):
    obj = jcall(["define", "--universe", files["u"], "--subset", "1"])
    assert obj["definable"] and obj["depth"] == 2
    assert jcall(["define", "--universe", files["pair"], "--subset", "0"]) == \
        {"definable": False, "witness": [0, 1]}
    obj = jcall(["equiv", "--c1", files["loop"], "--c2", files["u"]])
    assert obj["equivalent"] is False and obj["witness"]["formula"] == "<> <> true"
    assert jcall(["equiv", "--c1", files["loop"], "--c2", files["pair"]]) == {"equivalent": True}
    assert jcall(["lift", "--c1", files["loop"], "--c2", files["u"]]) == {"exists": True, "forall": False}
    assert jcall(["compare", "--universe", files["u"], "--d1", "1", "--d2", "2"]) == \
        {"distinguishing": "first-strictly-less", "expressive": "first-strictly-less"}


def test_oracle(files, monkeypatch):
    obj = jcall(["oracle", "--c1", files["walks"], "--c2", files["loop"], "--max-depth", "3"])
    assert obj == {"separable": False}
    obj = jcall(["oracle", "--c1", files["walks"], "--c2", files["loop"], "--max-depth", "4"])
    assert obj["separable"] and obj["depth"] == 4
    assert sep_check(walks(3), loop(), parse_formula(obj["formula"])) == obj["polarity"]
    monkeypatch.setenv("MODALSEP_MAX_DEPTH", "3")
    assert jcall(["oracle", "--c1", files["walks"], "--c2", files["loop"]]) == {"separable": False}
    monkeypatch.setenv("MODALSEP_CAP", "5")
    code, _, err = call(["oracle", "--c1", files["walks"], "--c2", files["loop"], "--max-depth", "4"])
    assert code == 4 and json.loads(err)["error"] == "resource"
    monkeypatch.setenv("MODALSEP_CAP", "lots")
    assert call(["oracle", "--c1", files["walks"], "--c2", files["loop"]])[0] == 2


def test_stdin_and_dsl(files):
    text = open(files["chain2_dsl"]).read()
    assert jcall(["bisim", "--m1", "-", "--m2", files["chain2"]], stdin=text) == {"bisimilar": True}
    assert jcall(["eval", "--model", "-", "--formula", "<><>true", "--input-format", "dsl"],
                 stdin=text) == {"value": True}


def test_text_format(files):
    code, out, _ = call(["lift", "--c1", files["loop"], "--c2", files["u"], "--format", "text"])
    assert code == 0 and out == "exists: true\nforall: false\n"


@pytest.mark.parametrize("argv, code, kind", [
    (["nonsense"], 2, "usage"),
    ([], 2, "usage"),
    (["bisim", "--m1", "x.json"], 2, "usage"),
    (["game", "--m1", "x", "--rounds", "-1"], 2, "usage"),
    (["eval", "--model", "MISSING", "--formula", "p"], 3, "validation"),
    (["eval", "--model", "LOOP", "--formula", "p &"], 3, "parse"),
    (["eval", "--model", "LOOP", "--formula", "p"], 3, "unknown-atom"),
    (["bisim", "--m1", "U", "--m2", "LOOP"], 3, "validation"),
    (["define", "--universe", "U", "--subset", "9"], 3, "validation"),
    (["define", "--universe", "U", "--subset", "x"], 2, "usage"),
])
def test_error_exit_codes(files, argv, code, kind):
    argv = [{"LOOP": files["loop"], "U": files["u"]}.get(a, a) for a in argv]
    got, out, err = call(argv)
    assert got == code and out == ""
    lines = err.strip().splitlines()
    assert len(lines) == 1
    assert json.loads(lines[0])["error"] == kind


def test_malformed_model_file(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"states": ["a"], "rel": [["a", "b"]], "point": "a"}')
    code, _, err = call(["eval", "--model", str(bad), "--formula", "true"])
    assert code == 3 and "'b'" in json.loads(err)["message"]


def test_game_solve(files):
    assert jcall(["game", "--m1", files["loop"], "--m2", files["chain2"], "--solve"]) == \
        {"winner": "spoiler", "within_rounds": 3}
    assert jcall(["game", "--m1", files["loop"], "--m2", files["chain2"], "--solve", "--rounds", "2"]) == \
        {"winner": "verifier"}
    assert jcall(["game", "--c1", files["loop"], "--c2", files["u"], "--solve"]) == \
        {"winner": "verifier", "opening": [0, 0]}
    assert jcall(["game", "--c1", files["walks"], "--c2", files["loop"], "--solve"]) == {"winner": "spoiler"}


def _events(out):
    return [json.loads(line) for line in out.splitlines()]


def test_game_play_as_spoiler(files):
    code, out, _ = call(["game", "--m1", files["loop"], "--m2", files["chain1"], "--role", "spoiler"],
                        "show\nmove right s0\nmove left a\nmove left a\n")
    ev = _events(out)
    assert code == 0
    assert ev[0]["event"] == "position" and ev[0]["to_move"] == "spoiler"
    assert ev[1] == {"event": "illegal", "reason": "'s0' is not a successor of 's0' on the right"}
    assert ev[-1] == {"event": "end", "winner": "spoiler", "reason": "verifier has no reply"}


def test_game_play_as_verifier(files):
    code, out, _ = call(["game", "--m1", files["loop"], "--m2", files["loop2"], "--role", "verifier",
                         "--rounds", "2", "--dump"],
                        "move left a\nmove right a\nmove right b\nmove right a\n")
    ev = _events(out)
    assert ev[-1] == {"event": "end", "winner": "verifier", "reason": "round bound reached"}
    assert any(e.get("event") == "illegal" for e in ev)


def test_class_game_play(files):
    code, out, _ = call(["game", "--c1", files["loop"], "--c2", files["u"], "--role", "spoiler"], "quit\n")
    ev = _events(out)
    assert ev[0] == {"event": "move", "player": "verifier", "choose": [0, 0]}
    assert ev[-1]["event"] == "abandoned"


def test_determinism(files):
    argv = ["separate", "--c1", files["walks"], "--c2", files["loop"]]
    assert len({call(argv)[1] for _ in range(3)}) == 1


def test_witness_revalidates(files):
    obj = jcall(["separate", "--c1", files["loop"], "--c2", files["u"]])
    i, j = obj["witness"]
    c1, c2 = load_class(open(files["loop"]).read()), load_class(open(files["u"]).read())
    from modalsep.bisim import bisimilar
    assert bisimilar(c1[i], c2[j])


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "modalsep.cli", "bisim", "--m1", files["loop"],
                           "--m2", files["loop2"]], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == '{"bisimilar":true}\n'
