import json

import pytest

from knowability import proof
from knowability.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_parse(capsys):
    code, data = run_json(capsys, "parse", "K[A](p -> q) & <>r")
    assert code == 0
    assert data["agents"] == ["A"] and data["atoms"] == ["p", "q", "r"]


def test_parse_error_exit_2(capsys):
    code, _, err = run(capsys, "parse", "p &")
    assert code == 2 and "formula" in err


def test_eval_demo_models(capsys):
    assert run(capsys, "eval", "--model", "reflexive_one", "--formula", "p -> <>p")[0] == 0
    code, data = run_json(capsys, "eval", "--model", "irreflexive_one", "--formula", "K[A]p -> <>K[A]p")
    assert code == 1 and data["failing"] == ["w"]


def test_eval_missing_model(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--model", str(tmp_path / "nope.json"), "--formula", "p")
    assert code == 2 and "cannot read model" in err


def test_check_schema(capsys):
    code, data = run_json(capsys, "check-schema", "--model", "two_worlds", "--schema", "K")
    assert code == 0 and data["schemas"][0]["ok"]
    code, _ = run_json(capsys, "check-schema", "--model", "irreflexive_one", "--schema", "K",
                       "--require-reflexive")
    assert code == 1


def test_countermodel(capsys):
    code, data = run_json(capsys, "countermodel", "--formula", "p -> <>p")
    assert code == 1 and data["countermodel"] is not None
    code, data = run_json(capsys, "countermodel", "--formula", "p -> <>p", "--require-reflexive")
    assert code == 0 and data["exhausted"]


def test_prove_all(capsys):
    code, data = run_json(capsys, "prove", "--all")
    assert code == 0 and len(data["scripts"]) == len(proof.BUNDLED)


def test_prove_drop_schema(capsys):
    code, data = run_json(capsys, "prove", "fitch", "--drop-schema", "KCONT")
    assert code == 1 and data["scripts"][0]["line"] == "2"


def test_prove_mode_override(capsys):
    assert run(capsys, "prove", "fitch_star", "--mode", "intuitionistic")[0] == 1


def test_corrupted_script_fails_at_line(capsys, tmp_path):
    text = proof.bundled_text("fitch").replace("3.  ~(phi & ~K[i]phi)", "3.  ~(phi & K[i]phi)")
    assert text != proof.bundled_text("fitch")
    path = tmp_path / "bad.proof"
    path.write_text(text)
    code, data = run_json(capsys, "prove", str(path))
    assert code == 1 and data["scripts"][0]["line"] == "3"


def test_export_roundtrip(capsys, tmp_path):
    assert run(capsys, "prove", "--export", str(tmp_path))[0] == 0
    for name in proof.BUNDLED:
        assert run(capsys, "prove", str(tmp_path / f"{name}.proof"))[0] == 0
    assert run(capsys, "eval", "--model", str(tmp_path / "two_worlds.json"), "--formula", "p | ~p")[0] == 0


def test_fr_run(capsys):
    code, out, _ = run(capsys, "fr", "run")
    assert code == 0 and "P[u=w=ok] = 0.0833333333333333" in out
    code, data = run_json(capsys, "fr", "run")
    assert abs(data["p_ok_ok"] - 1 / 12) <= 1e-12


def test_qlattice_verify(capsys):
    code, data = run_json(capsys, "qlattice", "verify", "--trials", "50")
    assert code == 0 and data["witness"]["verified"]
    assert all(r["failures"] == 0 for r in data["lemmas"])


def test_qlattice_bad_dims(capsys):
    assert run(capsys, "qlattice", "verify", "--dims", "0")[0] == 2


@pytest.mark.parametrize("argv", [
    ("fr", "run"),
    ("qlattice", "verify", "--trials", "30", "--seed", "3"),
    ("nogo",),
    ("prove", "--all"),
])
def test_output_is_deterministic(capsys, argv):
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]
    assert run(capsys, *argv, "--json")[1] == run(capsys, *argv, "--json")[1]


def test_plot_dirs(capsys, tmp_path):
    assert run(capsys, "fr", "run", "--plot-dir", str(tmp_path / "fr"))[0] == 0
    assert {p.name for p in (tmp_path / "fr").iterdir()} == {"fr_state.png", "fr_chain.png"}
    assert run(capsys, "qlattice", "verify", "--trials", "20", "--plot-dir", str(tmp_path / "ql"))[0] == 0
    assert len(list((tmp_path / "ql").glob("*.png"))) == 3


def test_nogo_table(capsys):
    code, out, _ = run(capsys, "nogo")
    assert code == 0
    for needle in ("rejected axioms", "CONST or KCONT or DIST", "intuitionistic", "classical",
                   "U (unitary evolution)"):
        assert needle in out


@pytest.mark.parametrize("drop, script", [
    ("CONST", "violating_q"), ("KCONT", "violating_q"), ("DIST", "violating_c"),
])
def test_nogo_drop_schema(capsys, drop, script):
    code, data = run_json(capsys, "nogo", "--drop-schema", drop)
    assert code == 1 and data["failing_script"] == script


def test_nogo_intuitionistic(capsys):
    code, data = run_json(capsys, "nogo", "--mode", "intuitionistic")
    assert code == 1 and data["failing_script"] == "violating_c"


def test_nogo_unknown_schema(capsys):
    assert run(capsys, "nogo", "--drop-schema", "NOPE")[0] == 2

