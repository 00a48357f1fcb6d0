import pytest

from knowability import kripke, nogo
from knowability.formula import parse


def test_pipeline_passes():
    res = nogo.run_pipeline()
    assert res.ok and res.failing is None
    assert [r.script for r in res.results] == list(nogo.PIPELINE)


def test_table_rows():
    rows = {r.assumption: r for r in nogo.run_pipeline().table}
    assert rows["Q"].rejected == ("CONST", "KCONT") and not rows["Q"].refl_needed
    assert rows["S"].deduction == "intuitionistic" and rows["S"].refl_needed
    assert rows["C"].rejected == ("CONST", "KCONT", "DIST") and rows["C"].deduction == "classical"


def test_premises_are_instances_over_fr_outcomes():
    prem = dict(nogo.run_pipeline().premises)
    assert prem["C"] == "K[W]K[A]w_fail & ~K[W]w_fail"


def test_unknown_drop_rejected():
    with pytest.raises(KeyError):
        nogo.run_pipeline(drop=["NOPE"])


def test_certified_facts_seed_a_q_violation():
    q = parse(dict(nogo.run_pipeline().premises)["Q"])
    assert kripke.valuate(nogo.certified_model(), q, "w")
    assert not kripke.valuate(nogo.certified_model(known=("wfail_given_a1",)), q, "w")
