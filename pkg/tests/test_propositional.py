import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowability.formula import FALSUM, And, Atom, Implies, Not, Or, parse
from knowability.propositional import (
    FormulaTooLarge, LogicMode, classical_tautology, ipl_countermodel,
    ipl_provable, pl_tautology,
)

INT, CL = LogicMode.INTUITIONISTIC, LogicMode.CLASSICAL


@pytest.mark.parametrize("text, intuit, classic", [
    ("~(p & ~q) -> p -> ~~q", True, True),
    ("~~p -> p", False, True),
    ("p -> p", True, True),
    ("p | ~p", False, True),
    ("~~(p | ~p)", True, True),
    ("((p -> q) -> p) -> p", False, True),
    ("~~~p -> ~p", True, True),
    ("(p -> q) -> ~(p & ~q)", True, True),
    ("~(p & ~q) -> p -> q", False, True),
    ("K[A]p & ~K[A]p -> _|_", True, True),
    ("<>p -> <>p | q", True, True),
    ("p -> q", False, False),
    ("[]p -> p", False, False),
])
def test_pl_tautology_examples(text, intuit, classic):
    f = parse(text)
    assert pl_tautology(f, INT) is intuit
    assert pl_tautology(f, CL) is classic


def test_mode_admits():
    assert CL.admits(INT) and CL.admits(CL) and INT.admits(INT)
    assert not INT.admits(CL)


def test_too_many_leaves():
    big = Atom("x0")
    for k in range(1, 25):
        big = Or(big, Atom(f"x{k}"))
    with pytest.raises(FormulaTooLarge):
        classical_tautology(Implies(big, big))


small = st.recursive(
    st.sampled_from([Atom("p"), Atom("q"), FALSUM]),
    lambda c: st.builds(Not, c) | st.builds(And, c, c) | st.builds(Or, c, c) | st.builds(Implies, c, c),
    max_leaves=6,
)


@given(small)
@settings(max_examples=300, deadline=None)
def test_intuitionistic_implies_classical(f):
    if ipl_provable(f):
        assert classical_tautology(f)


@given(small)
@settings(max_examples=150, deadline=None)
def test_sequent_prover_agrees_with_kripke_frames(f):
    # two independent deciders: G4ip search and rooted frames of <= 3 worlds
    assert ipl_provable(f) == (ipl_countermodel(f, max_worlds=3) is None)


def test_countermodel_for_excluded_middle():
    le, val = ipl_countermodel(parse("p | ~p"), max_worlds=2)
    assert len({a for a, _ in le}) == 2
