import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knowability import axioms
from knowability.formula import (
    FALSUM, And, Atom, BindingError, Box, Diamond, Implies, Knows, Not, Or,
    ParseError, Schema, agents, atoms, closure, depth, enumerate_formulas,
    expand_diamonds, instantiate, instantiate_all, parse, render, render_unicode,
    subformulas, substitute,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")


@pytest.mark.parametrize("text, tree", [
    ("p", p),
    ("~p & q", And(Not(p), q)),
    ("p & q | r", Or(And(p, q), r)),
    ("p | q & r", Or(p, And(q, r))),
    ("p -> q -> r", Implies(p, Implies(q, r))),
    ("(p -> q) -> r", Implies(Implies(p, q), r)),
    ("p & q & r", And(And(p, q), r)),
    ("K[A]p -> <>K[A]p", Implies(Knows("A", p), Diamond(Knows("A", p)))),
    ("K[ B ] ~[]p", Knows("B", Not(Box(p)))),
    ("_|_", FALSUM),
    ("~(p & ~K[i]p)", Not(And(p, Not(Knows("i", p))))),
])
def test_parse_examples(text, tree):
    assert parse(text) == tree


def test_fitch_conclusion_shape():
    f = parse("phi -> ~~K[i]phi")
    assert f == Implies(Atom("phi"), Not(Not(Knows("i", Atom("phi")))))


@pytest.mark.parametrize("text, pos", [
    ("p &", 3),
    ("(p", 2),
    ("p q", 2),
    ("K[]p", 1),
    ("p $ q", 2),
    ("", 0),
])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse(text)
    assert e.value.pos == pos


def test_unknown_agent_rejected():
    assert parse("K[A]p", agents={"A"}) == Knows("A", p)
    with pytest.raises(ParseError):
        parse("K[Z]p", agents={"A", "B"})


def test_render_minimal_parentheses():
    assert render(parse("(p & q) | r")) == "p & q | r"
    assert render(parse("p & (q | r)")) == "p & (q | r)"
    assert render(parse("(p -> q) -> r")) == "(p -> q) -> r"
    assert render(parse("p -> (q -> r)")) == "p -> q -> r"
    assert render(parse("~(p & q)")) == "~(p & q)"


def test_render_unicode():
    assert render_unicode(parse("K[A]p -> <>K[A]p")) == "K_Ap → ◇K_Ap"
    assert render_unicode(parse("~[]p & _|_")) == "¬□p ∧ ⊥"


# random formula trees
leaves = st.sampled_from([p, q, r, FALSUM])


def _extend(children):
    unary = st.builds(Not, children) | st.builds(Box, children) | st.builds(Diamond, children) \
        | st.builds(Knows, st.sampled_from(["A", "B", "i"]), children)
    binary = st.builds(And, children, children) | st.builds(Or, children, children) \
        | st.builds(Implies, children, children)
    return unary | binary


formulas = st.recursive(leaves, _extend, max_leaves=12)


@given(formulas)
@settings(max_examples=300, deadline=None)
def test_render_parse_roundtrip(f):
    assert parse(render(f)) == f


@given(formulas)
@settings(max_examples=200, deadline=None)
def test_subformula_queries(f):
    subs = list(subformulas(f))
    assert subs[0] == f or f in subs
    assert all(depth(g) <= depth(f) for g in subs)
    assert atoms(f) == {g.name for g in subs if isinstance(g, Atom)}
    assert agents(f) == {g.agent for g in subs if isinstance(g, Knows)}
    assert set(subs) <= closure(f)


@given(formulas)
@settings(max_examples=200, deadline=None)
def test_expand_diamonds_removes_diamonds(f):
    g = expand_diamonds(f)
    assert not any(isinstance(h, Diamond) for h in subformulas(g))


def test_closure_adds_box_form_of_diamonds():
    c = closure(parse("<>p"))
    assert parse("~[]~p") in c and parse("[]~p") in c and parse("~p") in c


def test_schema_instantiation():
    inst = instantiate(axioms.CONST, {"phi": "p & q", "i": "A"})
    assert inst == parse("p & q -> <>K[A](p & q)")
    forms = instantiate_all(axioms.KCONT, {"phi": "p", "i": "B"})
    assert forms == (parse("~<>(K[B]p & K[B]~K[B]p)"), parse("~<>K[B](p & ~K[B]p)"))


def test_schema_binding_errors():
    with pytest.raises(BindingError):
        instantiate(axioms.CONST, {"phi": "p"})
    with pytest.raises(BindingError):
        instantiate(axioms.CONST, {"phi": "p", "i": "A", "zeta": "q"})
    with pytest.raises(BindingError):
        instantiate(axioms.CONST, {"phi": "p", "i": parse("q")})


def test_substitute_is_simultaneous():
    f = parse("p -> K[i]q")
    g = substitute(f, {"p": q, "q": p}, {"i": "A"})
    assert g == parse("q -> K[A]p")


def test_schema_from_text_and_str():
    s = Schema.from_text("T", "K[i]phi -> phi", ["phi"], ["i"])
    assert s.metavariables == ("phi", "i")
    assert "K[i]phi -> phi" in str(s)


def test_enumerate_formulas_counts():
    fs = enumerate_formulas(["p"], ["A"], 1)
    assert len(fs) == len(set(fs))
    assert parse("K[A]p") in fs and parse("p -> _|_") in fs
