"""EMPL formula trees, concrete syntax, schemas and subformula closure.

Concrete syntax (ASCII)::

    ~ a        negation          [] a     necessity
    <> a       possibility       K[i] a   agent i knows a
    a & b      conjunction       a | b    disjunction
    a -> b     implication       _|_      falsum

Prefix operators bind tightest, then ``&``, then ``|``, then ``->``.
``&`` and ``|`` associate to the left, ``->`` to the right.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


class ParseError(ValueError):
    """Raised for malformed formula text; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


class BindingError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    arg: "Formula"


@dataclass(frozen=True)
class Diamond:
    arg: "Formula"


@dataclass(frozen=True)
class Knows:
    agent: str
    arg: "Formula"


@dataclass(frozen=True)
class Falsum:
    pass


FALSUM = Falsum()

Formula = Union[Atom, Not, And, Or, Implies, Box, Diamond, Knows, Falsum]

UNARY = (Not, Box, Diamond, Knows)
BINARY = (And, Or, Implies)


def children(f: Formula) -> tuple:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, UNARY):
        return (f.arg,)
    return ()


def rebuild(f: Formula, kids: tuple) -> Formula:
    """Same constructor as ``f`` with new children."""
    if isinstance(f, BINARY):
        return type(f)(*kids)
    if isinstance(f, Knows):
        return Knows(f.agent, kids[0])
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    return f


# ---------------------------------------------------------------- parsing

_IDENT = r"[a-zA-Z][a-zA-Z0-9_]*"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<knows>K\[\s*(?P<agent>{_IDENT})\s*\])
  | (?P<falsum>_\|_)
  | (?P<op>->|<>|\[\]|[~&|()])
  | (?P<ident>{_IDENT})
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind == "agent":
            kind = "knows"
        if kind == "knows":
            tokens.append(("knows", m.group("agent"), pos))
        elif kind == "op":
            tokens.append((m.group("op"), m.group("op"), pos))
        elif kind != "ws":
            tokens.append((kind, m.group(kind), pos))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Iterable[str] | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = None if agents is None else set(agents)

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def take(self, kind: str | None = None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.take()
        if kind == "~":
            return Not(self.unary())
        if kind == "[]":
            return Box(self.unary())
        if kind == "<>":
            return Diamond(self.unary())
        if kind == "knows":
            if self.agents is not None and value not in self.agents:
                raise ParseError(f"unknown agent {value!r}", pos, self.text)
            return Knows(value, self.unary())
        if kind == "(":
            f = self.formula()
            self.take(")")
            return f
        if kind == "falsum":
            return FALSUM
        if kind == "ident":
            return Atom(value)
        got = "end of input" if kind == "eof" else repr(value)
        raise ParseError(f"expected a formula, found {got}", pos, self.text)


def parse(text: str, agents: Iterable[str] | None = None) -> Formula:
    """Parse ``text`` into a formula tree.

    If ``agents`` is given, any ``K[x]`` with ``x`` outside it is rejected.
    """
    p = _Parser(text, agents)
    f = p.formula()
    p.take("eof")
    return f


# --------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3}

ASCII = {Implies: "->", Or: "|", And: "&", Not: "~", Box: "[]", Diamond: "<>",
         Falsum: "_|_", Knows: "K[{}]"}
UNICODE = {Implies: "→", Or: "∨", And: "∧", Not: "¬", Box: "□", Diamond: "◇",
           Falsum: "⊥", Knows: "K_{}"}


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), 4)


def render(f: Formula, symbols: Mapping = ASCII) -> str:
    """Minimal-parenthesis rendering; ``parse(render(f)) == f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Falsum):
        return symbols[Falsum]
    if isinstance(f, UNARY):
        prefix = symbols[type(f)]
        if isinstance(f, Knows):
            prefix = prefix.format(f.agent)
        inner = render(f.arg, symbols)
        if _prec(f.arg) < 4:
            inner = f"({inner})"
        return prefix + inner
    p = _PREC[type(f)]
    left, right = render(f.left, symbols), render(f.right, symbols)
    if isinstance(f, Implies):
        # right-associative
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {symbols[type(f)]} {right}"


def render_unicode(f: Formula) -> str:
    return render(f, UNICODE)


# ---------------------------------------------------------------- queries

def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from subformulas(c)


def atoms(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Atom)}


def agents(f: Formula) -> set[str]:
    return {g.agent for g in subformulas(f) if isinstance(g, Knows)}


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(c) for c in kids)


def is_propositional(f: Formula) -> bool:
    return not any(isinstance(g, (Box, Diamond, Knows)) for g in subformulas(f))


def closure(f: Formula) -> frozenset:
    """All subformulas of ``f``, plus the ``~[]~`` expansion of every diamond."""
    out: set = set()
    _close(f, out)
    return frozenset(out)


def _close(f: Formula, out: set) -> None:
    if f in out:
        return
    out.add(f)
    for c in children(f):
        _close(c, out)
    if isinstance(f, Diamond):
        _close(Not(Box(Not(f.arg))), out)


def closure_of(formulas: Iterable[Formula]) -> frozenset:
    out: set = set()
    for f in formulas:
        _close(f, out)
    return frozenset(out)


def expand_diamonds(f: Formula) -> Formula:
    """Rewrite every ``<>a`` as ``~[]~a``."""
    kids = tuple(expand_diamonds(c) for c in children(f))
    if isinstance(f, Diamond):
        return Not(Box(Not(kids[0])))
    return rebuild(f, kids)


def substitute(
    f: Formula,
    formulas: Mapping[str, Formula] | None = None,
    agent_map: Mapping[str, str] | None = None,
) -> Formula:
    """Simultaneous replacement of atoms and agent names."""
    formulas = formulas or {}
    agent_map = agent_map or {}
    if isinstance(f, Atom):
        return formulas.get(f.name, f)
    kids = tuple(substitute(c, formulas, agent_map) for c in children(f))
    if isinstance(f, Knows):
        return Knows(agent_map.get(f.agent, f.agent), kids[0])
    return rebuild(f, kids)


# ---------------------------------------------------------------- schemas

@dataclass(frozen=True)
class Schema:
    """A formula with metavariables.

    Formula metavariables appear in ``body`` as atoms named in ``formula_vars``;
    agent metavariables as ``K[x]`` with ``x`` in ``agent_vars``.  ``variants``
    holds further bodies over the same metavariables that count as instances
    of the same schema.
    """

    name: str
    body: Formula
    formula_vars: tuple = ()
    agent_vars: tuple = ()
    variants: tuple = field(default=())

    @classmethod
    def from_text(cls, name, text, formula_vars=(), agent_vars=(), variants=()):
        return cls(
            name,
            parse(text),
            tuple(formula_vars),
            tuple(agent_vars),
            tuple(parse(v) for v in variants),
        )

    @property
    def metavariables(self) -> tuple:
        return self.formula_vars + self.agent_vars

    @property
    def forms(self) -> tuple:
        return (self.body,) + self.variants

    def __str__(self) -> str:
        return f"{self.name}: {render(self.body)}"


def _split_bindings(schema: Schema, bindings: Mapping) -> tuple[dict, dict]:
    missing = [v for v in schema.metavariables if v not in bindings]
    if missing:
        raise BindingError(f"{schema.name}: missing binding for {', '.join(missing)}")
    extra = [v for v in bindings if v not in schema.metavariables]
    if extra:
        raise BindingError(f"{schema.name}: unknown metavariable {', '.join(extra)}")
    fmap, amap = {}, {}
    for v in schema.formula_vars:
        val = bindings[v]
        if isinstance(val, str):
            val = parse(val)
        fmap[v] = val
    for v in schema.agent_vars:
        val = bindings[v]
        if not isinstance(val, str):
            raise BindingError(f"{schema.name}: agent variable {v} bound to a formula")
        amap[v] = val
    return fmap, amap


def instantiate(schema: Schema, bindings: Mapping) -> Formula:
    """Fill every metavariable of ``schema`` (formulas may be given as text)."""
    fmap, amap = _split_bindings(schema, bindings)
    return substitute(schema.body, fmap, amap)


def instantiate_all(schema: Schema, bindings: Mapping) -> tuple:
    """Instances of every form of ``schema`` under one binding."""
    fmap, amap = _split_bindings(schema, bindings)
    return tuple(substitute(b, fmap, amap) for b in schema.forms)


def all_bindings(schema: Schema, formulas: Iterable[Formula], agent_ids: Iterable[str]):
    """Every binding of the schema's metavariables over the given ranges."""
    formulas = list(formulas)
    agent_ids = sorted(agent_ids)
    for fvals in itertools.product(formulas, repeat=len(schema.formula_vars)):
        for avals in itertools.product(agent_ids, repeat=len(schema.agent_vars)):
            b = dict(zip(schema.formula_vars, fvals))
            b.update(zip(schema.agent_vars, avals))
            yield b


def enumerate_formulas(atom_names, agent_ids, max_depth: int) -> list:
    """All formula trees up to ``max_depth`` (grows very fast; keep inputs tiny)."""
    level = [Atom(a) for a in atom_names] + [FALSUM]
    everything = list(level)
    for _ in range(max_depth):
        new = []
        for f in everything:
            new += [Not(f), Box(f), Diamond(f)] + [Knows(a, f) for a in agent_ids]
        for f, g in itertools.product(everything, repeat=2):
            new += [And(f, g), Or(f, g), Implies(f, g)]
        seen = set(everything)
        everything += [f for f in new if f not in seen and not seen.add(f)]
    return everything
