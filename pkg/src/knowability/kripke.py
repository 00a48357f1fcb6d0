"""Kripke models for EMPL: valuation, validity, frame checks, schema checks,
and bounded countermodel search.

Knowledge formulas are opaque: the interpretation assigns ``K[i]a`` a truth
value at each world directly, exactly as it does atoms.  Every model carries a
finite signature (a subformula-closed set) and its interpretation must be
total on the atoms and knowledge formulas in it.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import (
    FALSUM, And, Atom, Box, Diamond, Falsum, Formula, Implies, Knows, Not, Or,
    ParseError, Schema, all_bindings, closure, closure_of, instantiate_all,
    parse, render, subformulas,
)

DEFAULT_BUDGET = 1 << 26


class SignatureError(ValueError):
    """A formula needs an interpretation value the model does not have."""


class BudgetExceeded(ValueError):
    pass


class ModelFileError(ValueError):
    pass


def is_leaf(f: Formula) -> bool:
    return isinstance(f, (Atom, Knows))


def eval_leaves(f: Formula) -> set:
    """Atoms and knowledge formulas that valuation reads (not inside any K)."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if is_leaf(g):
            out.add(g)
        elif isinstance(g, (Not, Box, Diamond)):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            stack += [g.left, g.right]
    return out


def _sort_key(f: Formula):
    s = render(f)
    return (len(s), s)


@dataclass(frozen=True, eq=False)
class KripkeModel:
    worlds: tuple
    relation: frozenset
    interp: Mapping
    signature: frozenset = field(default=frozenset())

    def __post_init__(self):
        if not self.worlds:
            raise ValueError("a model needs at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world ids")
        ws = set(self.worlds)
        for u, v in self.relation:
            if u not in ws or v not in ws:
                raise ValueError(f"relation pair ({u}, {v}) mentions an unknown world")
        for (f, w) in self.interp:
            if not is_leaf(f):
                raise ValueError(f"interpretation given for non-atomic, non-K formula {render(f)}")
            if w not in ws:
                raise ValueError(f"interpretation mentions unknown world {w}")
        sig = closure_of(list(self.signature) + [f for f, _ in self.interp])
        object.__setattr__(self, "signature", sig)
        missing = [
            (render(f), w) for f in sig if is_leaf(f) for w in self.worlds if (f, w) not in self.interp
        ]
        if missing:
            raise ValueError(f"interpretation not total on signature, missing {missing[:5]}")

    @classmethod
    def build(cls, worlds: Iterable, relation: Iterable, interp: Mapping,
              signature: Iterable = (), default: bool | None = None) -> "KripkeModel":
        """Convenience constructor; formulas may be given as text.

        With ``default`` set, leaves of the signature not mentioned in
        ``interp`` take that value.
        """
        worlds = tuple(worlds)
        table = {}
        for (f, w), bit in interp.items():
            f = parse(f) if isinstance(f, str) else f
            table[(f, w)] = bool(bit)
        sig = closure_of([parse(s) if isinstance(s, str) else s for s in signature] + [f for f, _ in table])
        if default is not None:
            for f in sig:
                if is_leaf(f):
                    for w in worlds:
                        table.setdefault((f, w), bool(default))
        return cls(worlds, frozenset(tuple(p) for p in relation), table, sig)

    def successors(self, w) -> list:
        return [v for v in self.worlds if (w, v) in self.relation]

    def describe(self) -> str:
        lines = [f"worlds: {' '.join(map(str, self.worlds))}"]
        rel = sorted(self.relation, key=lambda p: (self.worlds.index(p[0]), self.worlds.index(p[1])))
        lines.append("relation: " + (", ".join(f"{u}->{v}" for u, v in rel) or "(empty)"))
        for f in sorted({f for f, _ in self.interp}, key=_sort_key):
            bits = " ".join(f"{w}={int(self.interp[(f, w)])}" for w in self.worlds)
            lines.append(f"  {render(f)}: {bits}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "relation": [list(p) for p in sorted(self.relation, key=lambda p: (self.worlds.index(p[0]), self.worlds.index(p[1])))],
            "interp": [
                [render(f), w, int(self.interp[(f, w)])]
                for f in sorted({f for f, _ in self.interp}, key=_sort_key)
                for w in self.worlds
            ],
        }


@dataclass(frozen=True)
class FrameReport:
    reflexive: bool
    transitive: bool
    symmetric: bool


def frame_properties(m: KripkeModel) -> FrameReport:
    R = m.relation
    return FrameReport(
        reflexive=all((w, w) in R for w in m.worlds),
        transitive=all((u, x) in R for (u, v) in R for (y, x) in R if v == y),
        symmetric=all((v, u) in R for (u, v) in R),
    )


def valuate(m: KripkeModel, f: Formula, w) -> bool:
    if is_leaf(f):
        try:
            return m.interp[(f, w)]
        except KeyError:
            raise SignatureError(f"{render(f)} is outside the model signature") from None
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not valuate(m, f.arg, w)
    if isinstance(f, And):
        return valuate(m, f.left, w) and valuate(m, f.right, w)
    if isinstance(f, Or):
        return valuate(m, f.left, w) or valuate(m, f.right, w)
    if isinstance(f, Implies):
        return (not valuate(m, f.left, w)) or valuate(m, f.right, w)
    if isinstance(f, Box):
        return all(valuate(m, f.arg, v) for v in m.successors(w))
    if isinstance(f, Diamond):
        return any(valuate(m, f.arg, v) for v in m.successors(w))
    raise TypeError(f"not a formula: {f!r}")


def is_valid_in_model(m: KripkeModel, f: Formula) -> bool:
    return all(valuate(m, f, w) for w in m.worlds)


def failing_worlds(m: KripkeModel, f: Formula) -> list:
    return [w for w in m.worlds if not valuate(m, f, w)]


# ------------------------------------------------------------- schema check

@dataclass
class Counterexample:
    bindings: dict
    world: object
    instance: Formula

    def __str__(self):
        b = ", ".join(f"{k}:={v if isinstance(v, str) else render(v)}" for k, v in self.bindings.items())
        return f"{render(self.instance)} fails at {self.world} ({b})"


@dataclass
class SchemaReport:
    schema: str
    counterexample: Counterexample | None
    checked: int
    skipped: int

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def check_schema(m: KripkeModel, schema: Schema, agent_ids: Iterable[str],
                 strict: bool = False, ranges: Iterable[Formula] | None = None) -> SchemaReport:
    """Check every instance of ``schema`` with metavariables over the signature.

    Instances that need leaves outside the signature are skipped, or raise
    :class:`SignatureError` when ``strict``.
    """
    formulas = sorted(ranges if ranges is not None else m.signature, key=_sort_key)
    checked = skipped = 0
    for b in all_bindings(schema, formulas, agent_ids):
        for inst in instantiate_all(schema, b):
            if any((leaf, m.worlds[0]) not in m.interp for leaf in eval_leaves(inst)):
                if strict:
                    raise SignatureError(f"signature not closed under {schema.name} instance {render(inst)}")
                skipped += 1
                continue
            checked += 1
            for w in m.worlds:
                if not valuate(m, inst, w):
                    return SchemaReport(schema.name, Counterexample(b, w, inst), checked, skipped)
    return SchemaReport(schema.name, None, checked, skipped)


# ------------------------------------------------------- countermodel search

@dataclass(frozen=True)
class Frame:
    require_reflexive: bool = False
    require_transitive: bool = False
    require_symmetric: bool = False
    forbid_reflexive: bool = False

    def admits(self, n: int, pairs: frozenset) -> bool:
        if self.require_reflexive and any((w, w) not in pairs for w in range(n)):
            return False
        if self.forbid_reflexive and all((w, w) in pairs for w in range(n)):
            return False
        if self.require_symmetric and any((v, u) not in pairs for u, v in pairs):
            return False
        if self.require_transitive and any(
            (u, x) not in pairs for (u, v) in pairs for (y, x) in pairs if v == y
        ):
            return False
        return True


@dataclass
class SearchResult:
    model: KripkeModel | None
    world: object = None
    examined: int = 0
    instances: int = 0

    @property
    def exhausted(self) -> bool:
        return self.model is None


def _relations(n: int, frame: Frame):
    pairs = [(u, v) for u in range(n) for v in range(n)]
    for mask in range(1 << len(pairs)):
        rel = frozenset(p for i, p in enumerate(pairs) if mask >> i & 1)
        if frame.admits(n, rel):
            yield rel


class _VecEval:
    """Evaluate formulas at all worlds for a whole block of interpretations."""

    def __init__(self, n, rel, leaf_index, codes):
        self.n = n
        self.succ = [[v for v in range(n) if (u, v) in rel] for u in range(n)]
        self.leaf_index = leaf_index
        self.L = len(leaf_index)
        self.codes = codes
        self.cache: dict = {}
        self.true = np.ones(len(codes), dtype=bool)

    def at(self, f, w):
        key = (f, w)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if is_leaf(f):
            bit = np.uint64(w * self.L + self.leaf_index[f])
            r = ((self.codes >> bit) & np.uint64(1)).astype(bool)
        elif isinstance(f, Falsum):
            r = ~self.true
        elif isinstance(f, Not):
            r = ~self.at(f.arg, w)
        elif isinstance(f, And):
            r = self.at(f.left, w) & self.at(f.right, w)
        elif isinstance(f, Or):
            r = self.at(f.left, w) | self.at(f.right, w)
        elif isinstance(f, Implies):
            r = ~self.at(f.left, w) | self.at(f.right, w)
        elif isinstance(f, Box):
            r = self.true.copy()
            for v in self.succ[w]:
                r &= self.at(f.arg, v)
        elif isinstance(f, Diamond):
            r = ~self.true
            for v in self.succ[w]:
                r = r | self.at(f.arg, v)
        else:
            raise TypeError(f)
        self.cache[key] = r
        return r

    def everywhere(self, f):
        r = self.true.copy()
        for w in range(self.n):
            r &= self.at(f, w)
        return r


def expand_assumptions(assumed: Sequence, target: Formula, agent_ids: Iterable[str]) -> list:
    """Schemas are instantiated with formula metavariables over the target's
    subformulas; plain formulas are taken as given."""
    base = sorted(closure(target), key=_sort_key)
    out: list = []
    seen: set = set()
    for a in assumed:
        if isinstance(a, Schema):
            for b in all_bindings(a, base, agent_ids):
                for inst in instantiate_all(a, b):
                    if inst not in seen:
                        seen.add(inst)
                        out.append(inst)
        else:
            f = parse(a) if isinstance(a, str) else a
            if f not in seen:
                seen.add(f)
                out.append(f)
    return out


def search_countermodel(assumed: Sequence, target: Formula, max_worlds: int = 2,
                        agent_ids: Iterable[str] = ("A",), frame: Frame = Frame(),
                        budget: int = DEFAULT_BUDGET, block: int = 1 << 16) -> SearchResult:
    """Find the first model (by world count, relation mask, interpretation mask)
    where every assumed instance holds at every world but ``target`` fails
    somewhere.

    An exhausted result says only that no such model exists within the bounds.
    """
    agent_ids = sorted(set(agent_ids) | {g.agent for g in subformulas(target) if isinstance(g, Knows)})
    instances = expand_assumptions(assumed, target, agent_ids)
    leaves: set = eval_leaves(target)
    for inst in instances:
        leaves |= eval_leaves(inst)
    leaves_sorted = sorted(leaves, key=_sort_key)
    leaf_index = {f: i for i, f in enumerate(leaves_sorted)}
    L = len(leaves_sorted)
    if L * max_worlds > 62:
        raise BudgetExceeded(f"{L} leaves x {max_worlds} worlds does not fit a 64-bit interpretation mask")

    plan = []
    total = 0
    for n in range(1, max_worlds + 1):
        rels = list(_relations(n, frame))
        plan.append((n, rels))
        total += len(rels) * (1 << (L * n))
    if total > budget:
        raise BudgetExceeded(f"{total} candidate models exceeds budget {budget}")

    signature = closure_of(instances + [target])
    examined = 0
    for n, rels in plan:
        space = 1 << (L * n)
        for rel in rels:
            for start in range(0, space, block):
                codes = np.arange(start, min(space, start + block), dtype=np.uint64)
                ev = _VecEval(n, rel, leaf_index, codes)
                ok = ev.true.copy()
                for inst in instances:
                    ok &= ev.everywhere(inst)
                    if not ok.any():
                        break
                examined += len(codes)
                if not ok.any():
                    continue
                ok &= ~ev.everywhere(target)
                hits = np.flatnonzero(ok)
                if len(hits):
                    code = int(codes[hits[0]])
                    model = _decode(n, rel, code, leaves_sorted, signature)
                    bad = failing_worlds(model, target)
                    return SearchResult(model, bad[0], examined, len(instances))
    return SearchResult(None, None, examined, len(instances))


def _decode(n, rel, code, leaves_sorted, signature) -> KripkeModel:
    worlds = tuple(f"w{k}" for k in range(n))
    L = len(leaves_sorted)
    interp = {}
    for w in range(n):
        for i, f in enumerate(leaves_sorted):
            interp[(f, worlds[w])] = bool(code >> (w * L + i) & 1)
    # leaves only reachable inside K arguments never affect valuation
    for f in signature:
        if is_leaf(f):
            for w in worlds:
                interp.setdefault((f, w), False)
    relation = frozenset((worlds[u], worlds[v]) for u, v in rel)
    return KripkeModel(worlds, relation, interp, signature)


# --------------------------------------------------------------- file format

def model_from_dict(data: Mapping) -> KripkeModel:
    try:
        worlds = [str(w) for w in data["worlds"]]
        relation = [tuple(map(str, p)) for p in data.get("relation", [])]
        interp = {}
        for k, entry in enumerate(data.get("interp", [])):
            text, w, bit = entry
            try:
                f = parse(text)
            except ParseError as e:
                raise ModelFileError(f"interp[{k}]: {e}") from None
            if bit not in (0, 1, True, False):
                raise ModelFileError(f"interp[{k}]: truth value must be 0 or 1")
            interp[(f, str(w))] = bool(bit)
        signature = []
        for k, text in enumerate(data.get("signature", [])):
            try:
                signature.append(parse(text))
            except ParseError as e:
                raise ModelFileError(f"signature[{k}]: {e}") from None
        default = data.get("default")
        return KripkeModel.build(worlds, relation, interp, signature,
                                 default=None if default is None else bool(default))
    except KeyError as e:
        raise ModelFileError(f"missing field {e}") from None
    except (TypeError, ValueError) as e:
        if isinstance(e, ModelFileError):
            raise
        raise ModelFileError(str(e)) from None


def load_model(path) -> KripkeModel:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    try:
        return model_from_dict(data)
    except ModelFileError as e:
        raise ModelFileError(f"{path}: {e}") from None


def dump_model(m: KripkeModel) -> str:
    return json.dumps(m.to_dict(), indent=2)
