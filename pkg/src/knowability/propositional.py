"""Propositional validity, classical and intuitionistic.

Modal and knowledge subformulas are opaque: ``[]a``, ``<>a`` and ``K[i]a``
behave as atoms keyed by the whole subformula.

Intuitionistic validity is decided with Dyckhoff's contraction-free sequent
calculus (LJT / G4ip), which terminates without loop checking.  The bounded
Kripke-frame search in :func:`ipl_countermodel` is an independent semantic
route used for cross-checking.
"""
from __future__ import annotations

import itertools
from enum import Enum

from .formula import (
    FALSUM, And, Atom, Box, Diamond, Falsum, Formula, Implies, Knows, Not, Or,
)

CLASSICAL_MAX_LEAVES = 22
IPL_STEP_BUDGET = 500_000


class LogicMode(str, Enum):
    INTUITIONISTIC = "intuitionistic"
    CLASSICAL = "classical"

    def admits(self, other: "LogicMode") -> bool:
        """True if reasoning valid in ``other`` is allowed in this mode."""
        return self is LogicMode.CLASSICAL or other is LogicMode.INTUITIONISTIC


class FormulaTooLarge(ValueError):
    pass


def _opaque(f: Formula) -> bool:
    return isinstance(f, (Atom, Box, Diamond, Knows))


def leaves(f: Formula) -> list:
    out: list = []

    def walk(g):
        if _opaque(g):
            if g not in out:
                out.append(g)
        elif isinstance(g, Not):
            walk(g.arg)
        elif isinstance(g, (And, Or, Implies)):
            walk(g.left)
            walk(g.right)

    walk(f)
    return out


def classical_value(f: Formula, assignment: dict) -> bool:
    if _opaque(f):
        return assignment[f]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, Not):
        return not classical_value(f.arg, assignment)
    if isinstance(f, And):
        return classical_value(f.left, assignment) and classical_value(f.right, assignment)
    if isinstance(f, Or):
        return classical_value(f.left, assignment) or classical_value(f.right, assignment)
    return (not classical_value(f.left, assignment)) or classical_value(f.right, assignment)


def classical_tautology(f: Formula) -> bool:
    ls = leaves(f)
    if len(ls) > CLASSICAL_MAX_LEAVES:
        raise FormulaTooLarge(f"{len(ls)} opaque leaves exceeds {CLASSICAL_MAX_LEAVES}")
    for bits in itertools.product((False, True), repeat=len(ls)):
        if not classical_value(f, dict(zip(ls, bits))):
            return False
    return True


# -------------------------------------------------------------- G4ip prover

def _to_core(f: Formula) -> Formula:
    """Replace negation by ``-> _|_``; opaque leaves are kept as they are."""
    if isinstance(f, Not):
        return Implies(_to_core(f.arg), FALSUM)
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_to_core(f.left), _to_core(f.right))
    return f


class _G4ip:
    def __init__(self, budget: int):
        self.budget = budget
        self.memo: dict = {}

    def prove(self, gamma: frozenset, goal: Formula) -> bool:
        key = (gamma, goal)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.budget -= 1
        if self.budget < 0:
            raise FormulaTooLarge("intuitionistic search budget exhausted")
        self.memo[key] = False  # provisional; LJT terminates so no cycles recurse
        result = self._prove(gamma, goal)
        self.memo[key] = result
        return result

    def _prove(self, gamma: frozenset, goal: Formula) -> bool:
        if FALSUM in gamma or goal in gamma:
            return True

        # invertible left rules
        for h in gamma:
            rest = gamma - {h}
            if isinstance(h, And):
                return self.prove(rest | {h.left, h.right}, goal)
            if isinstance(h, Or):
                return self.prove(rest | {h.left}, goal) and self.prove(rest | {h.right}, goal)
            if isinstance(h, Implies):
                a = h.left
                if isinstance(a, Falsum):
                    return self.prove(rest, goal)
                if _opaque(a) and a in gamma:
                    return self.prove(rest | {h.right}, goal)
                if isinstance(a, And):
                    return self.prove(rest | {Implies(a.left, Implies(a.right, h.right))}, goal)
                if isinstance(a, Or):
                    return self.prove(
                        rest | {Implies(a.left, h.right), Implies(a.right, h.right)}, goal
                    )

        # invertible right rules
        if isinstance(goal, And):
            return self.prove(gamma, goal.left) and self.prove(gamma, goal.right)
        if isinstance(goal, Implies):
            return self.prove(gamma | {goal.left}, goal.right)

        # non-invertible choices
        if isinstance(goal, Or):
            if self.prove(gamma, goal.left) or self.prove(gamma, goal.right):
                return True
        for h in gamma:
            if isinstance(h, Implies) and isinstance(h.left, Implies):
                rest = gamma - {h}
                a, b, c = h.left.left, h.left.right, h.right
                if self.prove(rest | {Implies(b, c)}, Implies(a, b)) and self.prove(rest | {c}, goal):
                    return True
        return False


def ipl_provable(f: Formula, budget: int = IPL_STEP_BUDGET) -> bool:
    return _G4ip(budget).prove(frozenset(), _to_core(f))


def pl_tautology(f: Formula, mode: LogicMode | str = LogicMode.CLASSICAL) -> bool:
    """Propositional validity of ``f`` with modal/knowledge subformulas opaque."""
    mode = LogicMode(mode)
    if mode is LogicMode.CLASSICAL:
        return classical_tautology(f)
    return ipl_provable(f)


# ------------------------------------------------- bounded Kripke semantics

def _posets(n: int):
    """Partial orders on range(n) with 0 as least element (rooted frames)."""
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        le = {(a, a) for a in range(n)} | {p for p, keep in zip(pairs, bits) if keep}
        if any((b, a) in le for (a, b) in le if a != b):
            continue
        if any((a, d) not in le for (a, b) in le for (c, d) in le if b == c):
            continue
        if all((0, b) in le for b in range(n)):
            yield le


def _forces(le, n, val, w, f) -> bool:
    if _opaque(f):
        return w in val[f]
    if isinstance(f, Falsum):
        return False
    if isinstance(f, And):
        return _forces(le, n, val, w, f.left) and _forces(le, n, val, w, f.right)
    if isinstance(f, Or):
        return _forces(le, n, val, w, f.left) or _forces(le, n, val, w, f.right)
    if isinstance(f, Not):
        return all(not _forces(le, n, val, v, f.arg) for v in range(n) if (w, v) in le)
    return all(
        (not _forces(le, n, val, v, f.left)) or _forces(le, n, val, v, f.right)
        for v in range(n)
        if (w, v) in le
    )


def ipl_countermodel(f: Formula, max_worlds: int = 3):
    """Search rooted Kripke frames of up to ``max_worlds`` points for a refutation.

    Returns ``(order, valuation)`` or ``None``.  Absence of a countermodel at
    this size is evidence, not proof, of intuitionistic validity.
    """
    ls = leaves(f)
    for n in range(1, max_worlds + 1):
        for le in _posets(n):
            ups = [
                frozenset(s)
                for r in range(n + 1)
                for s in itertools.combinations(range(n), r)
                if all(b in s for a in s for b in range(n) if (a, b) in le)
            ]
            for choice in itertools.product(ups, repeat=len(ls)):
                val = dict(zip(ls, choice))
                if not _forces(le, n, val, 0, f):
                    return le, val
    return None
