"""Exhaustive small-model enumeration shared by the semantic tests."""
import itertools

from knowability.formula import And, Atom, Box, Diamond, Implies, Knows, Not, Or
from knowability.kripke import KripkeModel, valuate

LEAVES = (Atom("p"), Atom("q"), Knows("A", Atom("p")), Knows("A", Atom("q")))


def formula_pool():
    base = list(LEAVES)
    pool = base + [Not(b) for b in base] + [Box(b) for b in base] + [Diamond(b) for b in base]
    for a, b in itertools.product(base, repeat=2):
        pool += [And(a, b), Or(a, b), Implies(a, b)]
    return pool


def all_models(max_worlds=2):
    """Every model on <= max_worlds worlds over atoms p, q and agent A."""
    for n in range(1, max_worlds + 1):
        worlds = tuple(f"w{k}" for k in range(n))
        pairs = [(u, v) for u in worlds for v in worlds]
        for rbits in itertools.product((0, 1), repeat=len(pairs)):
            rel = frozenset(pr for pr, b in zip(pairs, rbits) if b)
            cells = [(f, w) for f in LEAVES for w in worlds]
            for ibits in itertools.product((False, True), repeat=len(cells)):
                yield KripkeModel(worlds, rel, dict(zip(cells, ibits)), frozenset(LEAVES))


def extension(m, f) -> tuple:
    return tuple(valuate(m, f, w) for w in m.worlds)


def semantic_suite(max_worlds=2) -> dict:
    """Counts for the K axiom, the diamond/box duality and T on reflexive frames."""
    pool = formula_pool()
    out = {"models": 0, "k_failures": 0, "k_instances": 0, "dual_failures": 0,
           "t_reflexive_failures": 0, "t_irreflexive_refuted": 0}
    for m in all_models(max_worlds):
        out["models"] += 1
        refl = all((w, w) in m.relation for w in m.worlds)
        # one representative formula per extension keeps the pair loop small;
        # instances are still evaluated on real formulas via valuate
        reps = {}
        for f in pool:
            reps.setdefault(extension(m, f), f)
        for a, b in itertools.product(reps.values(), repeat=2):
            k = Implies(Box(Implies(a, b)), Implies(Box(a), Box(b)))
            out["k_instances"] += 1
            if not all(extension(m, k)):
                out["k_failures"] += 1
        for f in pool:
            if extension(m, Diamond(f)) != extension(m, Not(Box(Not(f)))):
                out["dual_failures"] += 1
            t_ok = all(extension(m, Implies(f, Diamond(f))))
            if refl and not t_ok:
                out["t_reflexive_failures"] += 1
            if not refl and not t_ok:
                out["t_irreflexive_refuted"] += 1
    return out

