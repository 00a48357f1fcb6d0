"""The no-go pipeline: FR facts, the three violation refutations, their composition."""
from __future__ import annotations

from dataclasses import dataclass, replace

from . import axioms, fr, kripke
from .formula import Schema, agents, atoms, instantiate, parse, render
from .proof import Checker, ProofResult, ProofScript
from .propositional import LogicMode

KNOWLEDGE_AXIOMS = ("CONST", "KCONT", "DIST")
PIPELINE = ("violating_q", "violating_s", "violating_c", "no_go")

# each violated FR assumption, the script refuting it, and an instance of
# the violation over the experiment's outcome propositions
CASES = (
    ("Q", "quantum predictions", "violating_q", "p_Q & ~K[i]p_Q",
     {"p_Q": "wfail_given_a1", "i": "W"}),
    ("S", "single outcome", "violating_s", "K[i]p_S & K[i]~p_S",
     {"p_S": "w_ok", "i": "W"}),
    ("C", "consistency", "violating_c", "K[i]K[j]p_C & ~K[i]p_C",
     {"p_C": "w_fail", "i": "W", "j": "A"}),
)


@dataclass(frozen=True)
class Row:
    assumption: str
    description: str
    script: str
    rejected: tuple
    deduction: str
    refl_needed: bool

    def to_dict(self) -> dict:
        return {
            "assumption": self.assumption, "description": self.description, "script": self.script,
            "rejected": list(self.rejected), "deduction": self.deduction, "refl_needed": self.refl_needed,
        }


def summary_table(checker: Checker) -> list:
    """Table rows computed by re-checking each script under mutations."""
    rows = []
    for tag, desc, name, _, _ in CASES:
        s = checker.library[name]
        rejected = tuple(a for a in KNOWLEDGE_AXIOMS
                         if a in s.schema_set and not checker.check_proof(s.without(a)).ok)
        intuit = checker.check_proof(s.with_mode(LogicMode.INTUITIONISTIC)).ok
        refl = not checker.check_proof(replace(s, requires_refl=False)).ok
        rows.append(Row(tag, desc, name, rejected,
                        "intuitionistic" if intuit else "classical", refl))
    return rows


@dataclass
class PipelineResult:
    chain: fr.ChainReport
    premises: list
    results: list
    table: list
    dropped: tuple
    mode: str | None

    @property
    def failing(self) -> ProofResult | None:
        return next((r for r in self.results if not r.ok), None)

    @property
    def ok(self) -> bool:
        return self.chain.ok and self.failing is None

    def verdict(self) -> str:
        if self.ok:
            return "CONST & KCONT & DIST & REFL jointly refuted by FR"
        if not self.chain.ok:
            return "FR chain not certified"
        f = self.failing
        return f"pipeline stopped: {f.script} fails at line {f.label}: {f.reason}"

    def to_dict(self) -> dict:
        return {
            "fr": {"p_ok_ok": self.chain.p_ok_ok, "chain_ok": self.chain.ok,
                   "certified": [list(p) for p in fr.certified_propositions(self.chain)]},
            "premises": [{"assumption": a, "formula": f} for a, f in self.premises],
            "scripts": [
                {"name": r.script, "ok": r.ok, "line": r.label, "reason": r.reason}
                for r in self.results
            ],
            "table": [r.to_dict() for r in self.table],
            "dropped": list(self.dropped),
            "mode": self.mode,
            "ok": self.ok,
            "failing_script": self.failing.script if self.failing else None,
            "verdict": self.verdict(),
        }


def _variant(s: ProofScript, drop, mode) -> ProofScript:
    for d in drop:
        s = s.without(d)
    return s.with_mode(mode) if mode else s


def run_pipeline(drop=(), mode: str | None = None, checker: Checker | None = None) -> PipelineResult:
    checker = checker or Checker()
    for d in drop:
        if d not in axioms.SCHEMAS:
            raise KeyError(f"unknown schema {d!r}")
    chain = fr.inference_chain_report()
    premises = []
    for tag, _, _, body, binding in CASES:
        premises.append((tag, render(instantiate(_schema(body), binding))))
    results = [checker.check_proof(_variant(checker.library[n], drop, mode)) for n in PIPELINE]
    return PipelineResult(chain, premises, results, summary_table(checker), tuple(drop), mode)


def _schema(body: str) -> Schema:
    f = parse(body)
    return Schema("premise", f, tuple(sorted(atoms(f))), tuple(sorted(agents(f))))


def certified_model(chain: fr.ChainReport | None = None, known=(), agent: str = "W") -> kripke.KripkeModel:
    """One reflexive world whose interp carries the FR-certified facts.

    Each certified label becomes an atom; ``K[agent]label`` is true only for
    labels listed in ``known``.  This is the whole link between quantum
    predictions and worlds: nothing beyond the certified bits is asserted.
    """
    interp = {}
    for label, bit in fr.certified_propositions(chain):
        interp[(label, "w")] = bit
        interp[(f"K[{agent}]{label}", "w")] = int(label in known)
    return kripke.KripkeModel.build(["w"], [("w", "w")], interp)
