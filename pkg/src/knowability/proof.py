"""Hilbert-style proof checker for EMPL.

A script is a numbered list of formulas, each with a justification.  Lines
that depend on an ``ASSUME`` line are tracked so that rules only sound for
theorems (necessitation, substitution, monotonicity) refuse them.

Script file format::

    name: fitch
    mode: intuitionistic
    requires_refl: false
    schemas: CONST, KCONT
    note: free text, may repeat

    1.  psi -> <>K[i]psi              ;; AX CONST{phi:=psi, i:=i}
    1a. (phi & ~K[i]phi) -> ...       ;; SUBST 1 {psi:=phi & ~K[i]phi}

Justifications::

    ASSUME                 premise
    AX NAME{v:=..., ...}   instance of a schema or of a derived lemma
    MP a b                 one of a, b is (other -> this)
    NEC a                  this = [](a)
    CONTRAPOS a            a = (x -> y), this = (~y -> ~x)
    CONNID a fwd|bwd       (x -> y) to ~(x & ~y); bwd is classical only
    REFL [a]               this = <>(a); with no line, this = (x -> <>x)
    BOT a b                a and b are x and ~x, this = _|_
    IPL [a ...]            intuitionistic propositional consequence
    CPL [a ...]            classical propositional consequence
    DNE [a]                ~~x -> x, or x from a = ~~x (classical only)
    SUBST a {v:=...}       uniform substitution of atoms in a theorem
    KMONO a                a = (x -> y) theorem, this = K[g]x -> K[g]y
    BOXMONO a / DIAMONO a  same under [] / <>
    DIST a                 a = K[g]x & K[g]y, this = K[g](x & y)
    DIST-IN a              a = K[g](K[h]x & K[h]y), this = K[g]K[h](x & y)
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Mapping, Sequence

from . import axioms
from .formula import (
    FALSUM, And, Box, Diamond, Falsum, Formula, Implies, Knows, Not,
    ParseError, Schema, instantiate_all, parse, render, substitute,
)
from .propositional import FormulaTooLarge, LogicMode, pl_tautology

RULES = {
    "ASSUME", "AX", "MP", "NEC", "CONTRAPOS", "CONNID", "REFL", "BOT", "IPL",
    "CPL", "DNE", "SUBST", "KMONO", "BOXMONO", "DIAMONO", "DIST", "DIST-IN",
}

# rules whose premises must be theorems (assumption-free)
THEOREM_ONLY = {"NEC", "SUBST", "KMONO", "BOXMONO", "DIAMONO"}


class ScriptError(ValueError):
    """Malformed script text; ``lineno`` is 1-based within the file."""

    def __init__(self, message: str, lineno: int | None = None, source: str = ""):
        self.lineno = lineno
        where = f"{source}:" if source else ""
        where += f"{lineno}: " if lineno is not None else (" " if source else "")
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class Justification:
    rule: str
    refs: tuple = ()
    schema: str | None = None
    bindings: tuple = ()  # (name, text) pairs, kept as text until use
    direction: str | None = None

    def __str__(self) -> str:
        parts = [self.rule]
        if self.schema:
            b = ", ".join(f"{k}:={v}" for k, v in self.bindings)
            parts = [f"AX {self.schema}{{{b}}}"]
        parts += list(self.refs)
        if self.rule == "SUBST":
            parts.append("{" + ", ".join(f"{k}:={v}" for k, v in self.bindings) + "}")
        if self.direction:
            parts.append(self.direction)
        return " ".join(parts)


@dataclass(frozen=True)
class ProofLine:
    label: str
    formula: Formula
    justification: Justification
    comment: str = ""


@dataclass(frozen=True)
class ProofScript:
    name: str
    mode: LogicMode
    requires_refl: bool
    schema_set: tuple
    lines: tuple
    notes: tuple = ()
    conclusion: Formula | None = None

    def index_of(self, label: str) -> int:
        for k, line in enumerate(self.lines):
            if line.label == label:
                return k
        raise KeyError(label)

    def without(self, schema: str) -> "ProofScript":
        return replace(self, schema_set=tuple(s for s in self.schema_set if s != schema))

    def with_mode(self, mode) -> "ProofScript":
        return replace(self, mode=LogicMode(mode))

    def cited(self) -> set:
        """Schema names cited directly by AX lines or implied by DIST rules."""
        out = set()
        for line in self.lines:
            j = line.justification
            if j.rule == "AX":
                out.add(j.schema)
            elif j.rule in ("DIST", "DIST-IN"):
                out.add("DIST")
        return out

    def assumptions(self) -> list:
        return [l.formula for l in self.lines if l.justification.rule == "ASSUME"]


@dataclass(frozen=True)
class LineCheck:
    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class ProofResult:
    script: str
    ok: bool
    index: int | None = None
    label: str | None = None
    reason: str = ""

    def __str__(self) -> str:
        if self.ok:
            return f"{self.script}: ok"
        return f"{self.script}: FAILED at line {self.label}: {self.reason}"


# ------------------------------------------------------------------ parsing

_HEADER_RE = re.compile(r"^(name|mode|requires_refl|schemas|note|conclusion)\s*:\s*(.*)$")
_LINE_RE = re.compile(r"^(?P<label>\d+[a-z]*)\.\s+(?P<formula>.*?)\s*;;\s*(?P<just>.*?)\s*$")
_AX_RE = re.compile(r"^AX\s+(?P<name>[A-Za-z_][A-Za-z0-9_*\-]*)\s*(?:\{(?P<b>[^}]*)\})?\s*$")
_SUBST_RE = re.compile(r"^SUBST\s+(?P<ref>\S+)\s*\{(?P<b>[^}]*)\}\s*$")


def _parse_bindings(text: str) -> tuple:
    out = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        if ":=" not in part:
            raise ValueError(f"binding {part!r} lacks ':='")
        k, v = part.split(":=", 1)
        out.append((k.strip(), v.strip()))
    return tuple(out)


def parse_justification(text: str) -> Justification:
    text = text.strip()
    if text.startswith("AX"):
        m = _AX_RE.match(text)
        if not m:
            raise ValueError(f"bad AX justification {text!r}")
        return Justification("AX", schema=m.group("name"), bindings=_parse_bindings(m.group("b") or ""))
    if text.startswith("SUBST"):
        m = _SUBST_RE.match(text)
        if not m:
            raise ValueError(f"bad SUBST justification {text!r}")
        return Justification("SUBST", refs=(m.group("ref"),), bindings=_parse_bindings(m.group("b")))
    words = text.split()
    if not words or words[0] not in RULES:
        raise ValueError(f"unknown rule in {text!r}")
    rule, args = words[0], words[1:]
    if rule == "CONNID":
        if len(args) != 2 or args[1] not in ("fwd", "bwd"):
            raise ValueError("CONNID takes a line and fwd|bwd")
        return Justification(rule, refs=(args[0],), direction=args[1])
    return Justification(rule, refs=tuple(args))


def parse_script(text: str, source: str = "") -> ProofScript:
    header: dict = {"note": []}
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        body = body.strip()
        if not body:
            continue
        m = _HEADER_RE.match(body)
        if m and not lines:
            key, value = m.groups()
            if key == "note":
                header["note"].append(value.strip())
            else:
                header[key] = value.strip()
            continue
        m = _LINE_RE.match(body)
        if not m:
            raise ScriptError(f"cannot read line {body!r}", lineno, source)
        try:
            f = parse(m.group("formula"))
        except ParseError as e:
            raise ScriptError(f"formula: {e}", lineno, source) from None
        try:
            j = parse_justification(m.group("just"))
        except ValueError as e:
            raise ScriptError(str(e), lineno, source) from None
        label = m.group("label")
        if any(l.label == label for l in lines):
            raise ScriptError(f"duplicate line label {label}", lineno, source)
        lines.append(ProofLine(label, f, j, comment.strip()))
    if "name" not in header:
        raise ScriptError("missing 'name:' header", None, source)
    try:
        mode = LogicMode(header.get("mode", "classical"))
    except ValueError:
        raise ScriptError(f"unknown mode {header['mode']!r}", None, source) from None
    refl = header.get("requires_refl", "false").lower()
    if refl not in ("true", "false"):
        raise ScriptError("requires_refl must be true or false", None, source)
    schemas = tuple(s.strip() for s in header.get("schemas", "").split(",") if s.strip())
    conclusion = parse(header["conclusion"]) if "conclusion" in header else None
    return ProofScript(
        header["name"], mode, refl == "true", schemas, tuple(lines),
        tuple(header["note"]), conclusion,
    )


def format_script(script: ProofScript) -> str:
    out = [
        f"name: {script.name}",
        f"mode: {script.mode.value}",
        f"requires_refl: {str(script.requires_refl).lower()}",
        f"schemas: {', '.join(script.schema_set)}",
    ]
    out += [f"note: {n}" for n in script.notes]
    if script.conclusion is not None:
        out.append(f"conclusion: {render(script.conclusion)}")
    out.append("")
    width = max((len(l.label) for l in script.lines), default=1) + 2
    for l in script.lines:
        text = f"{(l.label + '.').ljust(width)}{render(l.formula)} ;; {l.justification}"
        if l.comment:
            text += f"  # {l.comment}"
        out.append(text)
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------- checking

def theorem_of(script: ProofScript) -> Formula:
    """What a checked script establishes without premises."""
    final = script.lines[-1].formula
    prem = script.assumptions()
    if not prem:
        return final
    conj = prem[0]
    for p in prem[1:]:
        conj = And(conj, p)
    return Not(conj) if isinstance(final, Falsum) else Implies(conj, final)


def _bad(reason: str) -> LineCheck:
    return LineCheck(False, reason)


_OK = LineCheck(True)


def _mismatch(what: str, expected: Formula, found: Formula) -> LineCheck:
    return _bad(f"{what}: expected {render(expected)}, found {render(found)}")


class Checker:
    """Checks scripts against a library of scripts used to justify lemmas.

    Lemma results are cached per (lemma, available base axioms, mode, refl).
    """

    def __init__(self, library: Mapping[str, ProofScript] | None = None):
        self.library = dict(bundled_scripts_by_name() if library is None else library)
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._active = threading.local()

    # -- lemma availability
    def lemma_status(self, name: str, base: frozenset, mode: LogicMode, refl: bool) -> LineCheck:
        schema, script_name = axioms.LEMMAS[name]
        key = (name, base, mode, refl)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        active = getattr(self._active, "stack", None)
        if active is None:
            active = self._active.stack = set()
        if key in active:
            return _bad(f"circular lemma dependency through {name}")
        active.add(key)
        try:
            status = self._lemma_status(name, schema, script_name, base, mode, refl)
        finally:
            active.discard(key)
        with self._lock:
            self._cache.setdefault(key, status)
        return status

    def _lemma_status(self, name, schema, script_name, base, mode, refl) -> LineCheck:
        lemma = self.library.get(script_name)
        if lemma is None:
            return _bad(f"lemma {name}: no script {script_name!r} in library")
        if not mode.admits(lemma.mode):
            return _bad(f"lemma {name} needs {lemma.mode.value} reasoning, script is {mode.value}")
        if lemma.requires_refl and not refl:
            return _bad(f"lemma {name} needs REFL")
        dropped = [s for s in lemma.schema_set if s in axioms.BASE_AXIOMS and s not in base]
        effective = lemma
        for s in dropped:
            effective = effective.without(s)
        res = self._check(effective, base)
        if not res.ok:
            why = f" without {', '.join(dropped)}" if dropped else ""
            return _bad(f"lemma {name} unavailable{why}: {res}")
        thm = theorem_of(lemma)
        if thm != schema.body:
            return _bad(f"lemma {name}: script proves {render(thm)}, not {render(schema.body)}")
        return _OK

    # -- proofs
    def check_proof(self, script: ProofScript) -> ProofResult:
        base = frozenset(s for s in script.schema_set if s in axioms.BASE_AXIOMS)
        return self._check(script, base)

    def _check(self, script: ProofScript, base: frozenset) -> ProofResult:
        if not script.lines:
            return ProofResult(script.name, False, None, None, "empty script")
        deps: list = []
        for k, line in enumerate(script.lines):
            res = self._check_line(script, k, deps, base)
            if not res.ok:
                return ProofResult(script.name, False, k, line.label, res.reason)
        if script.conclusion is not None and script.lines[-1].formula != script.conclusion:
            last = script.lines[-1]
            return ProofResult(script.name, False, len(script.lines) - 1, last.label,
                               f"final line is not the stated conclusion {render(script.conclusion)}")
        return ProofResult(script.name, True)

    def check_line(self, script: ProofScript, index: int) -> LineCheck:
        """Check one line, assuming all earlier lines are correct."""
        base = frozenset(s for s in script.schema_set if s in axioms.BASE_AXIOMS)
        deps: list = []
        for k in range(index):
            deps.append(self._depends(script, k, deps))
        return self._check_line(script, index, deps, base)

    def _depends(self, script, k, deps) -> bool:
        j = script.lines[k].justification
        if j.rule == "ASSUME":
            return True
        idx = [script.index_of(r) for r in j.refs if any(l.label == r for l in script.lines[:k])]
        return any(deps[i] for i in idx)

    def _check_line(self, script: ProofScript, k: int, deps: list, base: frozenset) -> LineCheck:
        line = script.lines[k]
        j = line.justification
        prior = {l.label: (i, l.formula) for i, l in enumerate(script.lines[:k])}
        for r in j.refs:
            if r not in prior:
                deps.append(False)
                return _bad(f"reference {r} is not an earlier line")
        refs = [prior[r][1] for r in j.refs]
        if j.rule in THEOREM_ONLY:
            for r in j.refs:
                if deps[prior[r][0]]:
                    deps.append(True)
                    return _bad(f"{j.rule} applied to line {r}, which depends on an assumption")
        deps.append(j.rule == "ASSUME" or any(deps[prior[r][0]] for r in j.refs))
        try:
            return self._rule(script, line.formula, j, refs, base)
        except FormulaTooLarge as e:
            return _bad(f"propositional check too large: {e}")

    def _arity(self, j: Justification, refs, allowed) -> LineCheck | None:
        if len(refs) not in allowed:
            return _bad(f"{j.rule} takes {' or '.join(map(str, allowed))} line reference(s), got {len(refs)}")
        return None

    def _rule(self, script: ProofScript, f: Formula, j: Justification, refs: list, base) -> LineCheck:
        rule = j.rule
        classical = script.mode is LogicMode.CLASSICAL
        if rule == "ASSUME":
            return self._arity(j, refs, (0,)) or _OK

        if rule == "AX":
            return self._axiom(script, f, j, base)

        if rule == "MP":
            bad = self._arity(j, refs, (2,))
            if bad:
                return bad
            a, b = refs
            for imp, ante in ((a, b), (b, a)):
                if isinstance(imp, Implies) and imp.left == ante and imp.right == f:
                    return _OK
            imps = [(x, y) for x, y in ((a, b), (b, a)) if isinstance(x, Implies)]
            if not imps:
                return _bad("MP needs one cited line to be an implication")
            for imp, ante in imps:
                if imp.right == f:
                    return _mismatch("antecedent mismatch", imp.left, ante)
            return _mismatch("consequent mismatch", imps[0][0].right, f)

        if rule == "NEC":
            bad = self._arity(j, refs, (1,))
            return bad or (_OK if f == Box(refs[0]) else _mismatch("NEC shape", Box(refs[0]), f))

        if rule == "CONTRAPOS":
            bad = self._arity(j, refs, (1,))
            if bad:
                return bad
            a = refs[0]
            if not isinstance(a, Implies):
                return _bad("CONTRAPOS needs an implication")
            want = Implies(Not(a.right), Not(a.left))
            return _OK if f == want else _mismatch("CONTRAPOS shape", want, f)

        if rule == "CONNID":
            bad = self._arity(j, refs, (1,))
            if bad:
                return bad
            a = refs[0]
            if j.direction == "fwd":
                if not isinstance(a, Implies):
                    return _bad("CONNID fwd needs an implication")
                want = Not(And(a.left, Not(a.right)))
                return _OK if f == want else _mismatch("CONNID shape", want, f)
            if not classical:
                return _bad("CONNID bwd is double-negation elimination; not allowed in intuitionistic mode")
            if not (isinstance(a, Not) and isinstance(a.arg, And) and isinstance(a.arg.right, Not)):
                return _bad("CONNID bwd needs a line of shape ~(x & ~y)")
            want = Implies(a.arg.left, a.arg.right.arg)
            return _OK if f == want else _mismatch("CONNID shape", want, f)

        if rule == "REFL":
            if not script.requires_refl:
                return _bad("REFL rule used but the script does not assume a reflexive frame")
            bad = self._arity(j, refs, (0, 1))
            if bad:
                return bad
            if refs:
                want = Diamond(refs[0])
                return _OK if f == want else _mismatch("REFL shape", want, f)
            if isinstance(f, Implies) and f.right == Diamond(f.left):
                return _OK
            return _bad(f"REFL without a line must have shape x -> <>x, found {render(f)}")

        if rule == "BOT":
            bad = self._arity(j, refs, (2,))
            if bad:
                return bad
            if not isinstance(f, Falsum):
                return _bad("BOT concludes _|_")
            a, b = refs
            if b == Not(a) or a == Not(b):
                return _OK
            return _bad(f"BOT needs x and ~x, got {render(a)} and {render(b)}")

        if rule in ("IPL", "CPL"):
            if rule == "CPL" and not classical:
                return _bad("classical propositional reasoning (double-negation elimination) used in intuitionistic mode")
            goal = f
            if refs:
                prem = refs[0]
                for r in refs[1:]:
                    prem = And(prem, r)
                goal = Implies(prem, f)
            mode = LogicMode.INTUITIONISTIC if rule == "IPL" else LogicMode.CLASSICAL
            if pl_tautology(goal, mode):
                return _OK
            return _bad(f"not a {mode.value} propositional consequence: {render(goal)}")

        if rule == "DNE":
            if not classical:
                return _bad("double-negation elimination used in intuitionistic mode")
            bad = self._arity(j, refs, (0, 1))
            if bad:
                return bad
            if refs:
                want = Not(Not(f))
                return _OK if refs[0] == want else _mismatch("DNE premise", want, refs[0])
            if (isinstance(f, Implies) and isinstance(f.left, Not) and isinstance(f.left.arg, Not)
                    and f.left.arg.arg == f.right):
                return _OK
            return _bad(f"DNE axiom must have shape ~~x -> x, found {render(f)}")

        if rule == "SUBST":
            bad = self._arity(j, refs, (1,))
            if bad:
                return bad
            try:
                fmap = {k: parse(v) for k, v in j.bindings}
            except ParseError as e:
                return _bad(f"SUBST binding: {e}")
            want = substitute(refs[0], fmap)
            return _OK if f == want else _mismatch("SUBST result", want, f)

        if rule in ("KMONO", "BOXMONO", "DIAMONO"):
            bad = self._arity(j, refs, (1,))
            if bad:
                return bad
            a = refs[0]
            if not isinstance(a, Implies):
                return _bad(f"{rule} needs an implication")
            if rule == "KMONO":
                if not (isinstance(f, Implies) and isinstance(f.left, Knows)):
                    return _bad("KMONO concludes K[g]x -> K[g]y")
                g = f.left.agent
                want = Implies(Knows(g, a.left), Knows(g, a.right))
            else:
                op = Box if rule == "BOXMONO" else Diamond
                want = Implies(op(a.left), op(a.right))
            return _OK if f == want else _mismatch(f"{rule} shape", want, f)

        if rule in ("DIST", "DIST-IN"):
            if "DIST" not in script.schema_set:
                return _bad(f"{rule} needs schema DIST, which is not in the schema set")
            bad = self._arity(j, refs, (1,))
            if bad:
                return bad
            a = refs[0]
            if rule == "DIST":
                ok = (isinstance(a, And) and isinstance(a.left, Knows) and isinstance(a.right, Knows)
                      and a.left.agent == a.right.agent)
                if not ok:
                    return _bad("DIST needs a line of shape K[g]x & K[g]y")
                want = Knows(a.left.agent, And(a.left.arg, a.right.arg))
                return _OK if f == want else _mismatch("DIST shape", want, f)
            inner = a.arg if isinstance(a, Knows) else None
            ok = (inner is not None and isinstance(inner, And) and isinstance(inner.left, Knows)
                  and isinstance(inner.right, Knows) and inner.left.agent == inner.right.agent)
            if not ok:
                return _bad("DIST-IN needs a line of shape K[g](K[h]x & K[h]y)")
            want = Knows(a.agent, Knows(inner.left.agent, And(inner.left.arg, inner.right.arg)))
            return _OK if f == want else _mismatch("DIST-IN shape", want, f)

        return _bad(f"unknown rule {rule}")

    def _axiom(self, script: ProofScript, f: Formula, j: Justification, base) -> LineCheck:
        name = j.schema
        if name == "DNE":
            if script.mode is not LogicMode.CLASSICAL:
                return _bad("double-negation elimination used in intuitionistic mode")
        elif name == "REFL":
            if not script.requires_refl:
                return _bad("REFL axiom used but the script does not assume a reflexive frame")
        elif name not in script.schema_set:
            return _bad(f"schema {name} is not in the script's schema set")
        if name not in axioms.SCHEMAS:
            return _bad(f"unknown schema {name}")
        schema = axioms.SCHEMAS[name]
        try:
            forms = instantiate_all(schema, dict(j.bindings))
        except (ValueError, ParseError) as e:
            return _bad(str(e))
        if f not in forms:
            return _mismatch(f"not an instance of {name}", forms[0], f)
        if name in axioms.LEMMAS:
            return self.lemma_status(name, base, script.mode, script.requires_refl)
        return _OK


_default_checker: Checker | None = None


def default_checker() -> Checker:
    global _default_checker
    if _default_checker is None:
        _default_checker = Checker()
    return _default_checker


def check_proof(script: ProofScript, checker: Checker | None = None) -> ProofResult:
    return (checker or default_checker()).check_proof(script)


def check_line(script: ProofScript, index: int, checker: Checker | None = None) -> LineCheck:
    return (checker or default_checker()).check_line(script, index)


# ----------------------------------------------------------- bundled scripts

BUNDLED = (
    "fitch", "fitch_star", "lemma_contradictory_knowledge",
    "violating_q", "violating_s", "violating_c", "no_go",
)


def bundled_text(name: str) -> str:
    return resources.files("knowability.data.scripts").joinpath(f"{name}.proof").read_text(encoding="utf-8")


def bundled_scripts() -> list:
    return [parse_script(bundled_text(n), f"{n}.proof") for n in BUNDLED]


def bundled_scripts_by_name() -> dict:
    return {s.name: s for s in bundled_scripts()}


def load_script(path) -> ProofScript:
    with open(path, encoding="utf-8") as fh:
        return parse_script(fh.read(), str(path))


# ------------------------------------------------------ semantic obligations

def semantic_obligations(script: ProofScript, checker: Checker | None = None) -> tuple:
    """``(assumed, target)`` whose semantic entailment mirrors the script.

    ``assumed`` holds the axiom instances the script relies on, with lemma
    citations unfolded into their own scripts' instances, plus the
    conclusions of KMONO and DIST steps (K-formulas are opaque, so these are
    assumptions rather than consequences).  ``target`` is the derived theorem.
    On frames matching ``requires_refl`` with every assumed formula valid,
    the target should be valid too.
    """
    checker = checker or default_checker()
    out: list = []

    def add(f):
        if f not in out:
            out.append(f)

    def walk(s: ProofScript, fmap: dict, amap: dict):
        sub = lambda f: substitute(f, fmap, amap)  # noqa: E731
        for k, line in enumerate(s.lines):
            j = line.justification
            if j.rule == "AX" and j.schema in axioms.LEMMAS:
                schema, script_name = axioms.LEMMAS[j.schema]
                inner = dict(j.bindings)
                fm = {v: sub(parse(inner[v])) for v in schema.formula_vars}
                am = {v: amap.get(inner[v], inner[v]) for v in schema.agent_vars}
                walk(checker.library[script_name], fm, am)
            elif j.rule == "AX" and j.schema not in ("DNE", "REFL"):
                add(sub(line.formula))
            elif j.rule in ("KMONO", "DIST-IN"):
                add(sub(line.formula))
            elif j.rule == "DIST":
                prev = s.lines[s.index_of(j.refs[0])].formula
                add(sub(Implies(prev, line.formula)))
            elif j.rule == "SUBST":
                raise ValueError("semantic obligations are not tracked through SUBST")

    walk(script, {}, {})
    return out, theorem_of(script)
