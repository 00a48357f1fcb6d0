"""Command-line front end.  Exit status is 0 iff every check of the subcommand passes."""
from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import axioms, fr, kripke, nogo, proof
from . import quantum_logic as ql
from .formula import (
    ParseError, agents, atoms, depth, parse, render, render_unicode,
)
from .propositional import LogicMode

DEMO_MODELS = ("reflexive_one", "irreflexive_one", "two_worlds")


class CliError(Exception):
    pass


def _emit(args, data: dict, lines: list) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print("\n".join(lines))


def _fmt_float(x: float) -> str:
    return f"{x:.15g}"


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise CliError(f"formula: {e}") from None


def _load_model(ref: str) -> kripke.KripkeModel:
    if not os.path.exists(ref) and ref in DEMO_MODELS:
        text = resources.files("knowability.data.models").joinpath(f"{ref}.json").read_text()
        return kripke.model_from_dict(json.loads(text))
    try:
        return kripke.load_model(ref)
    except OSError as e:
        raise CliError(f"cannot read model {ref}: {e.strerror}") from None
    except kripke.ModelFileError as e:
        raise CliError(str(e)) from None


# ---------------------------------------------------------------- commands

def cmd_parse(args) -> int:
    f = _formula(args.formula)
    data = {
        "ascii": render(f), "unicode": render_unicode(f), "depth": depth(f),
        "atoms": sorted(atoms(f)), "agents": sorted(agents(f)),
    }
    _emit(args, data, [f"{k}: {v if not isinstance(v, list) else ' '.join(v)}" for k, v in data.items()])
    return 0


def cmd_eval(args) -> int:
    m = _load_model(args.model)
    f = _formula(args.formula)
    worlds = [args.world] if args.world else list(m.worlds)
    if args.world and args.world not in m.worlds:
        raise CliError(f"unknown world {args.world!r}")
    try:
        values = {w: kripke.valuate(m, f, w) for w in worlds}
    except kripke.SignatureError as e:
        raise CliError(str(e)) from None
    ok = all(values.values())
    verdict = ("true" if ok else "false") if args.world else ("valid" if ok else "invalid")
    data = {"formula": render(f), "values": {w: int(v) for w, v in values.items()},
            "verdict": verdict, "failing": [w for w, v in values.items() if not v]}
    lines = [f"formula: {render(f)}"] + [f"  {w}: {int(v)}" for w, v in values.items()]
    lines.append(f"verdict: {verdict}" + (f" (fails at {', '.join(data['failing'])})" if not ok else ""))
    _emit(args, data, lines)
    return 0 if ok else 1


def _agent_list(args, extra=()) -> list:
    ids = [a for a in (args.agents or "").split(",") if a]
    return sorted(set(ids) | set(extra)) or ["A"]


def cmd_check_schema(args) -> int:
    m = _load_model(args.model)
    model_agents = {a for f in m.signature for a in agents(f)}
    ids = _agent_list(args, model_agents)
    frame = kripke.frame_properties(m)
    data = {"frame": {"reflexive": frame.reflexive, "transitive": frame.transitive,
                      "symmetric": frame.symmetric}, "schemas": []}
    lines = [f"frame: reflexive={int(frame.reflexive)} transitive={int(frame.transitive)} "
             f"symmetric={int(frame.symmetric)}"]
    ok = True
    if args.require_reflexive and not frame.reflexive:
        ok = False
        lines.append("frame check: FAILED (not reflexive)")
    for name in args.schema:
        try:
            schema = axioms.get(name)
        except KeyError as e:
            raise CliError(e.args[0]) from None
        try:
            rep = kripke.check_schema(m, schema, ids, strict=args.strict)
        except kripke.SignatureError as e:
            raise CliError(str(e)) from None
        ok &= rep.ok
        ce = rep.counterexample
        data["schemas"].append({
            "schema": name, "ok": rep.ok, "checked": rep.checked, "skipped": rep.skipped,
            "counterexample": None if ce is None else {
                "instance": render(ce.instance), "world": ce.world,
                "bindings": {k: v if isinstance(v, str) else render(v) for k, v in ce.bindings.items()},
            },
        })
        status = "ok" if rep.ok else f"FAILED: {ce}"
        lines.append(f"{name}: {status} (instances checked={rep.checked} skipped={rep.skipped})")
    data["ok"] = ok
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_countermodel(args) -> int:
    target = _formula(args.formula)
    assumed = []
    for a in args.assume or []:
        assumed.append(axioms.SCHEMAS[a] if a in axioms.SCHEMAS else _formula(a))
    frame = kripke.Frame(require_reflexive=args.require_reflexive)
    try:
        res = kripke.search_countermodel(assumed, target, max_worlds=args.max_worlds,
                                         agent_ids=_agent_list(args), frame=frame)
    except kripke.BudgetExceeded as e:
        raise CliError(str(e)) from None
    data = {"target": render(target), "assumed": list(args.assume or []),
            "require_reflexive": args.require_reflexive, "max_worlds": args.max_worlds,
            "examined": res.examined, "instances": res.instances,
            "exhausted": res.exhausted,
            "countermodel": None if res.exhausted else res.model.to_dict(),
            "world": None if res.exhausted else res.world}
    if res.exhausted:
        lines = [f"target: {render(target)}",
                 f"exhausted: no countermodel with <= {args.max_worlds} worlds "
                 f"({res.examined} candidates, {res.instances} assumption instances)"]
    else:
        lines = [f"target: {render(target)}", f"countermodel (fails at {res.world}):",
                 res.model.describe()]
    _emit(args, data, lines)
    return 0 if res.exhausted else 1


def _resolve_script(ref: str) -> proof.ProofScript:
    if not os.path.exists(ref) and ref in proof.BUNDLED:
        return proof.parse_script(proof.bundled_text(ref), f"{ref}.proof")
    try:
        return proof.load_script(ref)
    except OSError as e:
        raise CliError(f"cannot read script {ref}: {e.strerror}") from None
    except proof.ScriptError as e:
        raise CliError(str(e)) from None


def cmd_prove(args) -> int:
    if args.export:
        return _export(args.export, args)
    refs = list(proof.BUNDLED) if args.all else args.script
    if not refs:
        raise CliError("name a script (path or bundled name) or pass --all")
    checker = proof.Checker()
    results = []
    for ref in refs:
        s = _resolve_script(ref)
        for d in args.drop_schema or []:
            s = s.without(d)
        if args.mode:
            s = s.with_mode(args.mode)
        results.append((s, checker.check_proof(s)))
    ok = all(r.ok for _, r in results)
    data = {"ok": ok, "scripts": [
        {"name": s.name, "mode": s.mode.value, "requires_refl": s.requires_refl,
         "schemas": list(s.schema_set), "lines": len(s.lines), "ok": r.ok,
         "line": r.label, "reason": r.reason} for s, r in results]}
    lines = []
    for s, r in results:
        head = f"{s.name} [{s.mode.value}{', REFL' if s.requires_refl else ''}; {', '.join(s.schema_set)}]"
        lines.append(f"{head}: ok ({len(s.lines)} lines)" if r.ok else f"{head}: FAILED at line {r.label}: {r.reason}")
    _emit(args, data, lines)
    return 0 if ok else 1


def _export(target: str, args) -> int:
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in proof.BUNDLED:
        p = out / f"{name}.proof"
        p.write_text(proof.bundled_text(name), encoding="utf-8")
        written.append(str(p))
    for name in DEMO_MODELS:
        p = out / f"{name}.json"
        p.write_text(resources.files("knowability.data.models").joinpath(f"{name}.json").read_text(),
                     encoding="utf-8")
        written.append(str(p))
    _emit(args, {"written": written}, [f"wrote {w}" for w in written])
    return 0


def cmd_qlattice(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(","))
    if any(d < 1 for d in dims):
        raise CliError("dimensions must be positive")
    laws = ql.verify_ortholattice_laws(dims, args.trials, args.seed)
    lemmas = []
    for d in dims:
        lemmas.append(ql.verify_lemma_contraposition(d, args.trials, args.seed))
        lemmas.append(ql.verify_lemma_connective_identity(d, args.trials, args.seed))
    w = ql.nondistributivity_witness()
    ok = laws.ok and all(r.ok for r in lemmas) and w.verified
    data = {
        "laws": laws.to_dict(),
        "lemmas": [r.to_dict() for r in lemmas],
        "witness": {"lhs_formula": w.formula_lhs, "rhs_formula": w.formula_rhs,
                    "lhs": w.lhs.to_json(), "rhs": w.rhs.to_json(),
                    "lhs_rank": w.lhs.rank, "rhs_rank": w.rhs.rank, "verified": w.verified},
        "ok": ok,
    }
    lines = [f"ortholattice laws (dims {','.join(map(str, dims))}, {args.trials} samples, seed {args.seed}):"]
    for k, v in data["laws"]["laws"].items():
        lines.append(f"  {k}: checked={v['checked']} failures={v['failures']} max_residual={v['max_residual']:.3e}")
    for r in lemmas:
        extra = f" noncommuting_discrepancies={r.noncommuting_discrepancies}" if r.lemma == "connective_identity" else ""
        lines.append(f"lemma {r.lemma} dim={r.dim}: checked={r.checked} vacuous={r.vacuous} "
                     f"failures={r.failures}{extra}")
    lines.append(f"non-distributivity: {w.formula_lhs} has rank {w.lhs.rank}, "
                 f"{w.formula_rhs} has rank {w.rhs.rank}: {'verified' if w.verified else 'NOT verified'}")
    lines.append(f"verdict: {'ok' if ok else 'FAILED'}")
    if args.plot_dir:
        from . import report
        files = report.plot_qlattice(laws, lemmas, w, args.plot_dir)
        lines += [f"figure: {f}" for f in files]
        data["figures"] = files
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_fr(args) -> int:
    psi = fr.fr_state()
    chain = fr.inference_chain_report(psi)
    forms = fr.regrouped_forms()
    regroup = {k: float(max(abs(v - psi.amplitudes))) for k, v in forms.items()}
    ok = chain.ok and all(e <= fr.TOL for e in regroup.values())
    data = {
        "state": {"labels": list(psi.labels),
                  "amplitudes": [[b, [z.real, z.imag]] for b, z in psi.nonzero()]},
        **chain.to_dict(),
        "regrouping_error": regroup,
        "certified": [list(p) for p in fr.certified_propositions(chain)],
        "ok": ok,
    }
    lines = ["state |psi>_RASB:"]
    lines += [f"  |{b}>: {_fmt_float(z.real)}" for b, z in psi.nonzero()]
    for c in chain.checks:
        lines.append(f"{c.claim}: P({', '.join(c.zero_event)}) = {_fmt_float(c.zero_probability)}; "
                     f"conditional = {_fmt_float(c.conditional)} [{'ok' if c.ok else 'FAILED'}]")
    lines.append(f"P[u=ok] = {_fmt_float(chain.p_u_ok)}")
    lines.append(f"P[u=w=ok] = {_fmt_float(chain.p_ok_ok)} (1/12 = {_fmt_float(1 / 12)})")
    for k, e in regroup.items():
        lines.append(f"regrouped form {k}: max deviation {e:.3e}")
    lines.append(f"verdict: {chain.verdict()}")
    if args.plot_dir:
        from . import report
        files = report.plot_fr(psi, chain, args.plot_dir)
        lines += [f"figure: {f}" for f in files]
        data["figures"] = files
    _emit(args, data, lines)
    return 0 if ok else 1


def cmd_nogo(args) -> int:
    unknown = [d for d in args.drop_schema or [] if d not in axioms.SCHEMAS]
    if unknown:
        raise CliError(f"unknown schema {unknown[0]!r}")
    res = nogo.run_pipeline(args.drop_schema or (), args.mode)
    lines = [f"FR: P[u=w=ok] = {_fmt_float(res.chain.p_ok_ok)}; chain "
             f"{'certified' if res.chain.ok else 'NOT certified'}"]
    for tag, f in res.premises:
        lines.append(f"violation {tag}: {f}")
    if res.dropped or res.mode:
        lines.append(f"variant: drop={','.join(res.dropped) or '-'} mode={res.mode or 'script'}")
    for r in res.results:
        lines.append(f"script {r.script}: " + ("ok" if r.ok else f"FAILED at line {r.label}: {r.reason}"))
    lines.append("")
    head = ("assumption violated", "rejected axioms", "deduction", "REFL needed")
    rows = [(f"{r.assumption} ({r.description})", " or ".join(r.rejected), r.deduction,
             "yes" if r.refl_needed else "no") for r in res.table]
    rows.append(("U (unitary evolution)", "(physical premise, no schema)", "-", "-"))
    widths = [max(len(x[k]) for x in [head] + rows) for k in range(4)]
    for row in [head] + rows:
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    lines.append("")
    lines.append(f"verdict: {res.verdict()}")
    _emit(args, res.to_dict(), lines)
    return 0 if res.ok else 1


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="knowability", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and pretty-print a formula")
    s.add_argument("formula", nargs="?")
    s.add_argument("--formula", dest="formula_opt")
    s.set_defaults(func=cmd_parse)

    s = sub.add_parser("eval", parents=[common], help="evaluate a formula in a model")
    s.add_argument("--model", required=True, help=f"model file or demo ({', '.join(DEMO_MODELS)})")
    s.add_argument("--formula", required=True)
    s.add_argument("--world")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("check-schema", parents=[common], help="check schemas against a model")
    s.add_argument("--model", required=True)
    s.add_argument("--schema", action="append", required=True, help="schema name; repeatable")
    s.add_argument("--agents", help="comma-separated agent ids")
    s.add_argument("--require-reflexive", action="store_true")
    s.add_argument("--strict", action="store_true", help="fail on instances outside the signature")
    s.set_defaults(func=cmd_check_schema)

    s = sub.add_parser("countermodel", parents=[common], help="bounded countermodel search")
    s.add_argument("--formula", required=True, help="target formula")
    s.add_argument("--assume", action="append", help="schema name or formula; repeatable")
    s.add_argument("--agents")
    s.add_argument("--max-worlds", type=int, default=2)
    s.add_argument("--require-reflexive", action="store_true")
    s.set_defaults(func=cmd_countermodel)

    s = sub.add_parser("prove", parents=[common], help="check proof scripts")
    s.add_argument("script", nargs="*", help="script path or bundled name")
    s.add_argument("--all", action="store_true", help="check every bundled script")
    s.add_argument("--mode", choices=[m.value for m in LogicMode])
    s.add_argument("--drop-schema", action="append")
    s.add_argument("--export", metavar="DIR", help="write bundled scripts and demo models to DIR")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("qlattice", help="quantum-logic checks")
    qs = s.add_subparsers(dest="action", required=True)
    v = qs.add_parser("verify", parents=[common], help="lattice laws, lemmas, witness")
    v.add_argument("--dims", default="2,3,4")
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--plot-dir")
    v.set_defaults(func=cmd_qlattice)

    s = sub.add_parser("fr", help="Frauchiger-Renner simulation")
    fs = s.add_subparsers(dest="action", required=True)
    r = fs.add_parser("run", parents=[common], help="state, chain checks, post-selection")
    r.add_argument("--plot-dir")
    r.set_defaults(func=cmd_fr)

    s = sub.add_parser("nogo", parents=[common], help="run the no-go pipeline")
    s.add_argument("--drop-schema", action="append")
    s.add_argument("--mode", choices=[m.value for m in LogicMode])
    s.set_defaults(func=cmd_nogo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "parse":
        args.formula = args.formula or args.formula_opt
        if not args.formula:
            print("error: no formula given", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
