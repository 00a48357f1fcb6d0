"""Named axiom schemas and derived-lemma schemas."""
from __future__ import annotations

from .formula import Schema

# KCONT is stated distributively but every derivation cites it in the fused
# form ~<>K_i(phi & ~K_i phi); both count as KCONT instances.
CONST = Schema.from_text("CONST", "phi -> <>K[i]phi", ["phi"], ["i"])
KCONT = Schema.from_text(
    "KCONT",
    "~<>(K[i]phi & K[i]~K[i]phi)",
    ["phi"],
    ["i"],
    variants=["~<>K[i](phi & ~K[i]phi)"],
)
DIST = Schema.from_text("DIST", "K[i]alpha & K[i]beta -> K[i](alpha & beta)", ["alpha", "beta"], ["i"])
DIST2 = Schema.from_text(
    "DIST2",
    "(K[i]alpha & K[i]beta -> K[i](alpha & beta)) & (K[i](alpha & beta) -> K[i]alpha & K[i]beta)",
    ["alpha", "beta"],
    ["i"],
)
K = Schema.from_text("K", "[](phi -> psi) -> []phi -> []psi", ["phi", "psi"])

# Frauchiger-Renner constraints on interpretations
S = Schema.from_text("S", "~(K[i]phi & K[i]~phi)", ["phi"], ["i"])
C = Schema.from_text("C", "K[i]K[j]phi -> K[i]phi", ["phi"], ["i", "j"])

# classical-only; supplied by the logic mode, never by a schema set
DNE = Schema.from_text("DNE", "~~phi -> phi", ["phi"])
REFL_T = Schema.from_text("REFL", "phi -> <>phi", ["phi"])

# derived schemas; citable once the named script checks
FITCH = Schema.from_text("FITCH", "phi -> ~~K[i]phi", ["phi"], ["i"])
FITCH_STAR = Schema.from_text("FITCH*", "phi -> K[i]phi", ["phi"], ["i"])
CONTRA_K = Schema.from_text("CONTRA_K", "~<>K[i](phi & ~phi)", ["phi"], ["i"])
VIOL_Q = Schema.from_text("VIOL_Q", "~(p_Q & ~K[i]p_Q)", ["p_Q"], ["i"])
VIOL_S = Schema.from_text("VIOL_S", "~K[i](p_S & ~p_S)", ["p_S"], ["i"])
VIOL_C = Schema.from_text("VIOL_C", "~(K[i]K[j]p_C & ~K[i]p_C)", ["p_C"], ["i", "j"])

BASE_AXIOMS = {s.name: s for s in (CONST, KCONT, DIST, DIST2, K)}
CONSTRAINTS = {s.name: s for s in (S, C)}
LEMMAS = {
    "FITCH": (FITCH, "fitch"),
    "FITCH*": (FITCH_STAR, "fitch_star"),
    "CONTRA_K": (CONTRA_K, "lemma_contradictory_knowledge"),
    "VIOL_Q": (VIOL_Q, "violating_q"),
    "VIOL_S": (VIOL_S, "violating_s"),
    "VIOL_C": (VIOL_C, "violating_c"),
}

SCHEMAS = {
    **BASE_AXIOMS,
    **CONSTRAINTS,
    "DNE": DNE,
    "REFL": REFL_T,
    **{name: schema for name, (schema, _) in LEMMAS.items()},
}


def get(name: str) -> Schema:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise KeyError(f"unknown schema {name!r}; known: {', '.join(sorted(SCHEMAS))}") from None
