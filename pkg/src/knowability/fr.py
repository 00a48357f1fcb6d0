"""Wigner's-friend and Frauchiger-Renner state-vector simulation.

Qubits are ordered R, A, S, B with big-endian bit labels, so ``|rasb>`` sits
at index ``8r + 4a + 2s + b``.  Ursula measures the lab RA and Wigner the lab
SB in the {ok, fail} basis; both are modelled as bra contractions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TOL = 1e-12
LABELS = ("R", "A", "S", "B")

SQ2 = np.sqrt(2.0)
FAIL = np.array([1, 0, 0, 1], dtype=complex) / SQ2
OK = np.array([1, 0, 0, -1], dtype=complex) / SQ2
KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QState:
    labels: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape[0] != 2 ** len(self.labels):
            raise ValueError("amplitude count does not match qubit count")
        if abs(np.linalg.norm(a) - 1.0) > TOL:
            raise ValueError(f"state norm {np.linalg.norm(a)!r} is not 1")
        object.__setattr__(self, "amplitudes", a)

    @property
    def n(self) -> int:
        return len(self.labels)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((2,) * self.n)

    def basis_label(self, index: int) -> str:
        return format(index, f"0{self.n}b")

    def nonzero(self, tol: float = TOL) -> list:
        return [(self.basis_label(k), complex(z)) for k, z in enumerate(self.amplitudes) if abs(z) > tol]

    def permuted(self, order) -> "QState":
        """Same state with qubits listed in ``order``."""
        axes = [self.labels.index(l) for l in order]
        return QState(tuple(order), np.transpose(self.tensor(), axes).reshape(-1))


# ------------------------------------------------------------ gates / steps

def _apply(state: np.ndarray, n: int, op: np.ndarray, targets: tuple) -> np.ndarray:
    """Apply a 2^k x 2^k operator on qubits ``targets`` of an n-qubit vector."""
    k = len(targets)
    t = state.reshape((2,) * n)
    t = np.moveaxis(t, targets, range(k))
    shape = t.shape
    t = (op @ t.reshape(2 ** k, -1)).reshape(shape)
    return np.moveaxis(t, range(k), targets).reshape(-1)


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / SQ2
CH = np.block([[np.eye(2), np.zeros((2, 2))], [np.zeros((2, 2)), HADAMARD]]).astype(complex)


def _ry(amplitudes) -> np.ndarray:
    """Real rotation taking |0> to the given (c0, c1)."""
    c0, c1 = amplitudes
    return np.array([[c0, -c1], [c1, c0]], dtype=complex)


def copy_interaction(state: np.ndarray, n: int, source: int, memory: int) -> np.ndarray:
    """|x>|0> -> |x>|x>, extended linearly (CNOT onto a blank memory)."""
    return _apply(state, n, CNOT, (source, memory))


def _ground(n: int) -> np.ndarray:
    v = np.zeros(2 ** n, dtype=complex)
    v[0] = 1
    return v


def _check_norm(v: np.ndarray, stage: str) -> np.ndarray:
    if abs(np.linalg.norm(v) - 1.0) > TOL:
        raise AssertionError(f"norm not preserved at {stage}")
    return v


def wigner_friend_state() -> QState:
    v = _ground(2)
    v = _check_norm(_apply(v, 2, HADAMARD, (0,)), "prepare R")
    v = _check_norm(copy_interaction(v, 2, 0, 1), "copy R->A")
    return QState(("R", "A"), v)


def fr_stages() -> list:
    """(stage name, amplitude vector) after each protocol step."""
    n = 4
    v = _ground(n)
    out = [("initial", v)]
    v = _apply(v, n, _ry((np.sqrt(1 / 3), np.sqrt(2 / 3))), (0,))
    out.append(("prepare R", v))
    v = copy_interaction(v, n, 0, 1)
    out.append(("copy R->A", v))
    v = _apply(v, n, CH, (1, 2))  # S is |0> if a=0, |+> if a=1
    out.append(("prepare S from A", v))
    v = copy_interaction(v, n, 2, 3)
    out.append(("copy S->B", v))
    for name, w in out:
        _check_norm(w, name)
    return out


def fr_state() -> QState:
    return QState(LABELS, fr_stages()[-1][1])


def hardy_reference() -> np.ndarray:
    v = np.zeros(16, dtype=complex)
    v[[0b0000, 0b1100, 0b1111]] = 1 / np.sqrt(3)
    return v


# -------------------------------------------------------------- outcomes

@dataclass(frozen=True, eq=False)
class OutcomeProjector:
    label: str
    qubits: tuple
    vector: np.ndarray


def projectors() -> dict:
    out = {
        "u=ok": OutcomeProjector("u=ok", ("R", "A"), OK),
        "u=fail": OutcomeProjector("u=fail", ("R", "A"), FAIL),
        "w=ok": OutcomeProjector("w=ok", ("S", "B"), OK),
        "w=fail": OutcomeProjector("w=fail", ("S", "B"), FAIL),
    }
    for mem, name in (("A", "a"), ("B", "b")):
        for bit, ket in ((0, KET0), (1, KET1)):
            lab = f"{name}={bit}"
            out[lab] = OutcomeProjector(lab, (mem,), ket)
    return out


def joint_amplitude(state: QState, constraints) -> complex | np.ndarray:
    """Contract ``state`` with the bras named in ``constraints``.

    Returns a complex number when every qubit is covered, otherwise the
    residual (unnormalized) vector over the remaining qubits in state order.
    """
    table = projectors()
    used: dict = {}
    t = state.tensor()
    remaining = list(state.labels)
    for lab in sorted(constraints):
        if lab not in table:
            raise ConstraintError(f"unknown outcome {lab!r}; known: {', '.join(sorted(table))}")
        p = table[lab]
        for q in p.qubits:
            if q in used:
                raise ConstraintError(f"{lab} and {used[q]} both constrain qubit {q}")
            if q not in remaining:
                raise ConstraintError(f"qubit {q} is not part of this state")
            used[q] = lab
        axes = [remaining.index(q) for q in p.qubits]
        bra = p.vector.conj().reshape((2,) * len(p.qubits))
        t = np.tensordot(bra, t, axes=(list(range(len(axes))), axes))
        remaining = [q for q in remaining if q not in p.qubits]
    if not remaining:
        return complex(t)
    return t.reshape(-1)


def joint_probability(state: QState, constraints) -> float:
    amp = joint_amplitude(state, constraints)
    return float(np.sum(np.abs(amp) ** 2))


def conditional_probability(state: QState, event, given) -> float:
    den = joint_probability(state, given)
    if den <= TOL:
        raise ZeroDivisionError(f"P({', '.join(sorted(given))}) is zero")
    return joint_probability(state, set(event) | set(given)) / den


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class ChainCheck:
    name: str
    claim: str
    zero_event: tuple
    zero_probability: float
    conditioning_probability: float
    conditional: float

    @property
    def ok(self) -> bool:
        return self.zero_probability <= TOL and abs(self.conditional - 1.0) <= TOL

    def to_dict(self) -> dict:
        return {
            "name": self.name, "claim": self.claim, "zero_event": list(self.zero_event),
            "zero_probability": self.zero_probability,
            "conditioning_probability": self.conditioning_probability,
            "conditional": self.conditional, "ok": self.ok,
        }


CHAIN = (
    ("b1_given_uok", "u=ok => b=1", ("u=ok",), ("b=1",), ("u=ok", "b=0")),
    ("a1_given_b1", "b=1 => a=1", ("b=1",), ("a=1",), ("a=0", "b=1")),
    ("wfail_given_a1", "a=1 => w=fail", ("a=1",), ("w=fail",), ("a=1", "w=ok")),
)


@dataclass(frozen=True)
class ChainReport:
    checks: tuple
    p_ok_ok: float
    p_u_ok: float

    @property
    def paradox(self) -> bool:
        return all(c.ok for c in self.checks) and self.p_ok_ok > TOL

    @property
    def ok(self) -> bool:
        return self.paradox and abs(self.p_ok_ok - 1 / 12) <= TOL

    def verdict(self) -> str:
        if self.paradox:
            return ("paradox: u=w=ok => b=1 => a=1 => w=fail, "
                    f"yet P[u=w=ok] = {self.p_ok_ok:.12f} > 0")
        return "no paradox: a chain step or the post-selection failed"

    def to_dict(self) -> dict:
        return {
            "checks": [c.to_dict() for c in self.checks],
            "p_u_ok": self.p_u_ok, "p_ok_ok": self.p_ok_ok,
            "paradox": self.paradox, "ok": self.ok, "verdict": self.verdict(),
        }


def inference_chain_report(state: QState | None = None) -> ChainReport:
    psi = state or fr_state()
    checks = []
    for name, claim, given, event, zero in CHAIN:
        checks.append(ChainCheck(
            name, claim, zero,
            joint_probability(psi, zero),
            joint_probability(psi, given),
            conditional_probability(psi, event, given),
        ))
    return ChainReport(
        tuple(checks),
        joint_probability(psi, {"u=ok", "w=ok"}),
        joint_probability(psi, {"u=ok"}),
    )


def certified_propositions(report: ChainReport | None = None) -> list:
    """Chain facts as (label, truth bit) for seeding Kripke interpretations."""
    rep = report or inference_chain_report()
    out = [(c.name, int(c.ok)) for c in rep.checks]
    out.append(("uok_wok_possible", int(rep.p_ok_ok > TOL)))
    return out


def regrouped_forms() -> dict:
    """The Hardy state rewritten around |fail>_RA and around |fail>_SB."""
    k = lambda bits: _basis(bits)
    fail_ra = np.kron(FAIL, k("00"))
    fail_sb = np.kron(k("00"), FAIL)
    return {
        "fail_RA": np.sqrt(2 / 3) * fail_ra + (1 / np.sqrt(3)) * k("1111"),
        "fail_SB": (1 / np.sqrt(3)) * k("0000")
        + np.sqrt(2 / 3) * np.kron(k("11"), FAIL),
    }


def _basis(bits: str) -> np.ndarray:
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1
    return v
