"""Birkhoff-von Neumann quantum logic on small complex Hilbert spaces.

Propositions are subspaces held as column-orthonormal bases.  Rank and
membership are decided by absolute residual norms at ``tol`` (1e-9).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .formula import And, Atom, Falsum, Formula, Implies, Not, Or, render

TOL = 1e-9


class DimensionError(ValueError):
    pass


class CompileError(ValueError):
    pass


def _orthonormal_columns(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis for the column span of ``m``."""
    n = m.shape[0]
    if m.size == 0:
        return np.zeros((n, 0), dtype=complex)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(s > tol))
    return u[:, :rank]


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray
    tol: float = TOL

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2:
            raise ValueError("basis must be a 2-d array")
        gram = b.conj().T @ b
        if gram.size and np.max(np.abs(gram - np.eye(b.shape[1]))) > max(self.tol, 1e-9) * 10:
            raise ValueError("basis columns are not orthonormal")
        object.__setattr__(self, "basis", b)

    @classmethod
    def span(cls, vectors, dim: int | None = None, tol: float = TOL) -> "Subspace":
        """Span of ``vectors`` (rows), orthonormalized."""
        vs = [np.asarray(v, dtype=complex) for v in vectors]
        if not vs:
            if dim is None:
                raise ValueError("dim is required for an empty span")
            return cls.zero(dim, tol)
        m = np.stack(vs, axis=1)
        return cls(_orthonormal_columns(m, tol), tol)

    @classmethod
    def zero(cls, dim: int, tol: float = TOL) -> "Subspace":
        return cls(np.zeros((dim, 0), dtype=complex), tol)

    @classmethod
    def full(cls, dim: int, tol: float = TOL) -> "Subspace":
        return cls(np.eye(dim, dtype=complex), tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def residual(self, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=complex)
        return float(np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v)))

    def to_json(self) -> dict:
        return {"dim": self.dim, "basis": [[_cpair(z) for z in col] for col in self.basis.T]}

    @classmethod
    def from_json(cls, data: dict, tol: float = TOL) -> "Subspace":
        cols = [[complex(re, im) for re, im in col] for col in data["basis"]]
        return cls.span(cols, dim=data["dim"], tol=tol)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    tol: float = TOL

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(a) - 1.0) > self.tol:
            raise ValueError(f"state norm {np.linalg.norm(a):.3g} is not 1")
        object.__setattr__(self, "amplitudes", a)

    @classmethod
    def normalized(cls, v, tol: float = TOL) -> "StateVector":
        v = np.asarray(v, dtype=complex)
        return cls(v / np.linalg.norm(v), tol)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def to_json(self) -> dict:
        return {"dim": self.dim, "amplitudes": [_cpair(z) for z in self.amplitudes]}

    @classmethod
    def from_json(cls, data: dict, tol: float = TOL) -> "StateVector":
        return cls(np.array([complex(re, im) for re, im in data["amplitudes"]]), tol)


def _cpair(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _same_dim(s, t):
    if s.dim != t.dim:
        raise DimensionError(f"ambient dimensions differ: {s.dim} vs {t.dim}")


def _tol(*xs) -> float:
    return max(x.tol for x in xs)


def join(s: Subspace, t: Subspace) -> Subspace:
    _same_dim(s, t)
    tol = _tol(s, t)
    return Subspace(_orthonormal_columns(np.hstack([s.basis, t.basis]), tol), tol)


def ortho(s: Subspace) -> Subspace:
    if s.rank == 0:
        return Subspace.full(s.dim, s.tol)
    # nullspace of S^H: right singular vectors beyond the rank
    _, sv, vh = np.linalg.svd(s.basis.conj().T, full_matrices=True)
    rank = int(np.sum(sv > s.tol))
    return Subspace(vh[rank:].conj().T, s.tol)


def meet(s: Subspace, t: Subspace) -> Subspace:
    _same_dim(s, t)
    return ortho(join(ortho(s), ortho(t)))


def leq(s: Subspace, t: Subspace) -> bool:
    _same_dim(s, t)
    tol = _tol(s, t)
    return all(t.residual(col) <= tol for col in s.basis.T)


def equal(s: Subspace, t: Subspace) -> bool:
    return s.rank == t.rank and leq(s, t) and leq(t, s)


def truth(x: StateVector, s: Subspace) -> bool:
    if x.dim != s.dim:
        raise DimensionError(f"state has dim {x.dim}, subspace {s.dim}")
    return s.residual(x.amplitudes) <= _tol(x, s)


def is_full(s: Subspace) -> bool:
    return s.rank == s.dim


def is_zero(s: Subspace) -> bool:
    return s.rank == 0


def compile_formula(f: Formula, atom_map: dict) -> Subspace:
    """Subspace denoted by propositional ``f``; -> compiles as ~(a & ~b)."""
    dims = {s.dim for s in atom_map.values()}
    if len(dims) > 1:
        raise DimensionError(f"atom subspaces have mixed dimensions {sorted(dims)}")

    def go(g):
        if isinstance(g, Atom):
            if g.name not in atom_map:
                raise CompileError(f"atom {g.name!r} is not mapped")
            return atom_map[g.name]
        if isinstance(g, Falsum):
            if not dims:
                raise CompileError("cannot infer dimension for _|_ without atoms")
            return Subspace.zero(next(iter(dims)))
        if isinstance(g, Not):
            return ortho(go(g.arg))
        if isinstance(g, And):
            return meet(go(g.left), go(g.right))
        if isinstance(g, Or):
            return join(go(g.left), go(g.right))
        if isinstance(g, Implies):
            return ortho(meet(go(g.left), ortho(go(g.right))))
        raise CompileError(f"modal or knowledge operator in {render(g)}; quantum logic is propositional")

    return go(f)


compile = compile_formula  # noqa: A001


def conditional_holds(s: Subspace, t: Subspace, convention: str = "standard") -> bool:
    """Truth of phi -> psi given M_phi=s, M_psi=t.

    ``standard``: s <= t.  ``literal``: t <= s, the clause as printed in the
    source definition, kept so it can be tested side by side.
    """
    if convention == "standard":
        return leq(s, t)
    if convention == "literal":
        return leq(t, s)
    raise ValueError(f"unknown convention {convention!r}")


# ---------------------------------------------------------------- sampling

def random_subspace(dim: int, rng: np.random.Generator, rank: int | None = None, tol: float = TOL) -> Subspace:
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    if rank == 0:
        return Subspace.zero(dim, tol)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    q, _ = np.linalg.qr(g)
    return Subspace(q[:, :rank], tol)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_subspace_within(t: Subspace, rng: np.random.Generator) -> Subspace:
    """Random subspace of ``t`` (rank uniform in [0, rank t])."""
    k = int(rng.integers(0, t.rank + 1))
    if k == 0:
        return Subspace.zero(t.dim, t.tol)
    c = rng.standard_normal((t.rank, k)) + 1j * rng.standard_normal((t.rank, k))
    return Subspace(_orthonormal_columns(t.basis @ c, t.tol), t.tol)


def commuting_pair(dim: int, rng: np.random.Generator) -> tuple:
    """Two subspaces spanned by column subsets of one random unitary."""
    u = random_unitary(dim, rng)
    a = rng.random(dim) < 0.5
    b = rng.random(dim) < 0.5
    return Subspace(u[:, a]), Subspace(u[:, b])


# ----------------------------------------------------------- verification

@dataclass
class LemmaReport:
    lemma: str
    dim: int
    trials: int
    seed: int
    checked: int = 0
    vacuous: int = 0
    failures: int = 0
    noncommuting_discrepancies: int = 0
    max_residual: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma, "dim": self.dim, "trials": self.trials, "seed": self.seed,
            "checked": self.checked, "vacuous": self.vacuous, "failures": self.failures,
            "noncommuting_discrepancies": self.noncommuting_discrepancies,
            "max_residual": self.max_residual, "ok": self.ok,
        }


def _max_residual(s: Subspace, t: Subspace) -> float:
    return max((t.residual(c) for c in s.basis.T), default=0.0)


def verify_lemma_contraposition(dim: int, trials: int, rng_seed: int) -> LemmaReport:
    """If M_phi <= M_psi then ortho(M_psi) <= ortho(M_phi).

    Half the trials draw a nested pair so the implication is exercised;
    non-nested pairs are vacuous.
    """
    rng = np.random.default_rng(rng_seed)
    rep = LemmaReport("contraposition", dim, trials, rng_seed)
    for k in range(trials):
        t = random_subspace(dim, rng)
        s = random_subspace_within(t, rng) if k % 2 == 0 else random_subspace(dim, rng)
        if not leq(s, t):
            rep.vacuous += 1
            continue
        rep.checked += 1
        ot, os_ = ortho(t), ortho(s)
        rep.max_residual = max(rep.max_residual, _max_residual(ot, os_))
        if not leq(ot, os_):
            rep.failures += 1
    return rep


def verify_lemma_connective_identity(dim: int, trials: int, rng_seed: int) -> LemmaReport:
    """M(phi -> psi) is the full space exactly when M_phi <= M_psi.

    The forward direction is checked on nested pairs.  The converse holds for
    commuting pairs only; those count as failures, while discrepancies on
    generic (non-commuting) pairs are tallied separately.
    """
    rng = np.random.default_rng(rng_seed)
    rep = LemmaReport("connective_identity", dim, trials, rng_seed)
    for k in range(trials):
        kind = k % 3
        if kind == 0:
            t = random_subspace(dim, rng)
            s = random_subspace_within(t, rng)
        elif kind == 1:
            s, t = commuting_pair(dim, rng)
        else:
            s, t = random_subspace(dim, rng), random_subspace(dim, rng)
        imp = ortho(meet(s, ortho(t)))
        ordered = leq(s, t)
        full = is_full(imp)
        rep.checked += 1
        if ordered:
            rep.max_residual = max(rep.max_residual, _max_residual(s, t))
        if ordered == full:
            continue
        if kind == 2 and not ordered:
            rep.noncommuting_discrepancies += 1
        else:
            rep.failures += 1
    if rep.noncommuting_discrepancies:
        rep.notes.append("generic pairs: ~(a & ~b) can be full without a <= b")
    return rep


@dataclass(frozen=True)
class Witness:
    p: Subspace
    q: Subspace
    lhs: Subspace
    rhs: Subspace
    formula_lhs: str
    formula_rhs: str

    @property
    def verified(self) -> bool:
        return not equal(self.lhs, self.rhs)


def nondistributivity_witness() -> Witness:
    """(p | q) & ~p versus (p & ~p) | (q & ~p) in dimension 2."""
    from .formula import parse

    p = Subspace.span([[1, 0]])
    q = Subspace.span([[1 / np.sqrt(2), 1 / np.sqrt(2)]])
    lf = parse("(p | q) & ~p")
    rf = parse("(p & ~p) | (q & ~p)")
    amap = {"p": p, "q": q}
    return Witness(p, q, compile_formula(lf, amap), compile_formula(rf, amap), render(lf), render(rf))


def dumps(obj) -> str:
    return json.dumps(obj.to_json(), sort_keys=True)


def distance(s: Subspace, t: Subspace) -> float:
    """Largest residual of either basis against the other; inf on rank mismatch."""
    _same_dim(s, t)
    if s.rank != t.rank:
        return float("inf")
    return max(_max_residual(s, t), _max_residual(t, s))


@dataclass
class LawReport:
    dims: tuple
    trials: int
    seed: int
    counts: dict = field(default_factory=dict)
    failures: dict = field(default_factory=dict)
    max_residual: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def record(self, law: str, residual: float, tol: float) -> None:
        self.counts[law] = self.counts.get(law, 0) + 1
        self.failures.setdefault(law, 0)
        if not residual <= tol:
            self.failures[law] += 1
        prev = self.max_residual.get(law, 0.0)
        self.max_residual[law] = max(prev, residual)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims), "trials": self.trials, "seed": self.seed,
            "laws": {
                k: {"checked": self.counts[k], "failures": self.failures[k],
                    "max_residual": self.max_residual[k]}
                for k in sorted(self.counts)
            },
            "ok": self.ok,
        }


def verify_ortholattice_laws(dims=(2, 3, 4), trials: int = 1000, seed: int = 0) -> LawReport:
    """Involution, De Morgan, complement and orthomodularity on random samples.

    ``trials`` samples are split round-robin across ``dims``.
    """
    rng = np.random.default_rng(seed)
    rep = LawReport(tuple(dims), trials, seed)
    for k in range(trials):
        d = dims[k % len(dims)]
        s, t = random_subspace(d, rng), random_subspace(d, rng)
        tol = s.tol
        full, zero = Subspace.full(d), Subspace.zero(d)
        rep.record("involution", distance(ortho(ortho(s)), s), tol)
        rep.record("de_morgan_join", distance(ortho(join(s, t)), meet(ortho(s), ortho(t))), tol)
        rep.record("de_morgan_meet", distance(ortho(meet(s, t)), join(ortho(s), ortho(t))), tol)
        rep.record("complement_join", distance(join(s, ortho(s)), full), tol)
        rep.record("complement_meet", distance(meet(s, ortho(s)), zero), tol)
        inner = random_subspace_within(t, rng)
        rep.record("orthomodularity", distance(join(inner, meet(ortho(inner), t)), t), tol)
        # basis independence: recombine the columns of s by a random unitary
        if s.rank:
            u = random_unitary(s.rank, rng)
            s2 = Subspace(s.basis @ u)
            x = StateVector.normalized(rng.standard_normal(d) + 1j * rng.standard_normal(d))
            same = truth(x, s) == truth(x, s2) and leq(s, t) == leq(s2, t)
            rep.record("basis_independence", max(distance(meet(s, t), meet(s2, t)),
                                                 0.0 if same else float("inf")), tol)
    return rep
