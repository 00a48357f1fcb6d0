"""Figures for the ``fr run`` and ``qlattice verify`` reports (Agg backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .quantum_logic import TOL  # noqa: E402


def _save(fig, out_dir, name: str) -> str:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    target = path / name
    # fixed metadata keeps repeated runs byte-identical
    fig.savefig(target, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return str(target)


def plot_fr(state, chain, out_dir) -> list:
    amps = state.amplitudes
    labels = [state.basis_label(k) for k in range(len(amps))]
    fig, ax = plt.subplots(figsize=(8, 3.2))
    ax.bar(range(len(amps)), np.abs(amps) ** 2, color="#4c72b0")
    ax.set_xticks(range(len(amps)), labels, rotation=90, fontsize=8)
    ax.set_ylabel("probability")
    ax.set_title("|psi>_RASB in the computational basis")
    fig.tight_layout()
    files = [_save(fig, out_dir, "fr_state.png")]

    names = [c.claim for c in chain.checks] + ["u=ok & w=ok"]
    zero = [c.zero_probability for c in chain.checks] + [chain.p_ok_ok]
    fig, ax = plt.subplots(figsize=(6, 3.2))
    colors = ["#55a868"] * len(chain.checks) + ["#c44e52"]
    ax.barh(range(len(names)), zero, color=colors)
    for k, val in enumerate(zero):
        ax.text(val + 0.001, k, f"{val:.4g}", va="center", fontsize=8)
    ax.set_yticks(range(len(names)), names)
    ax.axvline(1 / 12, ls=":", color="grey")
    ax.set_xlabel("probability of the excluded / post-selected event")
    ax.set_xlim(0, 0.1)
    fig.tight_layout()
    files.append(_save(fig, out_dir, "fr_chain.png"))
    return files


def plot_qlattice(laws, lemmas, witness, out_dir) -> list:
    names = sorted(laws.max_residual)
    vals = [max(laws.max_residual[n], 1e-18) for n in names]
    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.barh(range(len(names)), vals, color="#4c72b0")
    ax.set_xscale("log")
    ax.axvline(TOL, ls=":", color="#c44e52")
    ax.set_yticks(range(len(names)), names)
    ax.set_xlabel(f"max residual (tolerance {TOL:g})")
    fig.tight_layout()
    files = [_save(fig, out_dir, "qlattice_laws.png")]

    # dim-2 witness drawn in the real plane
    fig, ax = plt.subplots(figsize=(3.6, 3.6))
    for sub, label, color in ((witness.p, "p", "#4c72b0"), (witness.q, "q", "#55a868"),
                              (witness.lhs, "(p|q)&~p", "#c44e52")):
        for col in sub.basis.T:
            v = np.real(col * np.exp(-1j * np.angle(col[np.argmax(np.abs(col))])))
            ax.plot([-v[0], v[0]], [-v[1], v[1]], color=color, label=label)
    ax.set_xlim(-1.1, 1.1)
    ax.set_ylim(-1.1, 1.1)
    ax.set_aspect("equal")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title("rhs (p&~p)|(q&~p) = 0", fontsize=9)
    fig.tight_layout()
    files.append(_save(fig, out_dir, "qlattice_witness.png"))

    fig, ax = plt.subplots(figsize=(5, 3))
    keys = [f"{r.lemma}\nd={r.dim}" for r in lemmas]
    ax.bar(range(len(lemmas)), [r.checked for r in lemmas], color="#4c72b0", label="checked")
    ax.bar(range(len(lemmas)), [r.failures for r in lemmas], color="#c44e52", label="failures")
    ax.set_xticks(range(len(lemmas)), keys, fontsize=6)
    ax.legend(fontsize=8)
    fig.tight_layout()
    files.append(_save(fig, out_dir, "qlattice_lemmas.png"))
    return files
