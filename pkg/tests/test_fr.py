import itertools

import numpy as np
import pytest

from knowability import fr

TOL = 1e-12
S3 = 1 / np.sqrt(3)


def test_wigner_friend_state():
    v = fr.wigner_friend_state().amplitudes
    assert np.allclose(v, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=TOL)


def test_copy_interaction_basis_case():
    v = np.array([1, 0, 0, 0], dtype=complex)
    assert np.allclose(fr.copy_interaction(v, 2, 0, 1), v)
    w = np.array([0, 0, 1, 0], dtype=complex)  # |10> -> |11>
    assert np.allclose(fr.copy_interaction(w, 2, 0, 1), [0, 0, 0, 1])


def test_fr_state_amplitudes():
    psi = fr.fr_state()
    expect = np.zeros(16)
    expect[[0b0000, 0b1100, 0b1111]] = S3
    assert np.max(np.abs(psi.amplitudes - expect)) <= TOL


def test_every_stage_is_normalized():
    for name, v in fr.fr_stages():
        assert abs(np.linalg.norm(v) - 1) <= TOL, name


def test_memory_statistics():
    psi = fr.fr_state()
    assert fr.joint_probability(psi, {"a=0"}) == pytest.approx(1 / 3, abs=TOL)
    assert fr.joint_probability(psi, {"a=1"}) == pytest.approx(2 / 3, abs=TOL)


def test_projectors():
    P = fr.projectors()
    assert abs(np.vdot(P["u=ok"].vector, P["u=fail"].vector)) <= TOL
    assert np.vdot(P["u=fail"].vector, [1, 0, 0, 0]) == pytest.approx(1 / np.sqrt(2))
    for p in P.values():
        assert np.linalg.norm(p.vector) == pytest.approx(1)


def test_post_selection_amplitude():
    psi = fr.fr_state()
    amp = fr.joint_amplitude(psi, {"u=ok", "w=ok"})
    assert abs(amp - 1 / (2 * np.sqrt(3))) <= TOL
    assert abs(fr.joint_probability(psi, {"u=ok", "w=ok"}) - 1 / 12) <= TOL


def test_residual_after_ursula():
    # <ok|_RA psi = -1/sqrt(6) |11>_SB
    res = fr.joint_amplitude(fr.fr_state(), {"u=ok"})
    assert np.allclose(res, [0, 0, 0, -1 / np.sqrt(6)], atol=TOL)
    assert fr.joint_probability(fr.fr_state(), {"u=ok"}) == pytest.approx(1 / 6, abs=TOL)


@pytest.mark.parametrize("event", [{"u=ok", "b=0"}, {"a=0", "b=1"}, {"a=1", "w=ok"}])
def test_chain_zero_events(event):
    assert fr.joint_probability(fr.fr_state(), event) <= TOL


def test_chain_report():
    rep = fr.inference_chain_report()
    assert rep.ok and rep.paradox
    assert all(c.ok for c in rep.checks)
    assert "paradox" in rep.verdict()


def test_certified_propositions():
    assert fr.certified_propositions() == [
        ("b1_given_uok", 1), ("a1_given_b1", 1), ("wfail_given_a1", 1), ("uok_wok_possible", 1),
    ]


def test_regrouped_forms():
    psi = fr.fr_state().amplitudes
    for name, v in fr.regrouped_forms().items():
        assert np.max(np.abs(v - psi)) <= TOL, name


def test_total_probability():
    psi = fr.fr_state()
    pairs = [("u", "w"), ("a", "b"), ("u", "b"), ("a", "w")]
    outs = {"u": ("ok", "fail"), "w": ("ok", "fail"), "a": ("0", "1"), "b": ("0", "1")}
    for x, y in pairs:
        for vx in outs[x]:
            total = sum(fr.joint_probability(psi, {f"{x}={vx}", f"{y}={vy}"}) for vy in outs[y])
            assert abs(total - fr.joint_probability(psi, {f"{x}={vx}"})) <= TOL


def test_basis_order_independence():
    psi = fr.fr_state()
    events = [{"u=ok", "w=ok"}, {"a=1"}, {"u=ok", "b=1"}, {"w=fail"}]
    for order in itertools.permutations(fr.LABELS):
        perm = psi.permuted(order)
        for e in events:
            assert abs(fr.joint_probability(perm, e) - fr.joint_probability(psi, e)) <= TOL


def test_constraint_errors():
    psi = fr.fr_state()
    with pytest.raises(fr.ConstraintError):
        fr.joint_amplitude(psi, {"u=ok", "a=0"})
    with pytest.raises(fr.ConstraintError):
        fr.joint_amplitude(psi, {"x=1"})
