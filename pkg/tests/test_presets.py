import itertools

import numpy as np
import pytest

import wignersim as ws
from wignersim.presets import KCBS_VECTORS, _KCBS_COMPLEMENTS
from wignersim.reasoning import ATOMIC_INFERENCE, derive_statements, strip_settings


def test_fr_setup_shape_and_state():
    fr = ws.fr_setup()
    assert fr.agent_names == ("alice", "bob", "ursula", "wigner")
    psi = fr.initial_state.amplitudes
    assert np.allclose(psi, np.array([1, 0, 1, 1]) / np.sqrt(3))
    assert fr.layout.names == ("R", "S", "A", "B", "U", "W")


def test_kcbs_vectors_form_a_five_cycle():
    # adjacent marked vectors are orthogonal, non-adjacent are not
    for i, j in itertools.combinations(range(1, 6), 2):
        ip = abs(np.vdot(KCBS_VECTORS[i], KCBS_VECTORS[j]))
        adjacent = (j - i) % 5 in (1, 4)
        assert (ip < 1e-12) == adjacent, (i, j, ip)


def test_kcbs_complements_complete_orthonormal_bases():
    for i in range(1, 6):
        basis = (KCBS_VECTORS[i],) + _KCBS_COMPLEMENTS[i]
        gram = np.array([[np.vdot(a, b) for b in basis] for a in basis])
        assert np.abs(gram - np.eye(3)).max() < 1e-12


def test_kcbs_setup_time_order_and_undo_unitaries():
    kcbs = ws.kcbs_setup()
    assert kcbs.agent_names == ("a2", "a3", "a4", "a5", "a1")
    # the first two agents measure directly; the later three first undo
    # the memory-record of the agent measured two steps before
    pres = [m.pre_unitary for m in kcbs.agents]
    assert pres[0] is None and pres[1] is None
    assert all(p is not None for p in pres[2:])
    assert pres[2].targets == ("S", "M2")
    assert pres[3].targets == ("S", "M3")
    assert pres[4].targets == ("S", "M4")


def test_compat_demo_setups_structure():
    setup_a, setup_b = ws.compat_demo_setups()
    assert setup_a.agent_names == ("alice", "bob", "charlie", "debbie")
    assert setup_b.agent_names == ("alice", "ursula", "bob")
    _, setup_b_bell = ws.compat_demo_setups(ursula_bell=True)
    # the record-basis and Bell-basis variants differ only in Ursula's family
    p_rec = setup_b.measurement("ursula").projectors[1].matrix
    p_bell = setup_b_bell.measurement("ursula").projectors[1].matrix
    assert np.abs(p_rec - p_bell).max() > 0.1


def test_pr_box_model_is_the_standard_vertex():
    model = ws.pr_box_model()
    assert model.n == 4
    assert ws.is_extremal_vertex(model).signs == (1, 1, 1, -1)


def test_liar_chain_statements():
    sts = ws.liar_chain(3)
    assert len(sts) == 6
    assert all(s.kind == ATOMIC_INFERENCE for s in sts)
    # the closing pair negates: s3 = not s1
    closing = {(s.antecedent, s.consequent) for s in sts[-2:]}
    assert ((("s3", 0),), (("s1", 1),)) in closing
    assert ((("s3", 1),), (("s1", 0),)) in closing
    with pytest.raises(ValueError):
        ws.liar_chain(0)


def test_yablo_prefix_statements():
    sts = ws.yablo_prefix(4)
    assert len(sts) == 6  # one inference per ordered pair i < j
    assert all(
        dict(s.antecedent).popitem()[1] == 1
        and dict(s.consequent).popitem()[1] == 0
        for s in sts
    )


def test_yablo_pattern_setup_realizes_the_prefix():
    setup = ws.yablo_pattern_setup(3)
    derived = strip_settings(derive_statements(setup))
    pairs = {
        (s.antecedent, s.consequent)
        for s in derived
        if s.kind == ATOMIC_INFERENCE
    }
    for st in ws.yablo_prefix(3):
        assert (st.antecedent, st.consequent) in pairs
    # custom weights must be positive and of the right length
    with pytest.raises(ValueError):
        ws.yablo_pattern_setup(3, weights=[1, 1, 1])
    with pytest.raises(ValueError):
        ws.yablo_pattern_setup(1)
