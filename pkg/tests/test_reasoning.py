import numpy as np
import pytest

import wignersim as ws
from wignersim.reasoning import (
    ATOMIC_INFERENCE,
    ATOMIC_OUTCOME,
    InferenceChain,
    PatternMismatch,
    ProjectiveScene,
    Statement,
    VerificationError,
    check_deterministic_endpoints,
    check_yablo_blocked,
    conflicts,
    consistent_assignment,
    derive_statements,
    entails,
    make_event,
    negate_event,
    negate_inference,
    reduce_symmetric_chain,
    reduce_triple,
    reference_graph,
    has_directed_cycle,
    strip_settings,
)


def test_event_helpers():
    e = make_event({"b": 1, "a": 0})
    assert e == (("a", 0), ("b", 1))
    assert entails(e, (("a", 0),))
    assert not entails(e, (("a", 1),))
    assert conflicts(e, (("a", 1), ("c", 0))) == (("a", 1),)
    assert negate_event(e) == (("a", 1), ("b", 0))
    with pytest.raises(ValueError):
        negate_event((("a", 2),))


def test_statement_validation():
    with pytest.raises(ValueError):
        Statement(ATOMIC_OUTCOME, (("a", 0),), (("b", 1),))
    with pytest.raises(ValueError):
        Statement(ATOMIC_INFERENCE, (), (("b", 1),))


def test_inference_chain_composition():
    s1 = Statement(ATOMIC_INFERENCE, (("a", 1),), (("b", 1),))
    s2 = Statement(ATOMIC_INFERENCE, (("b", 1),), (("c", 0),))
    chain = InferenceChain((s1, s2), (("a", 1),))
    assert chain.events == ((("a", 1),), (("b", 1),), (("c", 0),))
    with pytest.raises(ValueError):  # links do not compose
        InferenceChain((s2, s1), (("b", 1),))
    with pytest.raises(ValueError):  # wrong start event
        InferenceChain((s1,), (("a", 0),))


def test_derive_statements_contain_certain_links():
    fr = ws.fr_setup()
    stripped = strip_settings(derive_statements(fr))
    inferences = {(s.antecedent, s.consequent) for s in stripped
                  if s.kind == ATOMIC_INFERENCE}
    assert ((("ursula", 1),), (("bob", 1),)) in inferences
    assert ((("bob", 1),), (("alice", 1),)) in inferences
    assert ((("alice", 1),), (("wigner", 0),)) in inferences
    # stripped statements carry no setting labels
    assert all(s.settings is None for s in stripped)


def test_find_paradox_on_hardy_setup():
    fr = ws.fr_setup()
    cert = ws.find_paradox(fr)
    assert cert is not None
    assert dict(cert.postselection) == {"ursula": 1, "wigner": 1}
    assert abs(cert.p_postselection - 1 / 12) < 1e-9
    assert cert.chain.events == (
        (("ursula", 1),), (("bob", 1),), (("alice", 1),), (("wigner", 0),),
    )
    assert check_deterministic_endpoints(cert)
    assert has_directed_cycle(reference_graph(cert))


def test_reference_graph_acyclic_for_yablo_statements():
    g = reference_graph(ws.yablo_prefix(4))
    assert not has_directed_cycle(g)
    # liar statements close a cycle
    assert has_directed_cycle(reference_graph(ws.liar_chain(3)))


def test_negate_inference():
    fr = ws.fr_setup()
    st = Statement(ATOMIC_INFERENCE, (("alice", 1),), (("wigner", 0),))
    neg = negate_inference(fr, st)
    assert neg.antecedent == (("wigner", 1),)
    assert neg.consequent == (("alice", 0),)
    assert abs(neg.probability - 1.0) < 1e-9
    # a non-certain conditional is rejected
    bad = Statement(ATOMIC_INFERENCE, (("alice", 0),), (("bob", 1),))
    with pytest.raises(VerificationError):
        negate_inference(fr, bad)


def _ghz_scene():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    p0, p1 = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])

    def on(i, p):
        ops = [p if j == i else np.eye(2) for j in range(3)]
        return np.kron(np.kron(ops[0], ops[1]), ops[2])

    projs = {f"x{i + 1}": (on(i, p0), on(i, p1)) for i in range(3)}
    return ProjectiveScene(ghz, projs)


def test_reduce_triple_commuting_families():
    scene = _ghz_scene()
    first = Statement(ATOMIC_INFERENCE, (("x3", 1),), (("x2", 1),))
    second = Statement(ATOMIC_INFERENCE, (("x2", 1),), (("x1", 1),))
    reduced = reduce_triple(scene, first, second)
    assert reduced is not None
    assert reduced.antecedent == (("x3", 1),)
    assert reduced.consequent == (("x1", 1),)
    assert abs(reduced.probability - 1.0) < 1e-9


def test_reduce_triple_noncommuting_returns_none():
    fr = ws.fr_setup()
    first = Statement(ATOMIC_INFERENCE, (("ursula", 1),), (("bob", 1),))
    second = Statement(ATOMIC_INFERENCE, (("bob", 1),), (("alice", 1),))
    assert reduce_triple(fr, first, second) is None


def test_reduce_symmetric_chain():
    scene = _ghz_scene()
    events = ((("x1", 0),), (("x2", 0),), (("x3", 0),))
    fwd, back = reduce_symmetric_chain(scene, events)
    assert fwd.antecedent == (("x1", 0),) and fwd.consequent == (("x3", 0),)
    assert back.antecedent == (("x3", 0),) and back.consequent == (("x1", 0),)
    assert abs(fwd.probability - 1.0) < 1e-9
    assert abs(back.probability - 1.0) < 1e-9


def test_check_yablo_blocked():
    setup = ws.yablo_pattern_setup(3)
    statements = strip_settings(derive_statements(setup))
    verdict = check_yablo_blocked(setup, statements)
    assert verdict.blocked
    assert sorted(verdict.permutation) == ["s1", "s2", "s3"]
    assert abs(verdict.joint_distribution.sum() - 1.0) < 1e-9
    with pytest.raises(PatternMismatch):
        check_yablo_blocked(setup, ws.liar_chain(3))


def test_consistent_assignment():
    variables = ("s1", "s2", "s3")
    assert consistent_assignment(ws.liar_chain(3), variables) is None
    sat = consistent_assignment(ws.yablo_prefix(3), variables)
    assert sat is not None
    assert all(
        not (sat[f"s{i}"] == 1 and sat[f"s{j}"] == 1)
        for i in range(1, 4)
        for j in range(i + 1, 4)
    )
