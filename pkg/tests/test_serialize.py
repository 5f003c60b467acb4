import json

import numpy as np
import pytest

import wignersim as ws
from wignersim.serialize import (
    SchemaError,
    certificate_to_json,
    graph_to_dot,
    graph_to_json,
    model_from_json,
    model_to_json,
    ncycle_from_json,
    ncycle_to_json,
    prob_from_json,
    prob_to_json,
    setup_from_json,
    setup_to_json,
)


def test_prob_round_trip():
    assert prob_to_json(0.25) == [1, 4]
    assert prob_to_json(1 / 3) == [1, 3]
    # a float with no small exact rational stays a float
    ugly = 0.1234567890123
    assert prob_to_json(ugly) == ugly
    assert prob_from_json([1, 12]) == 1 / 12
    assert prob_from_json(0.5) == 0.5
    with pytest.raises(SchemaError):
        prob_from_json("half")


def _assert_setups_equal(a, b):
    assert a.layout == b.layout
    assert a.systems == b.systems
    assert np.allclose(a.initial_state.amplitudes, b.initial_state.amplitudes)
    assert a.memory_init == b.memory_init
    for ma, mb in zip(a.agents, b.agents):
        assert (ma.agent, ma.targets, ma.memory, ma.time) == (
            mb.agent, mb.targets, mb.memory, mb.time,
        )
        for pa, pb in zip(ma.projectors, mb.projectors):
            assert np.abs(pa.matrix - pb.matrix).max() < 1e-12
        if ma.pre_unitary is None:
            assert mb.pre_unitary is None
        else:
            assert ma.pre_unitary.targets == mb.pre_unitary.targets
            assert np.abs(
                ma.pre_unitary.matrix - mb.pre_unitary.matrix
            ).max() < 1e-12


def test_setup_round_trip_with_pre_unitaries():
    for setup in (ws.fr_setup(), ws.kcbs_setup()):
        doc = json.loads(json.dumps(setup_to_json(setup)))
        _assert_setups_equal(setup, setup_from_json(doc))


def test_setup_accepts_basis_vectors():
    doc = setup_to_json(ws.fr_setup())
    z = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
    doc["agents"][0].pop("projectors")
    doc["agents"][0]["basis"] = z
    setup = setup_from_json(doc)
    assert np.allclose(
        setup.measurement("alice").projectors[1].matrix, np.diag([0.0, 1.0])
    )


def test_setup_schema_errors():
    with pytest.raises(SchemaError):
        setup_from_json({"layout": [["R", 2]]})
    doc = setup_to_json(ws.fr_setup())
    doc["agents"][0].pop("projectors")
    with pytest.raises(SchemaError):
        setup_from_json(doc)


def test_model_round_trip():
    model = ws.model_from_setup(ws.fr_setup())
    doc = json.loads(json.dumps(model_to_json(model)))
    back = model_from_json(doc)
    assert back.scenario.contexts == model.scenario.contexts
    for c in model.scenario.contexts:
        assert np.abs(back.tables[c] - model.tables[c]).max() < 1e-12
    with pytest.raises(SchemaError):
        model_from_json({"variables": ["x"]})


def test_ncycle_round_trip():
    model = ws.pr_box_model()
    doc = json.loads(json.dumps(ncycle_to_json(model)))
    back = ncycle_from_json(doc)
    assert back.n == model.n
    for a, b in zip(back.edge_tables, model.edge_tables):
        assert np.allclose(a, b)
    with pytest.raises(SchemaError):
        ncycle_from_json({"n": 3, "edge_tables": "nope"})


def test_certificate_and_graph_export():
    cert = ws.find_paradox(ws.fr_setup())
    doc = certificate_to_json(cert)
    assert doc["postselection"] == {"ursula": 1, "wigner": 1}
    # the computed value is not the exact binary float of 1/12, so it
    # serializes as a plain float
    assert prob_from_json(doc["p_postselection"]) == pytest.approx(1 / 12)
    assert len(doc["chain"]) == 3
    assert doc["contradicted"]["fixed"] == {"wigner": 1}
    graph = ws.reference_graph(cert)
    dot = graph_to_dot(graph)
    assert dot.startswith("digraph reference {")
    assert '"{ursula,wigner}" -> "{ursula}"' in dot
    adj = graph_to_json(graph)
    assert "{wigner}" in adj["{alice}"]
    # adjacency is JSON-serializable and deterministic
    assert json.dumps(adj) == json.dumps(graph_to_json(ws.reference_graph(cert)))
