import numpy as np
import pytest

import wignersim as ws
from wignersim.ncycle import (
    GammaVector,
    NCycleModel,
    expectation,
    extremal_model,
    find_ps_free_paradox,
    is_extremal_vertex,
    max_omega,
    ncycle_from_empirical,
    ncycle_to_empirical,
    omega,
)

EQUAL = np.array([[0.5, 0.0], [0.0, 0.5]])
DIFFER = np.array([[0.0, 0.5], [0.5, 0.0]])
UNIFORM = np.full((2, 2), 0.25)


def test_gamma_vector_validation():
    GammaVector((1, -1, 1))
    with pytest.raises(ValueError):  # even number of -1 entries
        GammaVector((1, 1, 1))
    with pytest.raises(ValueError):
        GammaVector((1, 0, -1))


def test_model_validation():
    with pytest.raises(ValueError):  # n >= 3
        NCycleModel(2, (EQUAL, EQUAL))
    with pytest.raises(ValueError):  # wrong table count
        NCycleModel(3, (EQUAL, EQUAL))
    skew = np.array([[0.7, 0.0], [0.0, 0.3]])
    with pytest.raises(ValueError):  # neighbours disagree on shared marginal
        NCycleModel(3, (EQUAL, skew, DIFFER))


def test_expectation_and_omega_on_pr_box():
    model = ws.pr_box_model()
    assert [expectation(model, i) for i in (1, 2, 3, 4)] == [1, 1, 1, -1]
    gamma = GammaVector((1, 1, 1, -1))
    assert abs(omega(model, gamma) - 4.0) < 1e-12
    best, arg = max_omega(model)
    assert abs(best - 4.0) < 1e-12 and arg.signs == (1, 1, 1, -1)
    with pytest.raises(ValueError):
        expectation(model, 5)
    with pytest.raises(ValueError):
        omega(model, GammaVector((-1,) * 5))


def test_extremal_model_marginals():
    model = extremal_model(5, GammaVector((1, -1, 1, -1, -1)))
    for t in model.edge_tables:
        assert np.allclose(t.sum(axis=1), [0.5, 0.5])
        assert np.allclose(t.sum(axis=0), [0.5, 0.5])
    assert is_extremal_vertex(model).signs == (1, -1, 1, -1, -1)


def test_is_extremal_vertex_none_cases():
    # noisy correlations
    assert is_extremal_vertex(NCycleModel(3, (UNIFORM,) * 3)) is None
    # deterministic point: all +-1 but even number of -1 edges
    assert is_extremal_vertex(NCycleModel(3, (EQUAL, DIFFER, DIFFER))) is None


def test_ps_free_paradox_at_vertex():
    chains = find_ps_free_paradox(ws.pr_box_model())
    assert chains is not None
    up, down = chains
    assert len(up) == 4 and len(down) == 4
    # each cycle ends on the flipped start value
    assert up[0].antecedent == (("X1", 0),) and up[-1].consequent == (("X1", 1),)
    assert down[0].antecedent == (("X1", 1),) and down[-1].consequent == (("X1", 0),)
    assert all(abs(l.probability - 1.0) < 1e-12 for c in chains for l in c)
    assert find_ps_free_paradox(NCycleModel(4, (UNIFORM,) * 4)) is None


def test_empirical_round_trip():
    model = ws.pr_box_model()
    emp = ncycle_to_empirical(model)
    back = ncycle_from_empirical(emp)
    assert back.n == 4
    for a, b in zip(back.edge_tables, model.edge_tables):
        assert np.allclose(a, b)


def test_from_empirical_handles_reordered_contexts():
    from wignersim.contextuality import EmpiricalModel, MeasurementScenario

    names = ("X1", "X2", "X3")
    # contexts listed out of cycle order, one pair transposed
    scenario = MeasurementScenario(
        names,
        (("X3", "X2"), ("X1", "X2"), ("X3", "X1")),
        {v: (0, 1) for v in names},
    )
    emp = EmpiricalModel(
        scenario, {("X3", "X2"): DIFFER, ("X1", "X2"): EQUAL, ("X3", "X1"): DIFFER}
    )
    cyc = ncycle_from_empirical(emp)
    assert cyc.n == 3
    assert [expectation(cyc, i) for i in (1, 2, 3)] == [1, -1, -1]


def test_from_empirical_rejects_non_cycles():
    from wignersim.contextuality import EmpiricalModel, MeasurementScenario

    names = ("X1", "X2", "X3")
    scenario = MeasurementScenario(
        names,
        (("X1", "X2"), ("X1", "X3"), ("X2", "X1")),
        {v: (0, 1) for v in names},
    )
    emp = EmpiricalModel(
        scenario,
        {("X1", "X2"): UNIFORM, ("X1", "X3"): UNIFORM, ("X2", "X1"): UNIFORM},
    )
    with pytest.raises(ValueError):
        ncycle_from_empirical(emp)
