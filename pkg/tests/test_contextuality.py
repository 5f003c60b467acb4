import warnings

import numpy as np
import pytest

import wignersim as ws
from wignersim.contextuality import (
    DisturbanceWarning,
    EmpiricalModel,
    MeasurementScenario,
    Section,
    has_global_section_extending,
    is_logically_contextual,
    possible_sections,
)


def _pair_scenario():
    return MeasurementScenario(
        ("x", "y", "z"),
        (("x", "y"), ("y", "z")),
        {v: (0, 1) for v in ("x", "y", "z")},
    )


def _product_model():
    uniform = np.full((2, 2), 0.25)
    return EmpiricalModel(
        _pair_scenario(), {("x", "y"): uniform, ("y", "z"): uniform}
    )


def test_scenario_validation():
    with pytest.raises(ValueError):
        MeasurementScenario(("x",), (("x", "y"),), {"x": (0, 1)})
    with pytest.raises(ValueError):  # variable in no context
        MeasurementScenario(
            ("x", "y"), (("x",),), {"x": (0, 1), "y": (0, 1)}
        )


def test_model_validation():
    sc = _pair_scenario()
    bad = np.full((2, 2), 0.3)
    with pytest.raises(ValueError):
        EmpiricalModel(sc, {("x", "y"): bad, ("y", "z"): bad})
    with pytest.raises(ValueError):
        EmpiricalModel(sc, {("x", "y"): np.full((2, 2), 0.25)})


def test_disturbance_warning():
    sc = _pair_scenario()
    t1 = np.array([[0.5, 0.0], [0.0, 0.5]])  # y uniform
    t2 = np.array([[0.9, 0.0], [0.0, 0.1]])  # y skewed
    with pytest.warns(DisturbanceWarning):
        EmpiricalModel(sc, {("x", "y"): t1, ("y", "z"): t2})


def test_marginal_axis_order():
    m = _product_model()
    t = np.array([[0.4, 0.1], [0.2, 0.3]])
    model = EmpiricalModel(
        _pair_scenario(),
        {("x", "y"): t, ("y", "z"): np.outer(t.sum(axis=0), [0.5, 0.5])},
    )
    assert np.allclose(model.marginal(("x", "y"), ("x",)), t.sum(axis=1))
    assert np.allclose(model.marginal(("x", "y"), ("y", "x")), t.T)
    assert abs(model.probability(("x", "y"), Section((("y", 1),))) - 0.4) < 1e-12


def test_possible_sections_product_model():
    m = _product_model()
    assert len(possible_sections(m, ("x", "y"))) == 4
    verdict = is_logically_contextual(m, engine="both")
    assert verdict.verdict == ws.NONCONTEXTUAL
    assert verdict.global_section is not None


def test_possible_sections_respect_support():
    sc = _pair_scenario()
    corr = np.array([[0.5, 0.0], [0.0, 0.5]])
    model = EmpiricalModel(sc, {("x", "y"): corr, ("y", "z"): corr})
    secs = possible_sections(model, ("x", "y"))
    assert {s.as_dict()["x"] == s.as_dict()["y"] for s in secs} == {True}


def test_engines_agree_on_pr_box():
    model = ws.ncycle_to_empirical(ws.pr_box_model())
    verdict = is_logically_contextual(model, engine="both")
    assert verdict.verdict == ws.STRONG
    assert verdict.global_section is None
    ok, w = has_global_section_extending(
        model, Section((("X1", 0),)), engine="both"
    )
    assert not ok and w is None


def test_extending_witness_consistency():
    m = _product_model()
    ok, w = has_global_section_extending(
        m, Section((("x", 1), ("z", 0))), engine="both"
    )
    assert ok
    assert w.as_dict()["x"] == 1 and w.as_dict()["z"] == 0


def test_model_from_setup_matches_joint_tables():
    fr = ws.fr_setup()
    model = ws.model_from_setup(fr)
    assert set(model.scenario.contexts) == set(ws.contexts(fr))
    t = model.tables[("ursula", "wigner")]
    assert abs(t[1, 1] - 1 / 12) < 1e-9
