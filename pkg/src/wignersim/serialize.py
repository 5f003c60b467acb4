"""JSON round-trips for setups and models, plus DOT export for graphs.

Conventions: complex numbers as [re, im] pairs; probabilities as
[num, den] when they are exactly representable as small rationals (giving
bit-exact golden files), plain floats otherwise.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .contextuality import EmpiricalModel, MeasurementScenario
from .hilbert import Layout, Operator, PROJECTOR, StateVector, UNITARY
from .ncycle import NCycleModel
from .reasoning import ParadoxCertificate, ReferenceGraph, Statement
from .wigner_setup import Measurement, MultiAgentSetup


class SchemaError(ValueError):
    """Input document does not match the expected JSON layout."""


# ---------------------------------------------------------------------------
# scalars


def _c_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _c_from_json(v) -> complex:
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise SchemaError(f"complex number must be [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


_MAX_DEN = 10_000


def prob_to_json(p: float):
    """[num, den] when exact at small denominator, else the float itself."""
    frac = Fraction(p).limit_denominator(_MAX_DEN)
    if float(frac) == p:
        return [frac.numerator, frac.denominator]
    return float(p)


def prob_from_json(v) -> float:
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return v[0] / v[1]
    raise SchemaError(f"probability must be number or [num, den], got {v!r}")


def _matrix_to_json(m: np.ndarray) -> list:
    return [[_c_to_json(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _matrix_from_json(rows) -> np.ndarray:
    try:
        return np.array([[_c_from_json(z) for z in row] for row in rows])
    except (TypeError, IndexError) as exc:
        raise SchemaError(f"bad matrix: {exc}") from exc


def _vector_from_json(vals) -> np.ndarray:
    return np.array([_c_from_json(z) for z in vals])


# ---------------------------------------------------------------------------
# setups


def setup_to_json(setup: MultiAgentSetup) -> dict:
    agents = []
    for m in setup.agents:
        entry = {
            "agent": m.agent,
            "targets": list(m.targets),
            "projectors": [_matrix_to_json(p.matrix) for p in m.projectors],
            "memory": m.memory,
            "time": m.time,
        }
        if m.pre_unitary is not None:
            entry["pre_unitary"] = {
                "targets": list(m.pre_unitary.targets),
                "matrix": _matrix_to_json(m.pre_unitary.matrix),
            }
        agents.append(entry)
    return {
        "layout": [[n, d] for n, d in setup.layout.subsystems],
        "systems": list(setup.systems),
        "initial_state": [_c_to_json(z) for z in setup.initial_state.amplitudes],
        "memory_init": dict(setup.memory_init),
        "agents": agents,
    }


def _projector_family_from_json(entry, dim: int):
    """Projectors given either as explicit matrices or as named basis
    vectors (one rank-1 projector per vector)."""
    if "projectors" in entry:
        return tuple(
            Operator(_matrix_from_json(rows), kind=PROJECTOR)
            for rows in entry["projectors"]
        )
    if "basis" in entry:
        projs = []
        for vec in entry["basis"]:
            v = _vector_from_json(vec)
            projs.append(Operator(np.outer(v, v.conj()), kind=PROJECTOR))
        return tuple(projs)
    raise SchemaError(f"agent {entry.get('agent')!r} has no projectors or basis")


def setup_from_json(doc: dict) -> MultiAgentSetup:
    try:
        layout = Layout(tuple((n, int(d)) for n, d in doc["layout"]))
        systems = tuple(doc["systems"])
        agents = []
        for entry in doc["agents"]:
            targets = tuple(entry["targets"])
            dim = 1
            for t in targets:
                dim *= layout.dim_of(t)
            pre = None
            if "pre_unitary" in entry:
                pre = Operator(
                    _matrix_from_json(entry["pre_unitary"]["matrix"]),
                    kind=UNITARY,
                    targets=tuple(entry["pre_unitary"]["targets"]),
                )
            agents.append(
                Measurement(
                    entry["agent"],
                    targets,
                    _projector_family_from_json(entry, dim),
                    entry["memory"],
                    int(entry["time"]),
                    pre_unitary=pre,
                )
            )
        sys_layout = layout.sub(systems)
        state = StateVector(sys_layout, _vector_from_json(doc["initial_state"]))
        return MultiAgentSetup(
            layout, tuple(agents), state, systems,
            dict(doc.get("memory_init", {})),
        )
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad setup document: {exc!r}") from exc


# ---------------------------------------------------------------------------
# empirical models


def model_to_json(model: EmpiricalModel) -> dict:
    sc = model.scenario
    return {
        "variables": list(sc.variables),
        "outcomes": {v: list(sc.outcomes[v]) for v in sc.variables},
        "state_ref": sc.state_ref,
        "contexts": [
            {
                "variables": list(c),
                "table": [prob_to_json(p) for p in model.tables[c].reshape(-1)],
            }
            for c in sc.contexts
        ],
    }


def model_from_json(doc: dict) -> EmpiricalModel:
    try:
        variables = tuple(doc["variables"])
        outcomes = {v: tuple(doc["outcomes"][v]) for v in variables}
        ctxs = tuple(tuple(c["variables"]) for c in doc["contexts"])
        scenario = MeasurementScenario(
            variables, ctxs, outcomes, doc.get("state_ref", "")
        )
        tables = {}
        for c in doc["contexts"]:
            key = tuple(c["variables"])
            shape = tuple(len(outcomes[v]) for v in key)
            flat = np.array([prob_from_json(p) for p in c["table"]])
            tables[key] = flat.reshape(shape)
        return EmpiricalModel(scenario, tables)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"bad model document: {exc!r}") from exc


# ---------------------------------------------------------------------------
# n-cycle models


def ncycle_to_json(model: NCycleModel) -> dict:
    return {
        "n": model.n,
        "edge_tables": [
            [prob_to_json(p) for p in t.reshape(-1)] for t in model.edge_tables
        ],
    }


def ncycle_from_json(doc: dict) -> NCycleModel:
    try:
        n = int(doc["n"])
        tables = tuple(
            np.array([prob_from_json(p) for p in flat]).reshape(2, 2)
            for flat in doc["edge_tables"]
        )
        return NCycleModel(n, tables)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad n-cycle document: {exc!r}") from exc


# ---------------------------------------------------------------------------
# certificates and graphs


def _event_to_json(e) -> dict:
    return {a: v for a, v in e}


def statement_to_json(st: Statement) -> dict:
    out = {
        "kind": st.kind,
        "antecedent": _event_to_json(st.antecedent),
        "consequent": _event_to_json(st.consequent),
    }
    if st.probability is not None:
        out["probability"] = prob_to_json(st.probability)
    if st.settings is not None:
        out["settings"] = list(st.settings)
    return out


def certificate_to_json(cert: ParadoxCertificate) -> dict:
    fixed, negated = cert.contradicted
    return {
        "postselection": _event_to_json(cert.postselection),
        "p_postselection": prob_to_json(cert.p_postselection),
        "chain": [statement_to_json(l) for l in cert.chain.links],
        "contradicted": {
            "fixed": _event_to_json(fixed),
            "derived": _event_to_json(negated),
        },
    }


def _node_label(node) -> str:
    return "{" + ",".join(sorted(node)) + "}"


def graph_to_dot(graph: ReferenceGraph, name: str = "reference") -> str:
    lines = [f"digraph {name} {{"]
    for node in graph.nodes:
        lines.append(f'  "{_node_label(node)}";')
    for a, b in graph.edges:
        lines.append(f'  "{_node_label(a)}" -> "{_node_label(b)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_json(graph: ReferenceGraph) -> dict:
    adjacency: dict[str, list[str]] = {_node_label(n): [] for n in graph.nodes}
    for a, b in graph.edges:
        adjacency[_node_label(a)].append(_node_label(b))
    return {k: sorted(v) for k, v in sorted(adjacency.items())}
