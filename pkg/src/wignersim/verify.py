"""Randomized property suites for the structural theorems.

Each suite runs a batch of randomized cases against one theorem-backed
property and reports failures with reproduction details. The suites are
shared between the CLI `verify` command and the test suite; all
randomness flows through a seeded generator, so runs are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .contextuality import (
    NONCONTEXTUAL,
    DisturbanceWarning,
    EmpiricalModel,
    MeasurementScenario,
    Section,
    has_global_section_extending,
    is_logically_contextual,
    model_from_setup,
)
from .hilbert import Layout, Operator, PROJECTOR, StateVector, UNITARY
from .ncycle import GammaVector, extremal_model, find_ps_free_paradox, is_extremal_vertex
from .presets import (
    KCBS_VECTORS,
    _KCBS_COMPLEMENTS,
    _binary_family,
    _cnot_small,
    _span_proj,
    fr_setup,
    kcbs_setup,
    yablo_pattern_setup,
)
from .reasoning import (
    ATOMIC_INFERENCE,
    ProjectiveScene,
    Statement,
    check_deterministic_endpoints,
    check_yablo_blocked,
    derive_statements,
    find_paradox,
    negate_inference,
    reduce_symmetric_chain,
    reduce_triple,
    strip_settings,
)
from .wigner_setup import Measurement, MultiAgentSetup
import warnings


@dataclass
class SuiteResult:
    name: str
    cases: int
    checks: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_state(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# random model / setup generators


def random_empirical_model(
    rng: np.random.Generator, max_vars: int = 6, force_global: bool | None = None
) -> EmpiricalModel:
    """Random scenario over binary variables with 2- and 3-variable contexts.

    Half the models (or all, with force_global=True) marginalize a global
    distribution with planted zeros (non-disturbing, noncontextual); the
    rest use independent per-context tables, which may signal disturbance.
    Models violating the standing nonempty-section assumption are
    regenerated.
    """
    for _ in range(50):
        model = _random_empirical_model_once(rng, max_vars, force_global)
        from .contextuality import possible_sections

        if all(possible_sections(model, c) for c in model.scenario.contexts):
            return model
    raise RuntimeError("could not generate a model with nonempty sections")


def _random_empirical_model_once(
    rng: np.random.Generator, max_vars: int, force_global: bool | None
) -> EmpiricalModel:
    n = int(rng.integers(2, max_vars + 1))
    variables = tuple(f"x{i}" for i in range(n))
    ctxs = set()
    for v in variables:
        size = int(rng.integers(2, min(3, n) + 1))
        others = [o for o in variables if o != v]
        rng.shuffle(others)
        ctxs.add(tuple(sorted([v] + others[: size - 1])))
    extra = int(rng.integers(0, 3))
    for _ in range(extra):
        size = int(rng.integers(2, min(3, n) + 1))
        ctxs.add(tuple(sorted(rng.choice(variables, size=size, replace=False))))
    # drop contexts contained in larger ones
    ctxs = tuple(sorted(c for c in ctxs if not any(set(c) < set(o) for o in ctxs)))
    scenario = MeasurementScenario(
        variables, ctxs, {v: (0, 1) for v in variables}, "random"
    )
    tables = {}
    use_global = force_global if force_global is not None else rng.random() < 0.5
    if use_global:
        glob = rng.random(2 ** n)
        glob[rng.random(2 ** n) < 0.4] = 0.0
        if glob.sum() == 0:
            glob[0] = 1.0
        glob /= glob.sum()
        glob = glob.reshape((2,) * n)
        for c in ctxs:
            axes = tuple(i for i, v in enumerate(variables) if v not in c)
            t = glob.sum(axis=axes)
            order = [v for v in variables if v in c]
            tables[c] = np.transpose(t, [order.index(v) for v in c])
    else:
        for c in ctxs:
            t = rng.random((2,) * len(c))
            t[rng.random(t.shape) < 0.3] = 0.0
            if t.sum() == 0:
                t.flat[0] = 1.0
            tables[c] = t / t.sum()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DisturbanceWarning)
        return EmpiricalModel(scenario, tables)


def random_setup(rng: np.random.Generator) -> MultiAgentSetup:
    """Random setup with <= 3 system qubits and <= 4 agents.

    Half the cases use computational-basis measurements of a state
    supported on a random set of bit strings (classical correlations with
    exact zeros, so certain inferences exist); the rest use random bases
    and a generic state. Agents may also measure earlier agents' memories.
    """
    n_sys = int(rng.integers(1, 4))
    n_agents = int(rng.integers(2, 5))
    sys_names = tuple(f"Q{i + 1}" for i in range(n_sys))
    mem_names = tuple(f"L{i + 1}" for i in range(n_agents))
    layout = Layout(
        tuple((q, 2) for q in sys_names) + tuple((m, 2) for m in mem_names)
    )
    classical = rng.random() < 0.5
    d = 2 ** n_sys
    if classical:
        support = rng.random(d) < 0.6
        if not support.any():
            support[int(rng.integers(0, d))] = True
        amps = np.where(support, rng.random(d) + 0.1, 0.0).astype(complex)
        amps /= np.linalg.norm(amps)
    else:
        amps = _random_state(rng, d)
    z0 = np.array([1, 0], dtype=complex)
    z1 = np.array([0, 1], dtype=complex)
    agents = []
    for i in range(n_agents):
        choices = list(sys_names) + [m.memory for m in agents]
        target = choices[int(rng.integers(0, len(choices)))]
        if classical or rng.random() < 0.4:
            family = (_span_proj(z0), _span_proj(z1))
        else:
            u = _random_unitary(rng, 2)
            family = (_span_proj(u[:, 0]), _span_proj(u[:, 1]))
        agents.append(
            Measurement(f"g{i + 1}", (target,), family, mem_names[i], i)
        )
    sys_layout = Layout(tuple((q, 2) for q in sys_names))
    return MultiAgentSetup(
        layout, tuple(agents), StateVector(sys_layout, amps), sys_names
    )


def rotated_fr(rng: np.random.Generator) -> MultiAgentSetup:
    """The friend/superobserver setup conjugated by random local unitaries.

    All probabilities are invariant, so the paradox (p = 1/12) survives.
    """
    base = fr_setup()
    v_r = _random_unitary(rng, 2)
    v_s = _random_unitary(rng, 2)
    psi = np.kron(v_r, v_s) @ base.initial_state.amplitudes
    z0, z1 = v_r[:, 0], v_r[:, 1]
    w0, w1 = v_s[:, 0], v_s[:, 1]
    ok_ra = np.kron(v_r, np.eye(2)) @ (
        np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    )
    ok_sb = np.kron(v_s, np.eye(2)) @ (
        np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    )
    agents = (
        Measurement("alice", ("R",), (_span_proj(z0), _span_proj(z1)), "A", 0),
        Measurement("bob", ("S",), (_span_proj(w0), _span_proj(w1)), "B", 1),
        Measurement("ursula", ("R", "A"), _binary_family(ok_ra, 4), "U", 2),
        Measurement("wigner", ("S", "B"), _binary_family(ok_sb, 4), "W", 3),
    )
    return MultiAgentSetup(
        base.layout, agents, StateVector(base.initial_state.layout, psi),
        ("R", "S"),
    )


def rotated_kcbs(rng: np.random.Generator) -> MultiAgentSetup:
    """The 5-cycle setup with the qutrit frame rotated by a random unitary."""
    base = kcbs_setup()
    u = _random_unitary(rng, 3)
    vecs = {i: u @ v for i, v in KCBS_VECTORS.items()}
    comps = {i: tuple(u @ c for c in cs) for i, cs in _KCBS_COMPLEMENTS.items()}
    psi = u @ base.initial_state.amplitudes

    def family(i: int):
        return (_span_proj(*comps[i]), _span_proj(vecs[i]))

    agents = (
        Measurement("a2", ("S",), family(2), "M2", 0),
        Measurement("a3", ("S",), family(3), "M3", 1),
        Measurement("a4", ("S",), family(4), "M4", 2,
                    pre_unitary=_cnot_small(vecs[2], ("S", "M2"))),
        Measurement("a5", ("S",), family(5), "M5", 3,
                    pre_unitary=_cnot_small(vecs[3], ("S", "M3"))),
        Measurement("a1", ("S",), family(1), "M1", 4,
                    pre_unitary=_cnot_small(vecs[4], ("S", "M4"))),
    )
    return MultiAgentSetup(
        base.layout, agents, StateVector(base.initial_state.layout, psi), ("S",)
    )


def _diagonal_scene(
    rng: np.random.Generator, sets: list[set[int]], dim: int, support: set[int]
) -> ProjectiveScene:
    """Agents whose "1" projectors are diagonal index sets in one random
    basis, with the state supported on `support`."""
    basis = _random_unitary(rng, dim)
    amps = np.zeros(dim, dtype=complex)
    idx = sorted(support)
    raw = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
    raw += 0.3 * np.sign(raw.real + 1e-12)  # keep amplitudes bounded away from 0
    amps[idx] = raw / np.linalg.norm(raw)
    state = basis @ amps
    projectors = {}
    for k, s in enumerate(sets):
        diag = np.zeros(dim)
        diag[sorted(s)] = 1.0
        p1 = basis @ np.diag(diag) @ basis.conj().T
        projectors[f"t{k + 1}"] = (np.eye(dim) - p1, p1)
    return ProjectiveScene(state, projectors)


# ---------------------------------------------------------------------------
# suites


def suite_negation(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Every certain inference in a random model has a valid contrapositive."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("negation", cases, 0)
    for case in range(cases):
        # consistent (global-distribution) models: the contrapositive is a
        # theorem about one probability space, not about disturbing tables
        model = random_empirical_model(rng, max_vars=4, force_global=True)
        for ctx in model.scenario.contexts:
            subs = [
                s for r in range(1, len(ctx))
                for s in itertools.combinations(ctx, r)
            ]
            for ant_set, cons_set in itertools.permutations(subs, 2):
                if set(ant_set) & set(cons_set):
                    continue
                for ant_vals in itertools.product((0, 1), repeat=len(ant_set)):
                    ant = tuple(zip(ant_set, ant_vals))
                    p_ant = model.probability(ctx, Section(ant))
                    if p_ant <= 1e-9:
                        continue
                    for cons_vals in itertools.product((0, 1), repeat=len(cons_set)):
                        cons = tuple(zip(cons_set, cons_vals))
                        p_joint = model.probability(
                            ctx, Section(tuple(sorted(ant + cons)))
                        )
                        if p_joint / p_ant < 1.0 - 1e-9:
                            continue
                        inf = Statement(ATOMIC_INFERENCE, ant, cons)
                        try:
                            negate_inference(model, inf)
                            res.checks += 1
                        except Exception as exc:  # noqa: BLE001 - reported
                            res.failures.append(
                                f"case {case} seed {seed}: {inf} -> {exc!r}"
                            )
    return res


def suite_reduction(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Certain links over pairwise-commuting triples compose transitively."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("reduction", cases, 0)
    for case in range(cases):
        dim = int(rng.integers(4, 9))
        universe = set(range(dim))
        support = set(
            rng.choice(dim, size=int(rng.integers(2, dim)), replace=False).tolist()
        )
        s_c = _random_nonempty(rng, universe, meeting=support)
        s_b = _grow(rng, s_c & support, universe)
        s_a = _grow(rng, s_b & support, universe)
        scene = _diagonal_scene(rng, [s_c, s_b, s_a], dim, support)
        first = Statement(ATOMIC_INFERENCE, (("t1", 1),), (("t2", 1),))
        second = Statement(ATOMIC_INFERENCE, (("t2", 1),), (("t3", 1),))
        try:
            reduced = reduce_triple(scene, first, second)
            if reduced is None:
                res.failures.append(
                    f"case {case} seed {seed}: commuting triple judged noncommuting"
                )
            else:
                res.checks += 1
        except Exception as exc:  # noqa: BLE001 - reported
            res.failures.append(f"case {case} seed {seed}: {exc!r}")
    return res


def _random_nonempty(rng, universe: set[int], meeting: set[int]) -> set[int]:
    """Random subset guaranteed to intersect `meeting`."""
    out = {x for x in universe if rng.random() < 0.5}
    if not out & meeting:
        out.add(int(rng.choice(sorted(meeting))))
    return out


def _grow(rng, seed_set: set[int], universe: set[int]) -> set[int]:
    """Superset of seed_set with random extra elements."""
    extra = {x for x in universe - seed_set if rng.random() < 0.3}
    return set(seed_set) | extra


def suite_symmetric(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Two-way certain chains with commuting families collapse to endpoint
    equivalences, and no quantum paradox certificate is fully two-way."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("symmetric", cases, 0)
    for case in range(cases):
        dim = int(rng.integers(4, 9))
        universe = set(range(dim))
        support = set(
            rng.choice(dim, size=int(rng.integers(2, dim)), replace=False).tolist()
        )
        common = _random_nonempty(rng, support, meeting=support) & support
        length = int(rng.integers(2, 5))
        sets = []
        for _ in range(length):
            s = set(common) | {x for x in universe - support if rng.random() < 0.3}
            sets.append(s)
        scene = _diagonal_scene(rng, sets, dim, support)
        events = tuple(((f"t{k + 1}", 1),) for k in range(length))
        try:
            fwd, bwd = reduce_symmetric_chain(scene, events)
            res.checks += 1
        except Exception as exc:  # noqa: BLE001 - reported
            res.failures.append(f"case {case} seed {seed}: {exc!r}")
    # quantum paradox certificates always contain a one-way link
    for name, setup in (("fr", fr_setup()), ("kcbs", kcbs_setup())):
        cert = find_paradox(setup)
        if cert is None:
            res.failures.append(f"{name}: expected a certificate")
            continue
        if _all_links_two_way(setup, cert):
            res.failures.append(f"{name}: certificate chain is fully symmetric")
        else:
            res.checks += 1
    return res


def _all_links_two_way(setup, cert) -> bool:
    from .wigner_setup import predict

    for link in cert.chain.links:
        back = predict(setup, dict(link.antecedent), dict(link.consequent))
        if back is None or back < 1.0 - 1e-9:
            return False
    return True


def suite_endpoints(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Certificates of randomized paradox-admitting setups have p < 1."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("endpoints", cases, 0)
    for case in range(cases):
        setup = rotated_fr(rng) if case % 2 == 0 else rotated_kcbs(rng)
        cert = find_paradox(setup)
        if cert is None:
            res.failures.append(f"case {case} seed {seed}: no certificate found")
            continue
        if not check_deterministic_endpoints(cert):
            res.failures.append(
                f"case {case} seed {seed}: p_postselection = {cert.p_postselection}"
            )
        else:
            res.checks += 1
    return res


def suite_yablo(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Yablo-pattern setups are fully compatible and admit no paradox."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("yablo", cases, 0)
    for case in range(cases):
        n = 4 if case % 10 == 0 else 3
        weights = rng.random(n + 1) + 0.05
        setup = yablo_pattern_setup(n, weights)
        statements = strip_settings(derive_statements(setup))
        try:
            verdict = check_yablo_blocked(setup, statements)
        except Exception as exc:  # noqa: BLE001 - reported
            res.failures.append(f"case {case} seed {seed}: {exc!r}")
            continue
        if not verdict.blocked or verdict.joint_distribution is None:
            res.failures.append(f"case {case} seed {seed}: verdict {verdict}")
        else:
            res.checks += 1
    return res


def suite_theorem1(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Contrapositive: noncontextual induced model implies no paradox.

    Also asserts that any certificate found along the way has p < 1 and is
    not fully symmetric.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("theorem1", cases, 0)
    for case in range(cases):
        setup = random_setup(rng)
        try:
            model = model_from_setup(setup)
            verdict = is_logically_contextual(model)
            cert = find_paradox(setup)
        except Exception as exc:  # noqa: BLE001 - reported
            res.failures.append(f"case {case} seed {seed}: {exc!r}")
            continue
        if verdict.verdict == NONCONTEXTUAL and cert is not None:
            res.failures.append(
                f"case {case} seed {seed}: noncontextual model but paradox {cert}"
            )
            continue
        if cert is not None:
            if not check_deterministic_endpoints(cert):
                res.failures.append(
                    f"case {case} seed {seed}: certificate with p = "
                    f"{cert.p_postselection}"
                )
                continue
            if _all_links_two_way(setup, cert):
                res.failures.append(
                    f"case {case} seed {seed}: fully symmetric certificate"
                )
                continue
        res.checks += 1
    return res


def suite_oracle(seed: int = 0, cases: int = 500) -> SuiteResult:
    """Backtracking and exhaustive section search agree on random models."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("oracle", cases, 0)
    for case in range(cases):
        model = random_empirical_model(rng, max_vars=6)
        try:
            for ctx in model.scenario.contexts:
                from .contextuality import possible_sections

                for s in possible_sections(model, ctx):
                    bt, _ = has_global_section_extending(model, s, "backtracking")
                    ex, _ = has_global_section_extending(model, s, "exhaustive")
                    if bt != ex:
                        res.failures.append(
                            f"case {case} seed {seed}: engines disagree on {s}"
                        )
                    else:
                        res.checks += 1
            v_bt = is_logically_contextual(model, "backtracking")
            v_ex = is_logically_contextual(model, "exhaustive")
            if v_bt.verdict != v_ex.verdict:
                res.failures.append(
                    f"case {case} seed {seed}: verdicts {v_bt.verdict} != {v_ex.verdict}"
                )
        except Exception as exc:  # noqa: BLE001 - reported
            res.failures.append(f"case {case} seed {seed}: {exc!r}")
    return res


def suite_ncycle(seed: int = 0, cases: int = 200) -> SuiteResult:
    """Vertex detection and post-selection-free chains match exactly."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("ncycle", cases, 0)
    for case in range(cases):
        n = int(rng.integers(3, 8))
        if rng.random() < 0.5:
            signs = [1 if rng.random() < 0.5 else -1 for _ in range(n)]
            if signs.count(-1) % 2 == 0:
                signs[int(rng.integers(0, n))] *= -1
            model = extremal_model(n, GammaVector(tuple(signs)))
            expect_vertex = True
        else:
            # random no-disturbance model: marginals chained around the cycle
            margins = rng.random(n) * 0.8 + 0.1
            tables = []
            for i in range(n):
                p, q = margins[i], margins[(i + 1) % n]
                lo = max(0.0, p + q - 1.0)
                hi = min(p, q)
                p11 = lo + rng.random() * (hi - lo)
                tables.append(
                    np.array(
                        [
                            [1 - p - q + p11, q - p11],
                            [p - p11, p11],
                        ]
                    )
                )
            from .ncycle import NCycleModel

            model = NCycleModel(n, tuple(tables))
            expect_vertex = is_extremal_vertex(model) is not None
        gamma = is_extremal_vertex(model)
        chains = find_ps_free_paradox(model)
        if (gamma is not None) != expect_vertex or (chains is not None) != (
            gamma is not None
        ):
            res.failures.append(f"case {case} seed {seed}: vertex/chain mismatch")
        else:
            res.checks += 1
    return res


ALL_SUITES = {
    "negation": suite_negation,
    "reduction": suite_reduction,
    "symmetric": suite_symmetric,
    "endpoints": suite_endpoints,
    "yablo": suite_yablo,
    "theorem1": suite_theorem1,
    "oracle": suite_oracle,
    "ncycle": suite_ncycle,
}

DEFAULT_CASES = {
    "negation": 200,
    "reduction": 200,
    "symmetric": 200,
    "endpoints": 200,
    "yablo": 200,
    "theorem1": 200,
    "oracle": 500,
    "ncycle": 200,
}
