"""Multi-agent measurement setups with per-measurement cut settings.

A setup is a list of agents, each measuring some subsystems (systems or
other agents' memories) at a distinct time and recording the outcome in a
private memory. Every measurement carries two descriptions:

  setting 0  -- purely unitary: an optional pre-unitary followed by the
                memory-update unitary that copies the outcome into the
                agent's memory;
  setting 1  -- the same unitaries followed by a branching on the joint
                record projectors P_k (x) |k><k| over (targets, memory).

Default predictions condition settings on which agents are mentioned.
Compatibility of a set of agents is decided through their effective
(Heisenberg-conjugated) projectors on the initial joint state.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from weakref import WeakKeyDictionary

import numpy as np

from .hilbert import (
    GENERAL,
    PROJECTOR,
    UNITARY,
    Layout,
    Operator,
    StateVector,
    basis_state,
    embed,
    record_unitary,
)
from . import tolerances as tol

#: Returned by predict() when the conditioning event has zero probability.
UNDEFINED = None


@dataclass(frozen=True, eq=False)
class Measurement:
    """One agent's measurement: projector family on targets, plus record memory."""

    agent: str
    targets: tuple[str, ...]
    projectors: tuple[Operator, ...]
    memory: str
    time: int
    pre_unitary: Operator | None = None  # must carry .targets when present

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(self.targets))
        projs = tuple(
            p if isinstance(p, Operator) else Operator(p, kind=PROJECTOR)
            for p in self.projectors
        )
        object.__setattr__(self, "projectors", projs)
        if self.memory in self.targets:
            raise ValueError(f"agent {self.agent}: memory cannot be a target")
        dim = projs[0].dim
        total = sum(p.matrix for p in projs)
        if np.abs(total - np.eye(dim)).max() > tol.EPS_ALG:
            raise ValueError(f"agent {self.agent}: projectors do not sum to identity")
        for a, b in itertools.combinations(projs, 2):
            if np.abs(a.matrix @ b.matrix).max() > tol.EPS_ALG:
                raise ValueError(f"agent {self.agent}: projectors not orthogonal")
        if self.pre_unitary is not None and self.pre_unitary.targets is None:
            raise ValueError(f"agent {self.agent}: pre_unitary needs explicit targets")

    @property
    def arity(self) -> int:
        return len(self.projectors)


@dataclass(frozen=True, eq=False)
class MultiAgentSetup:
    """Agents in strict time order acting on a shared initial state."""

    layout: Layout
    agents: tuple[Measurement, ...]
    initial_state: StateVector  # on the system subsystems only
    systems: tuple[str, ...]
    memory_init: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "agents", tuple(self.agents))
        object.__setattr__(self, "systems", tuple(self.systems))
        names = [m.agent for m in self.agents]
        if len(set(names)) != len(names):
            raise ValueError("agent names must be unique")
        times = [m.time for m in self.agents]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("agent times must be strictly increasing")
        memories = [m.memory for m in self.agents]
        if len(set(memories)) != len(memories):
            raise ValueError("memories must be distinct")
        for m in self.agents:
            if m.arity != self.layout.dim_of(m.memory):
                raise ValueError(
                    f"agent {m.agent}: memory dim != number of outcomes"
                )

    @property
    def agent_names(self) -> tuple[str, ...]:
        return tuple(m.agent for m in self.agents)

    def measurement(self, agent: str) -> Measurement:
        for m in self.agents:
            if m.agent == agent:
                return m
        raise KeyError(f"unknown agent {agent!r}")

    def time_index(self, agent: str) -> int:
        return self.agent_names.index(agent)

    def full_initial_vector(self) -> np.ndarray:
        """Initial state of systems tensored with the memory basis states."""
        memory_levels = {m.memory: self.memory_init.get(m.memory, 0) for m in self.agents}
        psi = np.zeros(self.layout.dim, dtype=complex)
        sys_layout = self.initial_state.layout
        # place each system-basis amplitude at the layout index with the
        # memories in their initial levels
        occ = dict(memory_levels)
        for flat, amp in enumerate(self.initial_state.amplitudes):
            if amp == 0:
                continue
            levels = np.unravel_index(flat, sys_layout.dims)
            for name, k in zip(sys_layout.names, levels):
                occ[name] = int(k)
            idx = 0
            for name, d in self.layout.subsystems:
                idx = idx * d + occ.get(name, 0)
            psi[idx] = amp
        return psi


@dataclass(frozen=True)
class SettingVector:
    """One cut bit per agent, indexed in time order."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("settings must be 0 or 1")
        object.__setattr__(self, "bits", bits)


@dataclass(frozen=True, eq=False)
class Branch:
    """One record branch of a simulation: outcomes, unnormalized state, probability."""

    outcomes: tuple[tuple[str, int], ...]
    state: np.ndarray
    probability: float

    @property
    def outcome_map(self) -> dict[str, int]:
        return dict(self.outcomes)


def default_settings(setup: MultiAgentSetup, mentioned: set[str]) -> SettingVector:
    """s_i = 1 exactly for the mentioned agents."""
    unknown = set(mentioned) - set(setup.agent_names)
    if unknown:
        raise KeyError(f"unknown agents {sorted(unknown)}")
    return SettingVector(tuple(1 if a in mentioned else 0 for a in setup.agent_names))


# per-setup caches of embedded operators and derived structure
_op_cache: WeakKeyDictionary = WeakKeyDictionary()


def _agent_ops(setup: MultiAgentSetup) -> list[dict]:
    """Embedded pre-unitary, record unitary and record projectors per agent."""
    cached = _op_cache.get(setup)
    if cached is not None:
        return cached
    ops = []
    for m in setup.agents:
        pre = None
        if m.pre_unitary is not None:
            pre = embed(m.pre_unitary, setup.layout, m.pre_unitary.targets).matrix
        record_u = record_unitary(m.projectors, setup.layout, m.targets, m.memory).matrix
        mem_dim = setup.layout.dim_of(m.memory)
        record_projs = []
        for k, p in enumerate(m.projectors):
            mk = np.zeros((mem_dim, mem_dim), dtype=complex)
            mk[k, k] = 1.0
            joint = np.kron(p.matrix, mk)
            record_projs.append(
                embed(Operator(joint, kind=PROJECTOR), setup.layout,
                      m.targets + (m.memory,)).matrix
            )
        evolution = record_u if pre is None else record_u @ pre
        ops.append(
            {
                "pre": pre,
                "record_u": record_u,
                "record_projs": record_projs,
                "evolution": evolution,
            }
        )
    _op_cache[setup] = ops
    return ops


def simulate(setup: MultiAgentSetup, settings: SettingVector) -> list[Branch]:
    """Time-ordered evolution branching on record projectors where s_i = 1.

    Returns one branch per joint outcome of the s=1 agents (including
    zero-probability branches), with unnormalized final states.
    """
    if len(settings.bits) != len(setup.agents):
        raise ValueError("setting vector length != number of agents")
    ops = _agent_ops(setup)
    branches: list[tuple[tuple[tuple[str, int], ...], np.ndarray]] = [
        ((), setup.full_initial_vector())
    ]
    for m, bit, op in zip(setup.agents, settings.bits, ops):
        step = []
        for outcomes, psi in branches:
            psi = op["evolution"] @ psi
            if bit:
                for k, proj in enumerate(op["record_projs"]):
                    step.append((outcomes + ((m.agent, k),), proj @ psi))
            else:
                step.append((outcomes, psi))
        branches = step
    return [
        Branch(outcomes, psi, float(np.vdot(psi, psi).real))
        for outcomes, psi in branches
    ]


def predict(
    setup: MultiAgentSetup,
    target: dict[str, int],
    condition: dict[str, int] | None = None,
) -> float | None:
    """Default prediction P(target | condition): s_i = 1 iff agent mentioned.

    Returns UNDEFINED (None) when the conditioning event has zero
    probability; inferences must never be minted from such conditionals.
    """
    condition = condition or {}
    if not target:
        raise ValueError("target must be nonempty")
    if set(target) & set(condition):
        raise ValueError("target and condition must be disjoint")
    mentioned = set(target) | set(condition)
    branches = simulate(setup, default_settings(setup, mentioned))
    p_joint = 0.0
    p_cond = 0.0
    for br in branches:
        om = br.outcome_map
        if all(om[a] == v for a, v in condition.items()):
            p_cond += br.probability
            if all(om[a] == v for a, v in target.items()):
                p_joint += br.probability
    if not condition:
        return p_joint
    if p_cond <= tol.EPS_CERT:
        return UNDEFINED
    return p_joint / p_cond


def joint_table(setup: MultiAgentSetup, agents: tuple[str, ...]) -> np.ndarray:
    """Default-prediction joint distribution over the given agents.

    Axes follow the given agent order; entry [v_1, ..., v_k] is
    P(a_1 = v_1, ..., a_k = v_k) under the default settings.
    """
    branches = simulate(setup, default_settings(setup, set(agents)))
    arities = tuple(setup.measurement(a).arity for a in agents)
    table = np.zeros(arities)
    for br in branches:
        om = br.outcome_map
        table[tuple(om[a] for a in agents)] += br.probability
    return table


def effective_projectors(
    setup: MultiAgentSetup, subset: tuple[str, ...] | set[str]
) -> dict[str, tuple[np.ndarray, ...]]:
    """Heisenberg-picture record projectors acting on the initial joint state.

    For each agent, its joint record projectors are conjugated backward
    through the unitary descriptions of its own and every earlier
    measurement. Applying the resulting families to the initial state in
    time order reproduces the default prediction for any subset; when they
    pairwise commute they form one joint projective measurement.
    """
    ops = _agent_ops(setup)
    result = {}
    wanted = set(subset)
    if not wanted:
        raise ValueError("subset must be nonempty")
    unknown = wanted - set(setup.agent_names)
    if unknown:
        raise KeyError(f"unknown agents {sorted(unknown)}")
    w = np.eye(setup.layout.dim, dtype=complex)
    for m, op in zip(setup.agents, ops):
        w = op["evolution"] @ w
        if m.agent in wanted:
            result[m.agent] = tuple(
                w.conj().T @ proj @ w for proj in op["record_projs"]
            )
    return result


def _primed_joint_table(
    setup: MultiAgentSetup, agents: tuple[str, ...]
) -> np.ndarray:
    """Joint distribution of the effective projectors, applied in time order."""
    eff = effective_projectors(setup, agents)
    ordered = [a for a in setup.agent_names if a in set(agents)]
    arities = tuple(setup.measurement(a).arity for a in ordered)
    psi0 = setup.full_initial_vector()
    table = np.zeros(arities)
    for values in itertools.product(*(range(d) for d in arities)):
        psi = psi0
        for a, v in zip(ordered, values):
            psi = eff[a][v] @ psi
        table[values] = float(np.vdot(psi, psi).real)
    # reorder axes to the requested agent order
    perm = [ordered.index(a) for a in agents]
    return np.transpose(table, perm)


def _footprint(m: Measurement) -> set[str]:
    out = set(m.targets) | {m.memory}
    if m.pre_unitary is not None:
        out |= set(m.pre_unitary.targets)
    return out


def _undisturbed_between(
    setup: MultiAgentSetup, subset: frozenset, i: int, j: int
) -> bool:
    """True iff agent j's measurement, conjugated backward through the
    s=0 evolutions of the non-subset agents acting between agents i and j,
    leaves the subspace where those agents' memories sit in their initial
    states invariant.

    When this fails, the intervening measurements disturb the shared
    systems: agent j's effective measurement entangles with records that
    the subset cannot access, so it is not realizable as a projective
    measurement on the accessible systems and cannot be jointly measured
    with agent i's.
    """
    mids = [
        m for m in setup.agents[i + 1 : j]
        if m.agent not in subset
    ]
    if not mids:
        return True
    ops = _agent_ops(setup)
    w = np.eye(setup.layout.dim, dtype=complex)
    for m in mids:
        w = ops[setup.time_index(m.agent)]["evolution"] @ w
    mj = setup.agents[j]
    ev_j = ops[j]["evolution"]
    sector = np.eye(setup.layout.dim, dtype=complex)
    for m in mids:
        init = setup.memory_init.get(m.memory, 0)
        d = setup.layout.dim_of(m.memory)
        small = np.zeros((d, d), dtype=complex)
        small[init, init] = 1.0
        sector = sector @ embed(
            Operator(small, kind=PROJECTOR), setup.layout, (m.memory,)
        ).matrix
    for proj in ops[j]["record_projs"]:
        b = ev_j.conj().T @ proj @ ev_j
        q = w.conj().T @ b @ w
        leak = q @ sector - sector @ q @ sector
        if np.abs(leak).max() > tol.EPS_ALG:
            return False
    return True


_compat_cache: WeakKeyDictionary = WeakKeyDictionary()


def compatible(setup: MultiAgentSetup, subset: tuple[str, ...] | set[str]) -> bool:
    """True iff (a) the effective projector families of the subset commute
    pairwise, (b) their joint distribution reproduces the default
    predictions (joint and single-agent marginals), and (c) for every
    time-ordered pair acting on overlapping systems, the intervening
    non-subset measurements do not disturb the later agent's measurement
    (its backward-conjugated projectors keep the intervening memories in
    their initial states)."""
    key = frozenset(subset)
    cache = _compat_cache.setdefault(setup, {})
    if key in cache:
        return cache[key]
    if len(key) <= 1:
        cache[key] = True
        return True
    indexed = sorted(setup.time_index(a) for a in key)
    for ii, jj in itertools.combinations(indexed, 2):
        if _footprint(setup.agents[ii]) & _footprint(setup.agents[jj]):
            if not _undisturbed_between(setup, key, ii, jj):
                cache[key] = False
                return False
    eff = effective_projectors(setup, key)
    verdict = True
    for a, b in itertools.combinations(sorted(key), 2):
        for pa in eff[a]:
            for pb in eff[b]:
                if np.abs(pa @ pb - pb @ pa).max() > tol.EPS_ALG:
                    verdict = False
                    break
            if not verdict:
                break
        if not verdict:
            break
    if verdict:
        ordered = tuple(a for a in setup.agent_names if a in key)
        primed = _primed_joint_table(setup, ordered)
        default = joint_table(setup, ordered)
        if np.abs(primed - default).max() > tol.EPS_PROB:
            verdict = False
        else:
            for i, a in enumerate(ordered):
                marg = primed.sum(axis=tuple(j for j in range(len(ordered)) if j != i))
                single = joint_table(setup, (a,))
                if np.abs(marg - single).max() > tol.EPS_PROB:
                    verdict = False
                    break
    cache[key] = verdict
    return verdict


def _pairwise_compatible(setup: MultiAgentSetup) -> dict[frozenset, bool]:
    names = setup.agent_names
    return {
        frozenset(p): compatible(setup, p)
        for p in itertools.combinations(names, 2)
    }


def contexts(setup: MultiAgentSetup) -> tuple[tuple[str, ...], ...]:
    """Maximal compatible agent sets, in lexicographic order.

    Pairwise commutation of the effective families is subset-monotone, so
    candidates are the cliques of the pairwise-compatibility graph; each
    maximal clique is confirmed with the full compatibility check.
    """
    names = setup.agent_names
    pair_ok = _pairwise_compatible(setup)
    cliques = []
    for r in range(len(names), 0, -1):
        for combo in itertools.combinations(names, r):
            if any(set(combo) <= set(c) for c in cliques):
                continue
            if all(pair_ok[frozenset(p)] for p in itertools.combinations(combo, 2)):
                if compatible(setup, combo):
                    cliques.append(combo)
    return tuple(sorted(cliques))
