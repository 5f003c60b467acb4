"""Agent statements, paradox search, reference graphs, theorem verifiers.

A setup's statement language consists of atomic outcome statements
(events with positive default probability) and atomic inferences (certain
conditionals), both restricted to compatible agent sets. After erasing
the setting labels, the inferences form an implication digraph; a
multi-agent paradox is a chain in that digraph leading from an observable
event to the negation of one of its own values -- a half Liar cycle.

The verifier operations at the bottom operationally check the structural
theorems about such chains: inference negation, chain reduction under
commutation, symmetric-chain reduction, non-deterministic endpoints, and
the impossibility of building a paradox on a finite Yablo-pattern chain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .contextuality import (
    NONCONTEXTUAL,
    EmpiricalModel,
    is_logically_contextual,
    model_from_setup,
)
from . import tolerances as tol
from .wigner_setup import (
    UNDEFINED,
    MultiAgentSetup,
    compatible,
    contexts,
    default_settings,
    effective_projectors,
    joint_table,
    predict,
)

ATOMIC_OUTCOME = "atomic-outcome"
ATOMIC_INFERENCE = "atomic-inference"

#: An event: sorted tuple of (agent, outcome value) pairs.
Event = tuple[tuple[str, int], ...]


def make_event(assignments: dict[str, int]) -> Event:
    return tuple(sorted(assignments.items()))


def event_agents(e: Event) -> tuple[str, ...]:
    return tuple(a for a, _ in e)


def entails(e: Event, sub: Event) -> bool:
    """True iff e fixes every value that sub fixes."""
    d = dict(e)
    return all(d.get(a) == v for a, v in sub)


def conflicts(e: Event, other: Event) -> Event:
    """The sub-event of `other` whose values contradict e (may be empty)."""
    d = dict(e)
    return tuple((a, v) for a, v in other if a in d and d[a] != v)


def negate_event(e: Event) -> Event:
    """Componentwise bit flip; defined for binary outcomes."""
    if any(v not in (0, 1) for _, v in e):
        raise ValueError("negation is only defined for binary outcomes")
    return tuple((a, 1 - v) for a, v in e)


@dataclass(frozen=True)
class Statement:
    """Atomic outcome statement or atomic inference of one setup.

    `settings` carries the default setting bits the statement was derived
    under; None after setting-independence erasure. `probability` is the
    ledger value P(consequent | antecedent) (or P(consequent) for outcome
    statements) at derivation time.
    """

    kind: str
    antecedent: Event
    consequent: Event
    settings: tuple[int, ...] | None = None
    probability: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedent", tuple(sorted(self.antecedent)))
        object.__setattr__(self, "consequent", tuple(sorted(self.consequent)))
        if self.kind == ATOMIC_OUTCOME and self.antecedent:
            raise ValueError("outcome statements have no antecedent")
        if self.kind == ATOMIC_INFERENCE and not (self.antecedent and self.consequent):
            raise ValueError("inferences need antecedent and consequent")

    def key(self):
        return (self.kind, self.antecedent, self.consequent, self.settings)


class VerificationError(RuntimeError):
    """A theorem-mandated identity failed numerically (implementation bug)."""


class PatternMismatch(ValueError):
    """Statements do not match the expected structural pattern."""


def derive_statements(setup: MultiAgentSetup) -> tuple[Statement, ...]:
    """All atomic statements of the setup, bounded by its contexts.

    Events range over subsets of maximal compatible sets; inferences are
    minted only when the conditioning event has positive probability and
    the conditional is certain.
    """
    seen: dict = {}
    for ctx in contexts(setup):
        table = joint_table(setup, ctx)
        arities = [setup.measurement(a).arity for a in ctx]
        idx = {a: i for i, a in enumerate(ctx)}

        def prob(e: Event) -> float:
            axes = tuple(i for i in range(len(ctx)) if ctx[i] not in dict(e))
            m = table.sum(axis=axes) if axes else table
            kept = [a for a in ctx if a in dict(e)]
            d = dict(e)
            return float(m[tuple(d[a] for a in kept)])

        events_by_set = {}
        for r in range(1, len(ctx) + 1):
            for sub in itertools.combinations(ctx, r):
                evs = []
                for values in itertools.product(*(range(arities[idx[a]]) for a in sub)):
                    e = make_event(dict(zip(sub, values)))
                    p = prob(e)
                    evs.append((e, p))
                    if p > tol.EPS_CERT:
                        st = Statement(
                            ATOMIC_OUTCOME, (), e,
                            settings=default_settings(setup, set(sub)).bits,
                            probability=p,
                        )
                        seen.setdefault(st.key(), st)
                events_by_set[sub] = evs
        for ant_set, cons_set in itertools.permutations(events_by_set, 2):
            if set(ant_set) & set(cons_set):
                continue
            for ant, p_ant in events_by_set[ant_set]:
                if p_ant <= tol.EPS_CERT:
                    continue
                for cons, _ in events_by_set[cons_set]:
                    p_joint = prob(tuple(sorted(ant + cons)))
                    if p_joint / p_ant >= 1.0 - tol.EPS_CERT:
                        st = Statement(
                            ATOMIC_INFERENCE, ant, cons,
                            settings=default_settings(
                                setup, set(ant_set) | set(cons_set)
                            ).bits,
                            probability=p_joint / p_ant,
                        )
                        seen.setdefault(st.key(), st)
    return tuple(sorted(seen.values(), key=Statement.key))


def strip_settings(statements) -> tuple[Statement, ...]:
    """Erase setting labels; statements identical up to settings merge."""
    seen: dict = {}
    for st in statements:
        bare = Statement(st.kind, st.antecedent, st.consequent, None, st.probability)
        seen.setdefault(bare.key(), bare)
    return tuple(sorted(seen.values(), key=Statement.key))


@dataclass(frozen=True)
class InferenceChain:
    links: tuple[Statement, ...]
    start_event: Event

    def __post_init__(self) -> None:
        for a, b in zip(self.links, self.links[1:]):
            if a.consequent != b.antecedent:
                raise ValueError("chain links do not compose")
        if self.links and self.links[0].antecedent != self.start_event:
            raise ValueError("start event does not match first link")

    @property
    def events(self) -> tuple[Event, ...]:
        return (self.start_event,) + tuple(l.consequent for l in self.links)


@dataclass(frozen=True)
class ParadoxCertificate:
    chain: InferenceChain
    postselection: Event
    p_postselection: float
    contradicted: tuple[Event, Event]  # (value fixed by postselection, its negation)

    def __post_init__(self) -> None:
        if self.p_postselection <= tol.EPS_CERT:
            raise ValueError("postselection must have positive probability")
        if not entails(self.postselection, self.chain.start_event):
            raise ValueError("chain start not entailed by postselection")


def find_paradox(
    setup: MultiAgentSetup, max_len: int | None = None
) -> ParadoxCertificate | None:
    """Search the implication digraph for a half-Liar chain.

    Starting from an observable event E (positive default probability),
    follow certain inferences from sub-events of E until some derived
    value contradicts a value fixed by E. The shortest chain wins; ties
    prefer the latest-acting postselection agents, then the
    lexicographically smallest chain in time order.
    """
    if max_len is None:
        max_len = 2 * len(setup.agents)
    if max_len < 2:
        raise ValueError("max_len must be >= 2")
    stripped = strip_settings(derive_statements(setup))
    inferences = [s for s in stripped if s.kind == ATOMIC_INFERENCE]
    outcomes = [s for s in stripped if s.kind == ATOMIC_OUTCOME]
    t_idx = {a: i for i, a in enumerate(setup.agent_names)}

    def node_key(e: Event):
        return tuple(sorted((t_idx[a], v) for a, v in e))

    edges: dict[Event, list[Statement]] = {}
    for inf in inferences:
        edges.setdefault(inf.antecedent, []).append(inf)
    for lst in edges.values():
        lst.sort(key=lambda s: node_key(s.consequent))

    def post_rank(e: Event):
        # prefer larger time indices, then smaller values
        times = sorted((-t_idx[a] for a, _ in e))
        values = tuple(v for _, v in sorted(e, key=lambda av: t_idx[av[0]]))
        return (tuple(times), values)

    candidates = sorted(
        {s.consequent for s in outcomes}, key=post_rank
    )

    best: tuple | None = None  # ((post_rank, chain_keys), E, links)

    # iterative deepening: shortest chains first, deterministic order
    for target_len in range(1, max_len + 1):
        for e_post in candidates:
            starts = sorted(
                {a for a in edges if entails(e_post, a)}, key=node_key
            )

            def walk(node: Event, links: list[Statement], visited: set[Event]):
                nonlocal best
                if len(links) == target_len:
                    bad = conflicts(e_post, node)
                    if bad:
                        keys = tuple(
                            node_key(ev)
                            for ev in [links[0].antecedent] + [l.consequent for l in links]
                        )
                        cand = ((post_rank(e_post), keys), e_post, tuple(links))
                        if best is None or cand[0] < best[0]:
                            best = cand
                    return
                for inf in edges.get(node, []):
                    if inf.consequent in visited:
                        continue
                    walk(inf.consequent, links + [inf],
                         visited | {inf.consequent})

            for start in starts:
                walk(start, [], {start})
        if best is not None:
            break
    if best is None:
        return None
    _, e_post, links = best
    p_post = predict(setup, dict(e_post))
    chain = InferenceChain(tuple(links), links[0].antecedent)
    final = links[-1].consequent
    bad = conflicts(e_post, final)
    fixed = tuple((a, dict(e_post)[a]) for a, _ in bad)
    return ParadoxCertificate(chain, e_post, float(p_post), (fixed, bad))


@dataclass(frozen=True)
class ReferenceGraph:
    """Nodes are agent sets of atomic statements; edges are references."""

    nodes: tuple[frozenset, ...]
    edges: tuple[tuple[frozenset, frozenset], ...]


def reference_graph(source) -> ReferenceGraph:
    """Build the reference graph of a certificate or a statement set.

    Statement sets contribute one node per mentioned agent set and an edge
    from each inference's antecedent set to its consequent set. For a
    certificate the postselection refers to the chain start, and the
    contradicting final statement refers back to the postselection.
    """
    nodes: set[frozenset] = set()
    edge_set: set[tuple[frozenset, frozenset]] = set()
    if isinstance(source, ParadoxCertificate):
        post = frozenset(event_agents(source.postselection))
        nodes.add(post)
        evs = source.chain.events
        for e in evs:
            nodes.add(frozenset(event_agents(e)))
        start = frozenset(event_agents(evs[0]))
        if start != post:
            edge_set.add((post, start))
        for a, b in zip(evs, evs[1:]):
            edge_set.add((frozenset(event_agents(a)), frozenset(event_agents(b))))
        edge_set.add((frozenset(event_agents(evs[-1])), post))
    else:
        for st in source:
            cons = frozenset(event_agents(st.consequent))
            nodes.add(cons)
            if st.kind == ATOMIC_INFERENCE:
                ant = frozenset(event_agents(st.antecedent))
                nodes.add(ant)
                edge_set.add((ant, cons))
    ordered = sorted(nodes, key=sorted)
    return ReferenceGraph(tuple(ordered), tuple(sorted(edge_set, key=lambda e: (sorted(e[0]), sorted(e[1])))))


def has_directed_cycle(graph: ReferenceGraph) -> bool:
    """Three-color depth-first search."""
    out: dict = {n: [] for n in graph.nodes}
    for a, b in graph.edges:
        out[a].append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n: WHITE for n in graph.nodes}

    def visit(n) -> bool:
        color[n] = GRAY
        for m in out[n]:
            if color[m] == GRAY:
                return True
            if color[m] == WHITE and visit(m):
                return True
        color[n] = BLACK
        return False

    return any(color[n] == WHITE and visit(n) for n in graph.nodes)


def _joint_probability(source, event: Event) -> float:
    """P(event) in an empirical model or under a setup's default settings."""
    if isinstance(source, MultiAgentSetup):
        return float(predict(source, dict(event)))
    if isinstance(source, EmpiricalModel):
        agents = set(event_agents(event))
        for ctx in source.scenario.contexts:
            if agents <= set(ctx):
                from .contextuality import Section

                return source.probability(ctx, Section(event))
        raise ValueError(f"no context covers agents {sorted(agents)}")
    raise TypeError(f"expected setup or model, got {type(source)!r}")


def negate_inference(source, inf: Statement) -> Statement:
    """Contrapositive: from (a=v_a => b=v_b) mint (b=not v_b => a=not v_a).

    Both share the same nullity condition P(a=v_a, b=not v_b) = 0, which is
    verified in the source; violation signals an implementation bug.
    """
    if inf.kind != ATOMIC_INFERENCE:
        raise ValueError("only inferences can be negated")
    neg_ant = negate_event(inf.consequent)
    neg_cons = negate_event(inf.antecedent)
    p_viol = _joint_probability(
        source, tuple(sorted(inf.antecedent + neg_ant))
    )
    if p_viol > tol.EPS_CERT:
        raise VerificationError(
            f"negated inference fails: P(antecedent & not consequent) = {p_viol}"
        )
    p_neg_ant = _joint_probability(source, neg_ant)
    probability = None
    if p_neg_ant > tol.EPS_CERT:
        p_joint = _joint_probability(source, tuple(sorted(neg_ant + neg_cons)))
        probability = p_joint / p_neg_ant
    return Statement(ATOMIC_INFERENCE, neg_ant, neg_cons, None, probability)


@dataclass(frozen=True, eq=False)
class ProjectiveScene:
    """A state plus per-agent projector families on one common space.

    The common ground for the chain-reduction verifiers: built from a
    setup via effective projectors, or synthesized directly in tests.
    """

    state: np.ndarray
    projectors: dict[str, tuple[np.ndarray, ...]]

    def event_projector(self, e: Event) -> np.ndarray:
        dim = self.state.shape[0]
        out = np.eye(dim, dtype=complex)
        for a, v in e:
            out = self.projectors[a][v] @ out
        return out

    def family(self, agents: tuple[str, ...]) -> list[np.ndarray]:
        """Event projectors for all value assignments of the agent set."""
        arities = [len(self.projectors[a]) for a in agents]
        return [
            self.event_projector(tuple(zip(agents, values)))
            for values in itertools.product(*(range(d) for d in arities))
        ]

    def probability(self, *events: Event) -> float:
        psi = self.state
        for e in events:
            psi = self.event_projector(e) @ psi
        return float(np.vdot(psi, psi).real)


def scene_from_setup(setup: MultiAgentSetup, agents) -> ProjectiveScene:
    eff = effective_projectors(setup, set(agents))
    return ProjectiveScene(setup.full_initial_vector(), eff)


def _as_scene(source, agents) -> ProjectiveScene:
    if isinstance(source, ProjectiveScene):
        return source
    if isinstance(source, MultiAgentSetup):
        return scene_from_setup(source, agents)
    raise TypeError(f"expected scene or setup, got {type(source)!r}")


def _families_commute(scene: ProjectiveScene, set_a, set_b) -> bool:
    for pa in scene.family(tuple(set_a)):
        for pb in scene.family(tuple(set_b)):
            if np.abs(pa @ pb - pb @ pa).max() > tol.EPS_ALG:
                return False
    return True


def _certain(scene: ProjectiveScene, antecedent: Event, consequent: Event) -> bool:
    p_ant = scene.probability(antecedent)
    if p_ant <= tol.EPS_CERT:
        return False
    return scene.probability(antecedent, consequent) / p_ant >= 1.0 - tol.EPS_CERT


def reduce_triple(source, first: Statement, second: Statement) -> Statement | None:
    """Collapse c=>b=>a to c=>a when all three families pairwise commute.

    Returns None when the commutation hypothesis fails; raises
    VerificationError if commutation holds but the reduced inference does
    not (the structural theorem guarantees it must).
    """
    if first.consequent != second.antecedent:
        raise ValueError("segments do not compose")
    c, b, a = first.antecedent, first.consequent, second.consequent
    if event_agents(c) == event_agents(a):
        raise ValueError("segment endpoints must be distinct agent sets")
    involved = set(event_agents(c)) | set(event_agents(b)) | set(event_agents(a))
    scene = _as_scene(source, involved)
    sets = [event_agents(c), event_agents(b), event_agents(a)]
    for x, y in itertools.combinations(sets, 2):
        if not _families_commute(scene, x, y):
            return None
    if not (_certain(scene, c, b) and _certain(scene, b, a)):
        raise ValueError("segment links are not certain in the source")
    if not _certain(scene, c, a):
        raise VerificationError("reduced inference fails despite commutation")
    p_c = scene.probability(c)
    return Statement(
        ATOMIC_INFERENCE, c, a, None, scene.probability(c, a) / p_c
    )


def reduce_symmetric_chain(source, events: tuple[Event, ...]) -> tuple[Statement, Statement]:
    """Collapse a chain of two-way certain links to an endpoint equivalence.

    Requires adjacent projector families to commute, including the wrap
    pair (first, last). Returns the two endpoint inferences (forward and
    backward), both numerically verified.
    """
    if len(events) < 2:
        raise ValueError("chain needs at least two events")
    involved = {a for e in events for a in event_agents(e)}
    scene = _as_scene(source, involved)
    pairs = list(zip(events, events[1:])) + [(events[0], events[-1])]
    for x, y in pairs:
        if not _families_commute(scene, event_agents(x), event_agents(y)):
            raise ValueError(
                f"adjacent families {event_agents(x)} and {event_agents(y)} do not commute"
            )
    for x, y in zip(events, events[1:]):
        if not (_certain(scene, x, y) and _certain(scene, y, x)):
            raise ValueError(f"link {x} <=> {y} is not two-way certain")
    first, last = events[0], events[-1]
    if not (_certain(scene, first, last) and _certain(scene, last, first)):
        raise VerificationError("endpoint equivalence fails despite commutation")
    p_first = scene.probability(first)
    p_last = scene.probability(last)
    return (
        Statement(ATOMIC_INFERENCE, first, last, None,
                  scene.probability(first, last) / p_first),
        Statement(ATOMIC_INFERENCE, last, first, None,
                  scene.probability(last, first) / p_last),
    )


def check_deterministic_endpoints(certificate: ParadoxCertificate) -> bool:
    """Paradoxes require a genuinely probabilistic postselection."""
    return certificate.p_postselection < 1.0 - tol.EPS_CERT


@dataclass(frozen=True)
class YabloVerdict:
    permutation: tuple[str, ...]
    all_compatible: bool
    noncontextual: bool
    no_paradox: bool
    joint_distribution: np.ndarray | None  # global witness when all compatible

    @property
    def blocked(self) -> bool:
        return self.all_compatible and self.noncontextual and self.no_paradox


def check_yablo_blocked(setup: MultiAgentSetup, statements) -> YabloVerdict:
    """Verify that a finite Yablo-pattern chain cannot seed a paradox.

    The statements must contain, under some agent permutation pi, every
    inference a_pi(i)=1 => a_pi(j)=0 for i < j. When they do, all
    measurements must be mutually compatible, the induced model
    noncontextual, and the paradox search empty; the joint distribution
    over all agents is emitted as the explaining witness.
    """
    agents = setup.agent_names
    relation = set()
    for st in statements:
        if st.kind != ATOMIC_INFERENCE:
            continue
        if len(st.antecedent) == 1 and len(st.consequent) == 1:
            (x, vx), = st.antecedent
            (y, vy), = st.consequent
            if vx == 1 and vy == 0:
                relation.add((x, y))
    permutation = None
    for perm in itertools.permutations(agents):
        if all(
            (perm[i], perm[j]) in relation
            for i in range(len(perm))
            for j in range(i + 1, len(perm))
        ):
            permutation = perm
            break
    if permutation is None:
        raise PatternMismatch("statements contain no full Yablo-pattern chain")
    all_compatible = compatible(setup, set(agents))
    verdict = is_logically_contextual(model_from_setup(setup))
    no_paradox = find_paradox(setup) is None
    joint = joint_table(setup, agents) if all_compatible else None
    return YabloVerdict(
        permutation,
        all_compatible,
        verdict.verdict == NONCONTEXTUAL,
        no_paradox,
        joint,
    )


def consistent_assignment(
    statements, variables: tuple[str, ...]
) -> dict[str, int] | None:
    """Brute-force truth assignment satisfying every inference, or None.

    Used with the classical Liar / Yablo statement generators.
    """
    inferences = [s for s in statements if s.kind == ATOMIC_INFERENCE]
    for values in itertools.product((0, 1), repeat=len(variables)):
        assignment = dict(zip(variables, values))
        ok = True
        for st in inferences:
            if all(assignment.get(a) == v for a, v in st.antecedent):
                if not all(assignment.get(a) == v for a, v in st.consequent):
                    ok = False
                    break
        if ok:
            return assignment
    return None
