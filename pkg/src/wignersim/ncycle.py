"""n-cycle scenarios with binary outcomes.

An n-cycle model assigns a joint distribution to each adjacent pair
(X_i, X_{i+1 mod n}). The signed correlation sum Omega over a sign vector
with an odd number of -1 entries is at most n; models attaining n on such
a vector are the extremal vertices of the no-disturbance polytope, and are
exactly the models admitting a post-selection-free paradox: a pair of
inference cycles that flip the starting value whichever value occurred.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .contextuality import EmpiricalModel, MeasurementScenario
from .reasoning import ATOMIC_INFERENCE, Statement
from . import tolerances as tol


@dataclass(frozen=True, eq=False)
class NCycleModel:
    """Edge tables: entry t[i][x, y] = P(X_i = x, X_{i+1 mod n} = y)."""

    n: int
    edge_tables: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("n-cycle needs n >= 3")
        if len(self.edge_tables) != self.n:
            raise ValueError("need one edge table per adjacent pair")
        tables = []
        for i, t in enumerate(self.edge_tables):
            t = np.asarray(t, dtype=float)
            if t.shape != (2, 2):
                raise ValueError(f"edge table {i} must be 2x2")
            if t.min() < -tol.EPS_PROB or abs(t.sum() - 1.0) > tol.EPS_PROB:
                raise ValueError(f"edge table {i} is not a distribution")
            t.setflags(write=False)
            tables.append(t)
        object.__setattr__(self, "edge_tables", tuple(tables))
        for i in range(self.n):
            j = (i + 1) % self.n
            shared_from_i = tables[i].sum(axis=0)   # marginal of X_{i+1}
            shared_from_j = tables[j].sum(axis=1)   # marginal of X_{i+1}
            if np.abs(shared_from_i - shared_from_j).max() > tol.EPS_PROB:
                raise ValueError(
                    f"tables {i} and {j} disagree on the marginal of X_{j + 1}"
                )

    def variable_names(self) -> tuple[str, ...]:
        return tuple(f"X{i + 1}" for i in range(self.n))


@dataclass(frozen=True)
class GammaVector:
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (-1, 1) for s in signs):
            raise ValueError("signs must be +1 or -1")
        if signs.count(-1) % 2 == 0:
            raise ValueError("the number of -1 entries must be odd")
        object.__setattr__(self, "signs", signs)


def expectation(model: NCycleModel, i: int) -> float:
    """<X_i, X_{i+1}> = P(equal) - P(different), 1-based edge index."""
    if not 1 <= i <= model.n:
        raise ValueError(f"edge index {i} out of range")
    t = model.edge_tables[i - 1]
    return float(t[0, 0] + t[1, 1] - t[0, 1] - t[1, 0])


def omega(model: NCycleModel, gamma: GammaVector) -> float:
    if len(gamma.signs) != model.n:
        raise ValueError("gamma length must equal n")
    return float(
        sum(g * expectation(model, i + 1) for i, g in enumerate(gamma.signs))
    )


def max_omega(model: NCycleModel) -> tuple[float, GammaVector]:
    """Maximum of omega over all odd-negative sign vectors."""
    best = None
    for signs in itertools.product((1, -1), repeat=model.n):
        if signs.count(-1) % 2 == 0:
            continue
        g = GammaVector(signs)
        val = omega(model, g)
        if best is None or val > best[0]:
            best = (val, g)
    return best


def is_extremal_vertex(model: NCycleModel) -> GammaVector | None:
    """The sign vector gamma_i = <X_i, X_{i+1}> when all correlations are
    +-1 with an odd number of -1 entries; None otherwise.

    An even count of -1 with all +-1 correlations is a deterministic
    classical point, not a vertex of interest here.
    """
    signs = []
    for i in range(1, model.n + 1):
        e = expectation(model, i)
        if abs(abs(e) - 1.0) > tol.EPS_PROB:
            return None
        signs.append(1 if e > 0 else -1)
    if signs.count(-1) % 2 == 0:
        return None
    return GammaVector(tuple(signs))


def extremal_model(n: int, gamma: GammaVector) -> NCycleModel:
    """The vertex model for gamma: perfectly (anti)correlated edges with
    uniform marginals."""
    if len(gamma.signs) != n:
        raise ValueError("gamma length must equal n")
    equal = np.array([[0.5, 0.0], [0.0, 0.5]])
    differ = np.array([[0.0, 0.5], [0.5, 0.0]])
    return NCycleModel(
        n, tuple(equal if g == 1 else differ for g in gamma.signs)
    )


def find_ps_free_paradox(
    model: NCycleModel,
) -> tuple[tuple[Statement, ...], tuple[Statement, ...]] | None:
    """The two inference cycles of a post-selection-free paradox, if any.

    Exists exactly at extremal vertices: starting from X_1 = 0 (and from
    X_1 = 1), propagate the value along the cycle, keeping it on +1 edges
    and flipping it on -1 edges; the odd flip count returns the negated
    start value. Every implication is verified to be certain in its edge
    table.
    """
    gamma = is_extremal_vertex(model)
    if gamma is None:
        return None
    names = model.variable_names()
    chains = []
    for start in (0, 1):
        links = []
        v = start
        for i in range(model.n):
            nxt = (i + 1) % model.n
            w = v if gamma.signs[i] == 1 else 1 - v
            t = model.edge_tables[i]
            p_ant = float(t[v].sum())
            if p_ant <= tol.EPS_CERT or t[v, 1 - w] > tol.EPS_CERT:
                raise RuntimeError(
                    f"edge {i}: implication X{i + 1}={v} => X{nxt + 1}={w} "
                    "is not certain despite extremality"
                )
            links.append(
                Statement(
                    ATOMIC_INFERENCE,
                    ((names[i], v),),
                    ((names[nxt], w),),
                    None,
                    float(t[v, w] / p_ant),
                )
            )
            v = w
        if v != 1 - start:
            raise RuntimeError("cycle did not flip the start value")
        chains.append(tuple(links))
    return chains[0], chains[1]


def ncycle_to_empirical(model: NCycleModel) -> EmpiricalModel:
    """View the n-cycle as an empirical model with adjacent-pair contexts."""
    names = model.variable_names()
    ctxs = tuple(
        (names[i], names[(i + 1) % model.n]) for i in range(model.n)
    )
    scenario = MeasurementScenario(
        names, ctxs, {v: (0, 1) for v in names}, state_ref="n-cycle"
    )
    return EmpiricalModel(scenario, {c: model.edge_tables[i] for i, c in enumerate(ctxs)})


def ncycle_from_empirical(model: EmpiricalModel) -> NCycleModel:
    """Extract the n-cycle structure when the contexts form a single cycle
    of binary-variable pairs."""
    sc = model.scenario
    if any(sc.arity(v) != 2 for v in sc.variables):
        raise ValueError("n-cycle variables must be binary")
    n = len(sc.variables)
    if len(sc.contexts) != n:
        raise ValueError("context count must equal variable count")
    neighbors: dict[str, list[str]] = {v: [] for v in sc.variables}
    for c in sc.contexts:
        if len(c) != 2:
            raise ValueError(f"context {c} is not a pair")
        a, b = c
        neighbors[a].append(b)
        neighbors[b].append(a)
    if any(len(ns) != 2 for ns in neighbors.values()):
        raise ValueError("contexts do not form a single cycle")
    # walk the cycle starting from the first variable
    order = [sc.variables[0]]
    prev = None
    while len(order) < n:
        cur = order[-1]
        nxt = [v for v in neighbors[cur] if v != prev]
        if not nxt:
            raise ValueError("contexts do not form a single cycle")
        prev = cur
        order.append(nxt[0])
    if order[0] not in neighbors[order[-1]]:
        raise ValueError("contexts do not close into a cycle")
    tables = []
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        ctx = next(
            c for c in sc.contexts if set(c) == {a, b}
        )
        t = model.tables[ctx]
        if ctx[0] != a:
            t = t.T
        tables.append(t)
    return NCycleModel(n, tuple(tables))
