"""Measurement scenarios, empirical models, and logical contextuality.

An empirical model attaches a joint outcome distribution to each maximal
context of a measurement scenario. A context assignment is a *possible
section* when its restriction to every overlap lies in the support of the
other context's marginal. The model is logically contextual when some
possible section extends to no global assignment, and strongly contextual
when, for some context, none does (equivalently: no global assignment
exists at all).

The global-section search is implemented twice: exhaustive enumeration
(the oracle) and backtracking with forward checking (the default engine).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .wigner_setup import MultiAgentSetup, contexts as setup_contexts, joint_table


class DisturbanceWarning(UserWarning):
    """Overlapping contexts disagree on a shared marginal."""


@dataclass(frozen=True)
class MeasurementScenario:
    variables: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    outcomes: dict[str, tuple[int, ...]]
    state_ref: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self, "contexts", tuple(tuple(c) for c in self.contexts)
        )
        covered = set()
        for c in self.contexts:
            unknown = set(c) - set(self.variables)
            if unknown:
                raise ValueError(f"context {c} mentions unknown variables {unknown}")
            covered |= set(c)
        missing = set(self.variables) - covered
        if missing:
            raise ValueError(f"variables {sorted(missing)} appear in no context")

    def arity(self, var: str) -> int:
        return len(self.outcomes[var])


@dataclass(frozen=True)
class Section:
    """A joint outcome assignment on a subset of the variables."""

    values: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(sorted(self.values)))

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.values)

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def restrict(self, variables: set[str]) -> "Section":
        return Section(tuple((v, x) for v, x in self.values if v in variables))


@dataclass(frozen=True, eq=False)
class EmpiricalModel:
    """Per-context joint outcome tables over a scenario.

    Table axes follow the context's variable order. Tables must be
    normalized; a no-disturbance violation raises a warning but keeps the
    model loadable for experimentation.
    """

    scenario: MeasurementScenario
    tables: dict[tuple[str, ...], np.ndarray]

    def __post_init__(self) -> None:
        tables = {}
        for c in self.scenario.contexts:
            if tuple(c) not in self.tables:
                raise ValueError(f"missing table for context {c}")
            t = np.asarray(self.tables[tuple(c)], dtype=float)
            expected = tuple(self.scenario.arity(v) for v in c)
            if t.shape != expected:
                raise ValueError(f"table for {c} has shape {t.shape}, expected {expected}")
            if t.min() < -tol.EPS_PROB:
                raise ValueError(f"negative probability in table for {c}")
            if abs(t.sum() - 1.0) > tol.EPS_PROB * t.size:
                raise ValueError(f"table for {c} sums to {t.sum()}")
            t.setflags(write=False)
            tables[tuple(c)] = t
        object.__setattr__(self, "tables", tables)
        self._check_no_disturbance()

    def _check_no_disturbance(self) -> None:
        for c1, c2 in itertools.combinations(self.scenario.contexts, 2):
            shared = tuple(v for v in c1 if v in c2)
            if not shared:
                continue
            m1 = self.marginal(c1, shared)
            m2 = self.marginal(c2, shared)
            if np.abs(m1 - m2).max() > tol.EPS_PROB:
                warnings.warn(
                    f"contexts {c1} and {c2} disagree on marginal over {shared} "
                    f"(max gap {np.abs(m1 - m2).max():.3e})",
                    DisturbanceWarning,
                    stacklevel=3,
                )

    def marginal(self, context: tuple[str, ...], variables: tuple[str, ...]) -> np.ndarray:
        """Marginal table over `variables` (axis order as given)."""
        t = self.tables[tuple(context)]
        keep = [context.index(v) for v in variables]
        drop = tuple(i for i in range(len(context)) if i not in keep)
        m = t.sum(axis=drop) if drop else t
        # t.sum collapses axes but keeps the remaining ones in context order
        remaining = [v for v in context if v in variables]
        perm = [remaining.index(v) for v in variables]
        return np.transpose(m, perm)

    def probability(self, context: tuple[str, ...], section: Section) -> float:
        """Probability of a (partial) assignment inside one context."""
        sub = tuple(v for v in context if v in set(section.domain))
        m = self.marginal(context, sub)
        d = section.as_dict()
        return float(m[tuple(d[v] for v in sub)])


def possible_sections(model: EmpiricalModel, context: tuple[str, ...]) -> tuple[Section, ...]:
    """Assignments on `context` supported by every overlapping context.

    The context's own table is included in the requirement, so every
    possible section has positive probability there.
    """
    context = tuple(context)
    if context not in model.scenario.contexts:
        raise KeyError(f"{context} is not a context of the scenario")
    out = []
    for values in itertools.product(
        *(range(model.scenario.arity(v)) for v in context)
    ):
        s = Section(tuple(zip(context, values)))
        ok = True
        for other in model.scenario.contexts:
            shared = set(context) & set(other)
            if not shared:
                continue
            if model.probability(other, s.restrict(shared)) <= tol.EPS_CERT:
                ok = False
                break
        if ok:
            out.append(s)
    return tuple(out)


def _global_sections_exhaustive(model: EmpiricalModel):
    """Yield all global assignments consistent with every context's possible
    sections, in lexicographic variable/value order."""
    sc = model.scenario
    allowed = {c: set(possible_sections(model, c)) for c in sc.contexts}
    for values in itertools.product(*(range(sc.arity(v)) for v in sc.variables)):
        g = Section(tuple(zip(sc.variables, values)))
        if all(g.restrict(set(c)) in allowed[c] for c in sc.contexts):
            yield g


def _global_section_backtracking(
    model: EmpiricalModel, fixed: dict[str, int]
) -> Section | None:
    """Depth-first assignment with forward checking over context supports."""
    sc = model.scenario
    allowed = {
        c: [s.as_dict() for s in possible_sections(model, c)] for c in sc.contexts
    }
    order = [v for v in sc.variables if v not in fixed]

    def consistent(partial: dict[str, int]) -> bool:
        for c, sections in allowed.items():
            live = [
                s for s in sections
                if all(s[v] == partial[v] for v in c if v in partial)
            ]
            if not live:
                return False
        return True

    assignment = dict(fixed)
    if not consistent(assignment):
        return None

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for x in range(sc.arity(v)):
            assignment[v] = x
            if consistent(assignment) and search(i + 1):
                return True
            del assignment[v]
        return False

    if search(0):
        return Section(tuple(assignment.items()))
    return None


def has_global_section_extending(
    model: EmpiricalModel, s: Section, engine: str = "backtracking"
) -> tuple[bool, Section | None]:
    """Whether a global assignment extends `s`; returns a witness when found.

    engine: "backtracking" (default), "exhaustive" (oracle), or "both"
    (cross-check; raises EngineDisagreement on mismatch).
    """
    fixed = s.as_dict()
    if engine == "backtracking":
        w = _global_section_backtracking(model, fixed)
        return (w is not None), w
    if engine == "exhaustive":
        for g in _global_sections_exhaustive(model):
            if all(g.as_dict()[v] == x for v, x in fixed.items()):
                return True, g
        return False, None
    if engine == "both":
        bt = has_global_section_extending(model, s, "backtracking")
        ex = has_global_section_extending(model, s, "exhaustive")
        if bt[0] != ex[0]:
            raise EngineDisagreement(
                f"backtracking={bt[0]} but exhaustive={ex[0]} for {s}"
            )
        return ex  # lexicographically smallest witness
    raise ValueError(f"unknown engine {engine!r}")


class EngineDisagreement(RuntimeError):
    """The two section-search engines returned different verdicts."""


NONCONTEXTUAL = "noncontextual-logically"
LOGICAL = "logically-contextual"
STRONG = "strongly-contextual"


@dataclass(frozen=True)
class ContextualityVerdict:
    verdict: str
    failing_section: Section | None  # a possible section with no global extension
    global_section: Section | None   # a witness global assignment, when one exists


def is_logically_contextual(
    model: EmpiricalModel, engine: str = "backtracking"
) -> ContextualityVerdict:
    """Classify the model by section extendability."""
    some_failure = None
    any_global = None
    strongly = False
    for c in model.scenario.contexts:
        sections = possible_sections(model, c)
        if not sections:
            raise ValueError(f"context {c} has no possible sections")
        failures = 0
        for s in sections:
            ok, witness = has_global_section_extending(model, s, engine)
            if ok:
                if any_global is None:
                    any_global = witness
            else:
                failures += 1
                if some_failure is None:
                    some_failure = s
        if failures == len(sections):
            strongly = True
    if strongly:
        return ContextualityVerdict(STRONG, some_failure, any_global)
    if some_failure is not None:
        return ContextualityVerdict(LOGICAL, some_failure, any_global)
    return ContextualityVerdict(NONCONTEXTUAL, None, any_global)


def model_from_setup(setup: MultiAgentSetup, state_ref: str = "") -> EmpiricalModel:
    """Empirical model induced by a setup: one table per maximal compatible
    agent set, filled with the default predictions."""
    ctxs = setup_contexts(setup)
    if not ctxs:
        raise ValueError("setup has no contexts")
    variables = setup.agent_names
    outcomes = {a: tuple(range(setup.measurement(a).arity)) for a in variables}
    scenario = MeasurementScenario(variables, ctxs, outcomes, state_ref)
    tables = {c: joint_table(setup, c) for c in ctxs}
    return EmpiricalModel(scenario, tables)
