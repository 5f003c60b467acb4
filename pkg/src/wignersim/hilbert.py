"""Dense complex linear algebra for small composite quantum systems.

States and operators live on a Layout: an ordered list of named subsystems
(e.g. a qutrit plus a few qubit memories). Operators on a subset of the
subsystems are embedded into the full space with the tensor-factor
permutation handled internally, so callers never reorder amplitudes.

Everything is double-precision dense; the intended scale is a handful of
qubits (total dimension well under 100).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from . import tolerances as tol

UNITARY = "unitary"
PROJECTOR = "projector"
GENERAL = "general"


@dataclass(frozen=True)
class Layout:
    """Ordered composite of named subsystems."""

    subsystems: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        subs = tuple((str(n), int(d)) for n, d in self.subsystems)
        object.__setattr__(self, "subsystems", subs)
        names = [n for n, _ in subs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate subsystem names in {names}")
        for n, d in subs:
            if d < 2:
                raise ValueError(f"subsystem {n} has dim {d} < 2")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.subsystems)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.subsystems)

    @property
    def dim(self) -> int:
        return prod(self.dims)

    def index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.subsystems):
            if n == name:
                return i
        raise KeyError(f"unknown subsystem {name!r}")

    def dim_of(self, name: str) -> int:
        return self.subsystems[self.index(name)][1]

    def sub(self, names: tuple[str, ...]) -> "Layout":
        return Layout(tuple((n, self.dim_of(n)) for n in names))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized complex amplitude vector over a layout."""

    layout: Layout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if amps.shape[0] != self.layout.dim:
            raise ValueError(
                f"amplitude length {amps.shape[0]} != layout dim {self.layout.dim}"
            )
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > tol.EPS_NORM * 10:
            raise ValueError(f"state not normalized: |psi|^2 = {norm2}")
        amps.setflags(write=False)


@dataclass(frozen=True, eq=False)
class Operator:
    """Square matrix tagged with the subsystems it acts on.

    targets=None means the operator already acts on a full layout.
    """

    matrix: np.ndarray
    kind: str = GENERAL
    targets: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator matrix must be square, got {m.shape}")
        if self.targets is not None:
            object.__setattr__(self, "targets", tuple(self.targets))
        if self.kind == UNITARY:
            err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
            if err > tol.EPS_ALG:
                raise ValueError(f"not unitary within tolerance (max err {err:.2e})")
        elif self.kind == PROJECTOR:
            err = max(
                np.abs(m @ m - m).max(),
                np.abs(m.conj().T - m).max(),
            )
            if err > tol.EPS_ALG:
                raise ValueError(f"not a projector within tolerance (max err {err:.2e})")
        elif self.kind != GENERAL:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def basis_state(layout: Layout, occupation: dict[str, int]) -> StateVector:
    """Computational basis state |k_1 k_2 ...> given per-subsystem levels."""
    idx = 0
    for name, d in layout.subsystems:
        k = occupation.get(name, 0)
        if not 0 <= k < d:
            raise ValueError(f"level {k} out of range for {name} (dim {d})")
        idx = idx * d + k
    amps = np.zeros(layout.dim, dtype=complex)
    amps[idx] = 1.0
    return StateVector(layout, amps)


def _as_matrix(op: Operator | np.ndarray) -> np.ndarray:
    return op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=complex)


def embed(op: Operator | np.ndarray, layout: Layout, targets: tuple[str, ...]) -> Operator:
    """Lift an operator on `targets` to the full layout (identity elsewhere).

    The targets may appear in any order and any positions; the necessary
    basis permutation is computed here.
    """
    targets = tuple(targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {targets}")
    mat = _as_matrix(op)
    dims = layout.dims
    t_pos = [layout.index(t) for t in targets]
    rest = [i for i in range(len(dims)) if i not in t_pos]
    t_dim = prod(dims[i] for i in t_pos)
    if mat.shape[0] != t_dim:
        raise ValueError(f"operator dim {mat.shape[0]} != target dim {t_dim}")
    big = np.kron(mat, np.eye(prod((dims[i] for i in rest), start=1)))
    # big is written in the basis ordered (targets..., rest...); map each
    # layout-ordered basis index to its position in that ordering.
    order = t_pos + rest
    multi = np.array(np.unravel_index(np.arange(layout.dim), dims))
    pos = np.ravel_multi_index(tuple(multi[i] for i in order), [dims[i] for i in order])
    full = big[np.ix_(pos, pos)]
    kind = op.kind if isinstance(op, Operator) else GENERAL
    return Operator(full, kind=kind, targets=layout.names)


def projector_from_vector(v: StateVector | np.ndarray) -> Operator:
    """Rank-1 projector |v><v| from a normalized vector."""
    amps = v.amplitudes if isinstance(v, StateVector) else np.asarray(v, dtype=complex)
    norm2 = float(np.vdot(amps, amps).real)
    if abs(norm2 - 1.0) > tol.EPS_NORM * 10:
        raise ValueError(f"vector not normalized: |v|^2 = {norm2}")
    return Operator(np.outer(amps, amps.conj()), kind=PROJECTOR)


def shift_matrix(d: int) -> np.ndarray:
    """Cyclic shift |k> -> |k+1 mod d| (the qubit case is sigma_x)."""
    return np.eye(d, dtype=complex)[:, (np.arange(d) + 1) % d]


def record_unitary(
    projectors: tuple[Operator | np.ndarray, ...],
    layout: Layout,
    targets: tuple[str, ...],
    memory: str,
) -> Operator:
    """Memory-update unitary sum_k P_k (x) shift^k on (targets, memory).

    Copies the measured outcome into a fresh memory: applied to
    phi (x) |0>_M it yields sum_k (P_k phi) (x) |k>_M. Embedded in the
    full layout. The memory dimension must equal the number of outcomes.
    """
    mats = [_as_matrix(p) for p in projectors]
    m_dim = layout.dim_of(memory)
    if m_dim != len(mats):
        raise ValueError(
            f"memory {memory} has dim {m_dim} but measurement has {len(mats)} outcomes"
        )
    shift = shift_matrix(m_dim)
    small = sum(
        np.kron(p, np.linalg.matrix_power(shift, k)) for k, p in enumerate(mats)
    )
    return embed(Operator(small, kind=UNITARY), layout, tuple(targets) + (memory,))


def cnot_in_basis(
    v: StateVector | np.ndarray, layout: Layout, system: str, memory: str
) -> Operator:
    """|v><v|_S (x) sigma_x_M + (1 - |v><v|)_S (x) 1_M, embedded in layout.

    The binary-outcome special case of record_unitary, with |v> marking
    the outcome that flips the memory qubit.
    """
    if layout.dim_of(memory) != 2:
        raise ValueError(f"memory {memory} must be a qubit")
    p1 = projector_from_vector(v).matrix
    p0 = np.eye(p1.shape[0]) - p1
    return record_unitary((p0, p1), layout, (system,), memory)


def apply(op: Operator | np.ndarray, state: np.ndarray) -> np.ndarray:
    return _as_matrix(op) @ state


def born_probability(
    state: StateVector | np.ndarray, projectors: tuple[Operator | np.ndarray, ...]
) -> float:
    """||P_k ... P_1 |psi>||^2, projectors applied in the given order."""
    psi = state.amplitudes if isinstance(state, StateVector) else np.asarray(state)
    for p in projectors:
        psi = _as_matrix(p) @ psi
    return float(np.vdot(psi, psi).real)


def commutes(
    a: Operator | np.ndarray, b: Operator | np.ndarray, eps: float | None = None
) -> bool:
    if eps is None:
        eps = tol.EPS_ALG
    ma, mb = _as_matrix(a), _as_matrix(b)
    return bool(np.abs(ma @ mb - mb @ ma).max() <= eps)
