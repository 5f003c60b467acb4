"""Ready-made setups and models.

Includes the two-qubit friend/superobserver setup whose post-selected
run realizes a Hardy-type paradox, the qutrit 5-cycle setup with
memory-undo unitaries, two small compatibility demonstration setups, the
PR-box 4-cycle model, and classical Liar / Yablo statement generators.
"""

from __future__ import annotations

import numpy as np

from .hilbert import Layout, Operator, PROJECTOR, StateVector, UNITARY
from .ncycle import GammaVector, NCycleModel, extremal_model
from .reasoning import ATOMIC_INFERENCE, Statement
from .wigner_setup import Measurement, MultiAgentSetup

_SQ2 = np.sqrt(2.0)
_SQ3 = np.sqrt(3.0)
_SQ6 = np.sqrt(6.0)


def _proj(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


def _span_proj(*vecs) -> Operator:
    """Projector onto the span of the given orthonormal vectors."""
    return Operator(sum(_proj(v) for v in vecs), kind=PROJECTOR)


def _binary_family(vec, dim: int) -> tuple[Operator, Operator]:
    """(complement, |v><v|): outcome 1 marks the vector."""
    p1 = _proj(vec)
    return Operator(np.eye(dim) - p1, kind=PROJECTOR), Operator(p1, kind=PROJECTOR)


def _cnot_small(vec, targets: tuple[str, str]) -> Operator:
    """|v><v| (x) sigma_x + complement (x) 1 on (system, memory qubit)."""
    p1 = _proj(vec)
    d = p1.shape[0]
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    mat = np.kron(p1, sx) + np.kron(np.eye(d) - p1, np.eye(2))
    return Operator(mat, kind=UNITARY, targets=targets)


def fr_setup() -> MultiAgentSetup:
    """Two qubits R, S in (|00> + |10> + |11>)/sqrt(3); Alice and Bob
    measure them in the Z basis, then Ursula and Wigner measure the
    (system, friend-memory) pairs in ok/fail bases.

    Outcome convention: ok -> 1, fail -> 0.
    """
    layout = Layout((("R", 2), ("S", 2), ("A", 2), ("B", 2), ("U", 2), ("W", 2)))
    sys_layout = Layout((("R", 2), ("S", 2)))
    psi = np.array([1, 0, 1, 1], dtype=complex) / _SQ3  # |00> + |10> + |11>
    z0 = np.array([1, 0], dtype=complex)
    z1 = np.array([0, 1], dtype=complex)
    ok_ra = np.array([1, 0, 0, -1], dtype=complex) / _SQ2  # (|00> - |11>)_{RA}
    ok_sb = np.array([1, 0, 0, -1], dtype=complex) / _SQ2
    agents = (
        Measurement("alice", ("R",), (_span_proj(z0), _span_proj(z1)), "A", 0),
        Measurement("bob", ("S",), (_span_proj(z0), _span_proj(z1)), "B", 1),
        Measurement("ursula", ("R", "A"), _binary_family(ok_ra, 4), "U", 2),
        Measurement("wigner", ("S", "B"), _binary_family(ok_sb, 4), "W", 3),
    )
    return MultiAgentSetup(
        layout, agents, StateVector(sys_layout, psi), ("R", "S")
    )


# the five marked qutrit vectors of the 5-cycle setup
KCBS_VECTORS = {
    1: np.array([1, -1, 1], dtype=complex) / _SQ3,
    2: np.array([1, 1, 0], dtype=complex) / _SQ2,
    3: np.array([0, 0, 1], dtype=complex),
    4: np.array([1, 0, 0], dtype=complex),
    5: np.array([0, 1, 1], dtype=complex) / _SQ2,
}

# completion of each marked vector to an orthonormal qutrit basis; the two
# extra vectors span the "0" outcome
_KCBS_COMPLEMENTS = {
    1: (
        np.array([0, 1, 1], dtype=complex) / _SQ2,
        np.array([-2, -1, 1], dtype=complex) / _SQ6,
    ),
    2: (
        np.array([1, -1, 1], dtype=complex) / _SQ3,
        np.array([1, -1, -2], dtype=complex) / _SQ6,
    ),
    3: (
        np.array([1, 1, 0], dtype=complex) / _SQ2,
        np.array([1, -1, 0], dtype=complex) / _SQ2,
    ),
    4: (
        np.array([0, 1, 0], dtype=complex),
        np.array([0, 0, 1], dtype=complex),
    ),
    5: (
        np.array([0, 1, -1], dtype=complex) / _SQ2,
        np.array([1, 0, 0], dtype=complex),
    ),
}


def kcbs_setup() -> MultiAgentSetup:
    """Qutrit S in (|0> + |1> + |2>)/sqrt(3) with five agents measuring the
    5-cycle observables X_2, X_3, X_4, X_5, X_1 in that time order.

    The later agents first apply undo-unitaries (the earlier memory-update
    CNOTs) so that each measurement is compatible with its cycle
    neighbours. Outcome 1 marks the agent's vector |v_i>.
    """
    layout = Layout(
        (("S", 3), ("M2", 2), ("M3", 2), ("M4", 2), ("M5", 2), ("M1", 2))
    )
    sys_layout = Layout((("S", 3),))
    psi = np.ones(3, dtype=complex) / _SQ3

    def family(i: int) -> tuple[Operator, Operator]:
        return (
            _span_proj(*_KCBS_COMPLEMENTS[i]),
            _span_proj(KCBS_VECTORS[i]),
        )

    agents = (
        Measurement("a2", ("S",), family(2), "M2", 0),
        Measurement("a3", ("S",), family(3), "M3", 1),
        Measurement(
            "a4", ("S",), family(4), "M4", 2,
            pre_unitary=_cnot_small(KCBS_VECTORS[2], ("S", "M2")),
        ),
        Measurement(
            "a5", ("S",), family(5), "M5", 3,
            pre_unitary=_cnot_small(KCBS_VECTORS[3], ("S", "M3")),
        ),
        Measurement(
            "a1", ("S",), family(1), "M1", 4,
            pre_unitary=_cnot_small(KCBS_VECTORS[4], ("S", "M4")),
        ),
    )
    return MultiAgentSetup(
        layout, agents, StateVector(sys_layout, psi), ("S",)
    )


def compat_demo_setups(ursula_bell: bool = False) -> tuple[MultiAgentSetup, MultiAgentSetup]:
    """Two small compatibility demonstrations.

    First setup: Alice, Charlie, Debbie measure qubit R in Z, X, Z bases
    in sequence while Bob measures qubit S; Charlie's intervening
    measurement makes Alice and Debbie incompatible, while Bob is
    compatible with everyone.

    Second setup: after Alice's Z measurement of R, Ursula measures the
    pair (R, Alice's memory). With the record basis {|00>, |11>} she is
    compatible with Alice; with ursula_bell=True she uses the Bell vector
    (|00> - |11>)/sqrt(2) instead and is not.
    """
    z0 = np.array([1, 0], dtype=complex)
    z1 = np.array([0, 1], dtype=complex)
    plus = np.array([1, 1], dtype=complex) / _SQ2
    minus = np.array([1, -1], dtype=complex) / _SQ2
    phi = np.array([1, 0, 0, 1], dtype=complex) / _SQ2  # (|00> + |11>)_{RS}
    sys_layout = Layout((("R", 2), ("S", 2)))

    layout_a = Layout(
        (("R", 2), ("S", 2), ("A", 2), ("B", 2), ("C", 2), ("D", 2))
    )
    setup_a = MultiAgentSetup(
        layout_a,
        (
            Measurement("alice", ("R",), (_span_proj(z0), _span_proj(z1)), "A", 0),
            Measurement("bob", ("S",), (_span_proj(z0), _span_proj(z1)), "B", 1),
            Measurement("charlie", ("R",), (_span_proj(plus), _span_proj(minus)), "C", 2),
            Measurement("debbie", ("R",), (_span_proj(z0), _span_proj(z1)), "D", 3),
        ),
        StateVector(sys_layout, phi),
        ("R", "S"),
    )

    layout_b = Layout((("R", 2), ("S", 2), ("A", 2), ("U", 2), ("B", 2)))
    if ursula_bell:
        marked = np.array([1, 0, 0, -1], dtype=complex) / _SQ2  # (|00> - |11>)_{RA}
    else:
        marked = np.array([0, 0, 0, 1], dtype=complex)  # |11>_{RA}
    setup_b = MultiAgentSetup(
        layout_b,
        (
            Measurement("alice", ("R",), (_span_proj(z0), _span_proj(z1)), "A", 0),
            Measurement("ursula", ("R", "A"), _binary_family(marked, 4), "U", 1),
            Measurement("bob", ("S",), (_span_proj(z0), _span_proj(z1)), "B", 2),
        ),
        StateVector(sys_layout, phi),
        ("R", "S"),
    )
    return setup_a, setup_b


def pr_box_model() -> NCycleModel:
    """The 4-cycle vertex with three correlated and one anticorrelated edge."""
    return extremal_model(4, GammaVector((1, 1, 1, -1)))


def _var(i: int) -> str:
    return f"s{i}"


def liar_chain(n: int) -> tuple[Statement, ...]:
    """Classical Liar cycle: s_i = s_{i+1} for i < n and s_n = not s_1.

    Each equality contributes both value-propagating inferences; no truth
    assignment satisfies the full set.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    out = []
    for i in range(1, n):
        for v in (0, 1):
            out.append(
                Statement(ATOMIC_INFERENCE, ((_var(i), v),), ((_var(i + 1), v),))
            )
    for v in (0, 1):
        out.append(
            Statement(ATOMIC_INFERENCE, ((_var(n), v),), ((_var(1), 1 - v),))
        )
    return tuple(out)


def yablo_prefix(n: int) -> tuple[Statement, ...]:
    """Finite Yablo pattern: s_i = 1 implies s_j = 0 for every j > i.

    Consistent: set everything false, or everything false except the last.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    return tuple(
        Statement(ATOMIC_INFERENCE, ((_var(i), 1),), ((_var(j), 0),))
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    )


def yablo_pattern_setup(n: int, weights=None) -> MultiAgentSetup:
    """A quantum setup realizing the finite Yablo pattern classically.

    n agents measure n distinct qubits in the Z basis; the shared state is
    a superposition of the bit strings with at most one 1, so a_i = 1
    certainly implies a_j = 0 for every other agent. All measurements are
    mutually compatible and a single joint distribution explains them.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    strings = [(0,) * n] + [
        tuple(1 if j == i else 0 for j in range(n)) for i in range(n)
    ]
    if weights is None:
        weights = np.ones(len(strings))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(strings),) or weights.min() <= 0:
        raise ValueError(f"need {len(strings)} positive weights")
    amps = np.zeros(2 ** n, dtype=complex)
    for w, s in zip(np.sqrt(weights / weights.sum()), strings):
        idx = 0
        for b in s:
            idx = idx * 2 + b
        amps[idx] = w
    sys_names = tuple(f"Q{i + 1}" for i in range(n))
    mem_names = tuple(f"L{i + 1}" for i in range(n))
    layout = Layout(
        tuple((q, 2) for q in sys_names) + tuple((m, 2) for m in mem_names)
    )
    z0 = np.array([1, 0], dtype=complex)
    z1 = np.array([0, 1], dtype=complex)
    agents = tuple(
        Measurement(
            _var(i + 1), (sys_names[i],), (_span_proj(z0), _span_proj(z1)),
            mem_names[i], i,
        )
        for i in range(n)
    )
    sys_layout = Layout(tuple((q, 2) for q in sys_names))
    return MultiAgentSetup(layout, agents, StateVector(sys_layout, amps), sys_names)
