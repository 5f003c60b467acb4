import numpy as np
import pytest

from wignersim.hilbert import (
    Layout,
    Operator,
    StateVector,
    apply,
    basis_state,
    born_probability,
    cnot_in_basis,
    commutes,
    embed,
    projector_from_vector,
    record_unitary,
    shift_matrix,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
I2 = np.eye(2, dtype=complex)


def test_layout_basics():
    lay = Layout((("A", 2), ("B", 3)))
    assert lay.dim == 6
    assert lay.names == ("A", "B")
    assert lay.dim_of("B") == 3
    assert lay.index("B") == 1
    with pytest.raises(KeyError):
        lay.index("C")
    with pytest.raises(ValueError):
        Layout((("A", 2), ("A", 2)))


def test_basis_state_indexing():
    lay = Layout((("A", 2), ("B", 3)))
    st = basis_state(lay, {"A": 1, "B": 2})
    assert st.amplitudes[1 * 3 + 2] == 1.0
    assert abs(np.vdot(st.amplitudes, st.amplitudes) - 1) < 1e-12


def test_state_normalization_enforced():
    lay = Layout((("A", 2),))
    with pytest.raises(ValueError):
        StateVector(lay, np.array([1.0, 1.0]))


def test_operator_kind_validation():
    with pytest.raises(ValueError):
        Operator(np.array([[1, 1], [0, 1]]), kind="unitary")
    with pytest.raises(ValueError):
        Operator(np.array([[0.5, 0.5], [0.5, 0.6]]), kind="projector")
    Operator(X, kind="unitary")
    Operator(np.outer([1, 0], [1, 0]), kind="projector")


def test_embed_orders_factors_correctly():
    lay = Layout((("A", 2), ("B", 2), ("C", 2)))
    # X on C: manual kron I (x) I (x) X
    full = embed(Operator(X), lay, ("C",)).matrix
    assert np.allclose(full, np.kron(np.kron(I2, I2), X))
    # X on A
    full = embed(Operator(X), lay, ("A",)).matrix
    assert np.allclose(full, np.kron(X, np.kron(I2, I2)))
    # two-site operator given in reversed target order (C, A)
    cx = np.kron(np.outer([1, 0], [1, 0]), I2) + np.kron(
        np.outer([0, 1], [0, 1]), X
    )  # control first factor, target second
    full = embed(Operator(cx), lay, ("C", "A")).matrix
    # control C, target A: check action on |a b c>
    st = np.zeros(8)
    st[0b001] = 1.0  # A=0 B=0 C=1
    out = full @ st
    expect = np.zeros(8)
    expect[0b101] = 1.0  # A flipped
    assert np.allclose(out, expect)


def test_embed_rejects_wrong_dims():
    lay = Layout((("A", 2), ("B", 3)))
    with pytest.raises(ValueError):
        embed(Operator(X), lay, ("B",))
    with pytest.raises(ValueError):
        embed(Operator(X), lay, ("A", "A"))


def test_shift_matrix_cycles_levels():
    s = shift_matrix(3)
    v = np.zeros(3)
    v[0] = 1
    assert np.allclose(s @ v, [0, 1, 0])
    assert np.allclose(np.linalg.matrix_power(s, 3), np.eye(3))
    assert np.allclose(shift_matrix(2), X)


def test_record_unitary_copies_outcome():
    lay = Layout((("S", 3), ("M", 3)))
    projs = tuple(
        Operator(np.outer(e, e), kind="projector") for e in np.eye(3)
    )
    u = record_unitary(projs, lay, ("S",), "M")
    psi = np.kron(np.array([1, 1, 1]) / np.sqrt(3), [1, 0, 0])
    out = u.matrix @ psi
    for k in range(3):
        expect_idx = k * 3 + k
        assert abs(out[expect_idx] - 1 / np.sqrt(3)) < 1e-12
    # memory dim must equal number of outcomes
    lay_bad = Layout((("S", 3), ("M", 2)))
    with pytest.raises(ValueError):
        record_unitary(projs, lay_bad, ("S",), "M")


def test_cnot_in_basis_involution():
    lay = Layout((("S", 2), ("M", 2)))
    minus = np.array([1, -1]) / np.sqrt(2)
    cn = cnot_in_basis(minus, lay, "S", "M")
    assert np.allclose(cn.matrix @ cn.matrix, np.eye(4))


def test_apply_and_born_probability():
    lay = Layout((("S", 2),))
    st = StateVector(lay, np.array([1, 1]) / np.sqrt(2))
    p0 = projector_from_vector(np.array([1, 0], dtype=complex))
    assert abs(born_probability(st, (p0,)) - 0.5) < 1e-12
    rotated = apply(Operator(X, kind="unitary"), st.amplitudes)
    assert abs(born_probability(rotated, (p0,)) - 0.5) < 1e-12
    # sequential product rule: P(+ then 0) = |<0|+>|^2 * |<+|psi>|^2
    pplus = projector_from_vector(np.array([1, 1]) / np.sqrt(2))
    assert abs(born_probability(st, (pplus, p0)) - 0.5) < 1e-12


def test_commutes():
    assert commutes(X, X)
    assert not commutes(X, Z)
    assert commutes(np.kron(X, I2), np.kron(I2, Z))
