"""Symplectic Pauli algebra cross-checked against dense matrices.

The dense side comes from qdistill.oracle, which builds operators by
Kronecker products with no knowledge of the packed representation.
"""

import itertools

import numpy as np
import pytest

from qdistill.oracle import dense_pauli
from qdistill.paulis import (
    PauliOperator,
    from_xz_arrays,
    multiply,
    single_qubit,
    sym_bits,
    symplectic_inner,
    transpose,
)


def all_paulis(n, phases=(0,)):
    for xz in itertools.product((0, 1), repeat=2 * n):
        x, z = xz[:n], xz[n:]
        for ph in phases:
            yield PauliOperator(n, np.array(x, dtype=np.uint8),
                                np.array(z, dtype=np.uint8), phase_exp=ph)


@pytest.mark.parametrize("n", [1, 2])
def test_multiply_matches_dense_exhaustively(n):
    ops = list(all_paulis(n, phases=(0, 1, 2, 3)))
    for p in ops:
        dp = dense_pauli(p)
        for q in ops:
            prod = multiply(p, q)
            assert np.allclose(dense_pauli(prod), dp @ dense_pauli(q))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_transpose_matches_dense(n):
    for p in all_paulis(n, phases=(0, 1, 2, 3)):
        assert np.allclose(dense_pauli(transpose(p)), dense_pauli(p).T)


def test_multiply_sampled_wide():
    rng = np.random.default_rng(31)
    n = 7
    for _ in range(150):
        x1, z1, x2, z2 = rng.integers(0, 2, size=(4, n)).astype(np.uint8)
        p = PauliOperator(n, x1, z1, phase_exp=int(rng.integers(0, 4)))
        q = PauliOperator(n, x2, z2, phase_exp=int(rng.integers(0, 4)))
        prod = multiply(p, q)
        assert np.allclose(dense_pauli(prod), dense_pauli(p) @ dense_pauli(q))


def test_multiply_is_associative():
    rng = np.random.default_rng(32)
    n = 40
    for _ in range(200):
        ops = []
        for _ in range(3):
            x, z = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
            ops.append(PauliOperator(n, x, z, phase_exp=int(rng.integers(0, 4))))
        p, q, r = ops
        left = multiply(multiply(p, q), r)
        right = multiply(p, multiply(q, r))
        assert left.phase_exp == right.phase_exp
        assert np.array_equal(left.xw, right.xw)
        assert np.array_equal(left.zw, right.zw)


def test_symplectic_inner_detects_commutation():
    rng = np.random.default_rng(33)
    n = 5
    for _ in range(80):
        x1, z1, x2, z2 = rng.integers(0, 2, size=(4, n)).astype(np.uint8)
        p = PauliOperator(n, x1, z1)
        q = PauliOperator(n, x2, z2)
        commutator = dense_pauli(p) @ dense_pauli(q) - dense_pauli(q) @ dense_pauli(p)
        anticommute = bool(np.abs(commutator).max() > 1e-12)
        assert symplectic_inner(p, q) == int(anticommute)
        assert sym_bits(p.xw, p.zw, q.xw, q.zw) == int(anticommute)


def test_label_round_trip():
    for text in ("+X", "-Z", "+XYZ", "-IIYZX", "+iXY", "-iY"):
        p = PauliOperator.from_label(text)
        assert p.label() == text
        q = PauliOperator.from_label(p.label())
        assert q.phase_exp == p.phase_exp
        assert np.array_equal(q.x_bits, p.x_bits)
        assert np.array_equal(q.z_bits, p.z_bits)


def test_label_dense_consistency():
    # the printed letter sequence must be the same operator as the dense build
    x = np.array([1, 1, 0, 0], dtype=np.uint8)
    z = np.array([0, 1, 1, 0], dtype=np.uint8)
    p = PauliOperator(4, x, z)
    assert p.label() == "+XYZI"
    pauli_mats = {
        "I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
        "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1]),
    }
    ref = np.array([[1]])
    for ch in "XYZI":
        ref = np.kron(ref, pauli_mats[ch])
    assert np.allclose(dense_pauli(p), ref)


def test_hermitian_signed_iff_real_sign():
    for p in all_paulis(2, phases=(0, 1, 2, 3)):
        dense = dense_pauli(p)
        hermitian = np.allclose(dense, dense.conj().T)
        assert p.is_hermitian_signed == hermitian


def test_single_qubit_and_from_xz_arrays():
    p = single_qubit(4, 2, "Y", sign=-1)
    assert p.label() == "-IIYI"
    q = from_xz_arrays([0, 0, 1, 0], [0, 0, 1, 0], sign=-1)
    assert q.label() == "-IIYI"
    assert np.array_equal(p.xw, q.xw) and np.array_equal(p.zw, q.zw)
    assert p.phase_exp == q.phase_exp
    with pytest.raises(KeyError):
        single_qubit(4, 2, "Q")


def test_identity_is_neutral():
    rng = np.random.default_rng(34)
    n = 9
    e = PauliOperator.identity(n)
    assert e.label() == "+" + "I" * n
    x, z = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
    p = PauliOperator(n, x, z, phase_exp=2)
    for prod in (multiply(e, p), multiply(p, e)):
        assert prod.phase_exp == p.phase_exp
        assert np.array_equal(prod.xw, p.xw)
        assert np.array_equal(prod.zw, p.zw)


def test_embed_places_factor_at_offset():
    p = PauliOperator.from_label("-XY")
    wide = p.embed(6, 3)
    assert wide.num_qubits == 6
    assert wide.label() == "-IIIXYI"
    # embedding at offset 0 keeps the original labels on the left
    assert p.embed(4, 0).label() == "-XYII"


def test_copy_is_independent():
    p = PauliOperator.from_label("+XZ")
    q = p.copy()
    q.x_bits[0] = 0
    assert p.label() == "+XZ"


def test_squares_to_identity_when_hermitian():
    rng = np.random.default_rng(35)
    n = 17
    for _ in range(50):
        x, z = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
        p = PauliOperator(n, x, z, phase_exp=int(rng.integers(0, 2)) * 2)
        sq = multiply(p, p)
        assert sq.phase_exp == 0
        assert not sq.xw.any() and not sq.zw.any()
