"""Diagonal Clifford conjugation against an explicit gate-built unitary."""

import itertools

import numpy as np
import pytest

from qdistill.clifford_diag import (
    DiagonalClifford,
    conjugate,
    solve_for_code,
    solve_symmetric,
)
from qdistill.codes import get_code
from qdistill.oracle import dense_pauli
from qdistill.paulis import PauliOperator


def dense_unitary(r: np.ndarray) -> np.ndarray:
    """Product of S gates (diagonal of R) and CZ gates (off-diagonal of R),
    as an explicit diagonal matrix.  Qubit 0 is the most significant bit,
    matching the kron order used by the dense Pauli oracle."""
    m = r.shape[0]
    diag = np.empty(1 << m, dtype=np.complex128)
    for v in range(1 << m):
        bits = [(v >> (m - 1 - i)) & 1 for i in range(m)]
        quarter = sum(int(r[i, i]) * bits[i] for i in range(m))
        half = sum(int(r[i, j]) * bits[i] * bits[j]
                   for i in range(m) for j in range(i + 1, m))
        diag[v] = (1j ** quarter) * ((-1) ** half)
    return np.diag(diag)


def symmetric_matrices(m):
    entries = [(i, j) for i in range(m) for j in range(i, m)]
    for choice in itertools.product((0, 1), repeat=len(entries)):
        r = np.zeros((m, m), dtype=np.uint8)
        for (i, j), bit in zip(entries, choice):
            r[i, j] = r[j, i] = bit
        yield r


def test_r_matrix_must_be_symmetric():
    with pytest.raises(ValueError):
        DiagonalClifford(np.array([[0, 1], [0, 0]], dtype=np.uint8))


def test_conjugate_matches_dense_exhaustively():
    # every symmetric 2x2 R, every 2-qubit Pauli, both directions
    for r in symmetric_matrices(2):
        cliff = DiagonalClifford(r)
        u = dense_unitary(r)
        for xz in itertools.product((0, 1), repeat=4):
            p = PauliOperator(2, np.array(xz[:2], dtype=np.uint8),
                              np.array(xz[2:], dtype=np.uint8))
            dp = dense_pauli(p)
            fwd = conjugate(cliff, p)
            assert np.allclose(dense_pauli(fwd), u @ dp @ u.conj().T)
            inv = conjugate(cliff, p, inverse=True)
            assert np.allclose(dense_pauli(inv), u.conj().T @ dp @ u)


def test_conjugate_sampled_three_qubits():
    rng = np.random.default_rng(61)
    for _ in range(25):
        r = np.zeros((3, 3), dtype=np.uint8)
        for i in range(3):
            for j in range(i, 3):
                r[i, j] = r[j, i] = rng.integers(0, 2)
        cliff = DiagonalClifford(r)
        u = dense_unitary(r)
        x, z = rng.integers(0, 2, size=(2, 3)).astype(np.uint8)
        p = PauliOperator(3, x, z, phase_exp=int(rng.integers(0, 2)) * 2)
        fwd = conjugate(cliff, p)
        assert np.allclose(dense_pauli(fwd), u @ dense_pauli(p) @ u.conj().T)


def test_conjugate_with_offset_acts_on_a_window():
    rng = np.random.default_rng(62)
    r = np.array([[1, 1], [1, 0]], dtype=np.uint8)
    cliff = DiagonalClifford(r)
    u = np.kron(np.kron(np.eye(2), dense_unitary(r)), np.eye(2))
    for _ in range(15):
        x, z = rng.integers(0, 2, size=(2, 4)).astype(np.uint8)
        p = PauliOperator(4, x, z)
        got = conjugate(cliff, p, offset=1)
        assert np.allclose(dense_pauli(got), u @ dense_pauli(p) @ u.conj().T)
    with pytest.raises(ValueError):
        conjugate(cliff, PauliOperator.identity(4), offset=3)


def test_forward_then_inverse_is_identity():
    rng = np.random.default_rng(63)
    n = 6
    for _ in range(40):
        r = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            for j in range(i, n):
                r[i, j] = r[j, i] = rng.integers(0, 2)
        cliff = DiagonalClifford(r)
        x, z = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
        p = PauliOperator(n, x, z, phase_exp=int(rng.integers(0, 2)) * 2)
        back = conjugate(cliff, conjugate(cliff, p), inverse=True)
        assert back.label() == p.label()


def test_directions_share_bits_and_differ_by_diagonal_sign():
    rng = np.random.default_rng(64)
    n = 5
    for _ in range(30):
        r = np.zeros((n, n), dtype=np.uint8)
        for i in range(n):
            for j in range(i, n):
                r[i, j] = r[j, i] = rng.integers(0, 2)
        cliff = DiagonalClifford(r)
        x, z = rng.integers(0, 2, size=(2, n)).astype(np.uint8)
        p = PauliOperator(n, x, z)
        fwd = conjugate(cliff, p)
        inv = conjugate(cliff, p, inverse=True)
        assert np.array_equal(fwd.xw, inv.xw)
        assert np.array_equal(fwd.zw, inv.zw)
        flip = int((x & np.diag(r)).sum()) & 1
        assert ((fwd.phase_exp - inv.phase_exp) & 3) == 2 * flip


def test_solve_symmetric_phase_gate_example():
    rows = np.array([[1, 1, 0], [0, 1, 1], [0, 0, 1]], dtype=np.uint8)
    cliff = solve_symmetric(rows, rows)
    assert np.array_equal(cliff.r_matrix, np.eye(3, dtype=np.uint8))


def test_solve_symmetric_contradiction_returns_none():
    a = np.array([[1, 0, 0], [1, 0, 0]], dtype=np.uint8)
    b = np.array([[0, 1, 0], [0, 0, 1]], dtype=np.uint8)
    assert solve_symmetric(a, b) is None


def test_solve_symmetric_random_feasible_systems():
    rng = np.random.default_rng(65)
    for _ in range(30):
        m = int(rng.integers(2, 9))
        r_true = np.zeros((m, m), dtype=np.uint8)
        for i in range(m):
            for j in range(i, m):
                r_true[i, j] = r_true[j, i] = rng.integers(0, 2)
        a = rng.integers(0, 2, size=(int(rng.integers(1, m + 2)), m)).astype(np.uint8)
        b = (a @ r_true) % 2
        cliff = solve_symmetric(a, b)
        assert cliff is not None
        r = cliff.r_matrix
        assert np.array_equal(r, r.T)
        assert np.array_equal((a @ r) % 2, b)


def test_solve_symmetric_shape_mismatch():
    with pytest.raises(ValueError):
        solve_symmetric(np.array([[1, 0]]), np.array([[1, 0, 0]]))


@pytest.mark.parametrize("name", ["five_qubit", "yy3"])
def test_solve_for_code_satisfies_all_constraints(name):
    code = get_code(name)
    cliff = solve_for_code(code)
    assert cliff is not None
    r = cliff.r_matrix
    base = code.code if hasattr(code, "code") else code
    # the contract: a_i R == b_i for every X-carrying generator and logical X
    for g in base.generators:
        if g.xw.any():
            assert np.array_equal((g.x_bits @ r) % 2, g.z_bits)
    for lx in base.logical_x:
        assert np.array_equal((lx.x_bits @ r) % 2, lx.z_bits)


def test_solve_for_code_css_needs_no_correction():
    cliff = solve_for_code(get_code("steane"))
    assert cliff is not None
    assert not cliff.r_matrix.any()


def test_yy3_solution_is_phase_gate_on_every_qubit():
    cliff = solve_for_code(get_code("yy3"))
    assert np.array_equal(cliff.r_matrix, np.eye(3, dtype=np.uint8))
