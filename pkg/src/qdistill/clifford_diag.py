"""Diagonal Clifford unitaries defined by a binary symmetric matrix.

U_R = sum_v  i^{v R v^T} |v><v|  for symmetric R over GF(2).  Conjugation
keeps the X part of a Pauli and shifts its Z part:

    U_R E(a,b) U_R^dag = (-1)^{a (b*aR)^T} E(a, b + aR)

(elementwise product *, arithmetic mod 2).  The inverse conjugation picks up
an extra (-1)^{a R a^T} = (-1)^{a . diag R}.  Diagonal entries of R are
phase gates, off-diagonal ones are CZs, so the whole unitary is read off the
matrix directly.
"""

from __future__ import annotations

import numpy as np

from .binmat import BitMatrix, pack_bits, unpack_bits
from .paulis import PauliOperator


class DiagonalClifford:
    __slots__ = ("r_matrix", "bitmat")

    def __init__(self, r_matrix: np.ndarray):
        r = np.asarray(r_matrix, dtype=np.uint8) & 1
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise ValueError("R must be square")
        if (r != r.T).any():
            raise ValueError("R must be symmetric")
        self.r_matrix = r
        self.bitmat = BitMatrix.from_dense(r)

    @property
    def num_qubits(self) -> int:
        return self.r_matrix.shape[0]

    def is_identity(self) -> bool:
        return not self.r_matrix.any()

    def pretty(self) -> str:
        """Gate read-off: P(i) per diagonal one, CZ(i,j) per off-diagonal one
        (1-based qubits)."""
        gates = []
        m = self.num_qubits
        for u in range(m):
            if self.r_matrix[u, u]:
                gates.append(f"P({u + 1})")
        for u in range(m):
            for v in range(u + 1, m):
                if self.r_matrix[u, v]:
                    gates.append(f"CZ({u + 1},{v + 1})")
        return " ".join(gates) if gates else "I"

    def shift_z(self, x_words: np.ndarray) -> np.ndarray:
        """Packed aR for a packed X part (the Z-part shift under conjugation)."""
        return self.bitmat.vec_mul(x_words)

    def __repr__(self) -> str:
        return f"DiagonalClifford({self.pretty()})"


def conjugate(cliff: DiagonalClifford, p: PauliOperator, inverse: bool = False,
              offset: int = 0) -> PauliOperator:
    """Conjugate p by U_R acting on qubits [offset, offset + m) of p's register.

    U_R is the circuit with a phase gate S on every qubit i with R_ii = 1 and
    a CZ on every pair {i, j} with R_ij = 1; inverse=True conjugates by
    U_R^dag instead.  Either direction maps E(a, b) to +/- E(a, b ^ aR).
    """
    m = cliff.num_qubits
    if offset < 0 or offset + m > p.num_qubits:
        raise ValueError("Clifford window exceeds the operator's register")
    x = p.x_bits
    z = p.z_bits
    a = x[offset: offset + m]
    b = z[offset: offset + m]
    r = cliff.r_matrix
    shift = (a @ r) & 1
    # Sign of U E(a,b) U^dag relative to E(a, b^aR): the overlap term
    # pop(a&b&aR), plus the carry of the integer quadratic form a R a^T over
    # its mod-2 reduction -- dropping the carry breaks multiplicativity as
    # soon as R mixes diagonal and off-diagonal entries.
    quad = int(a.astype(np.int64) @ r.astype(np.int64) @ a.astype(np.int64))
    carry = ((quad - int((a & shift).sum())) >> 1) & 1
    sign_exp = (int((a & b & shift).sum()) + carry) & 1
    if inverse:
        sign_exp ^= int((a & np.diag(r)).sum()) & 1
    z_new = z.copy()
    z_new[offset: offset + m] = b ^ shift
    return PauliOperator(p.num_qubits, x, z_new, (p.phase_exp + 2 * sign_exp) & 3)


def solve_symmetric(a_rows: np.ndarray, b_rows: np.ndarray) -> DiagonalClifford | None:
    """Find a symmetric R with a_i R = b_i for every constraint row, or None.

    Unknowns are the m(m+1)/2 upper-triangle entries; the GF(2) solve zeroes
    free variables, so the returned R is the canonical minimal solution.
    """
    a_rows = np.atleast_2d(np.asarray(a_rows, dtype=np.uint8)) & 1
    b_rows = np.atleast_2d(np.asarray(b_rows, dtype=np.uint8)) & 1
    if a_rows.shape != b_rows.shape:
        raise ValueError("constraint row shapes differ")
    rows, m = a_rows.shape
    n_unknowns = m * (m + 1) // 2

    def pair_index(u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return u * m - (u * (u - 1)) // 2 + (v - u)

    eqs = np.zeros((rows * m, n_unknowns), dtype=np.uint8)
    rhs = np.zeros(rows * m, dtype=np.uint8)
    for i in range(rows):
        support = np.nonzero(a_rows[i])[0]
        for c in range(m):
            e = i * m + c
            for u in support:
                eqs[e, pair_index(int(u), c)] ^= 1
            rhs[e] = b_rows[i, c]
    solution = BitMatrix.from_dense(eqs).solve_right(pack_bits(rhs, rows * m))
    if solution is None:
        return None
    bits = unpack_bits(solution, n_unknowns)
    r = np.zeros((m, m), dtype=np.uint8)
    for u in range(m):
        for v in range(u, m):
            r[u, v] = r[v, u] = bits[pair_index(u, v)]
    return DiagonalClifford(r)


def solve_for_code(code) -> DiagonalClifford | None:
    """Symmetric R matching every non-pure-Z generator (a_i R = b_i) and every
    logical X (c_j R = d_j).  Pure-Z rows impose nothing (a = 0 there would
    force b = 0, and their signs ride along classically instead)."""
    code.ensure_logicals()
    base = code.code if hasattr(code, "code") else code
    a_rows, b_rows = [], []
    for g in base.generators:
        if g.xw.any():
            a_rows.append(g.x_bits)
            b_rows.append(g.z_bits)
    for lx in base.logical_x:
        a_rows.append(lx.x_bits)
        b_rows.append(lx.z_bits)
    if not a_rows:
        return DiagonalClifford(np.zeros((base.n, base.n), dtype=np.uint8))
    return solve_symmetric(np.array(a_rows), np.array(b_rows))
