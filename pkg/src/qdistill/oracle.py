"""Dense state-vector reference implementation.

Everything here is deliberately naive and independent of the packed
bit-vector code paths: operators are built by literal 2x2 Kronecker
products from *unpacked* bit arrays, so agreement between this module and
the fast paths is evidence, not tautology.

Qubit 0 is the leftmost Kronecker factor, i.e. the most significant bit of
a basis-state index.  Hard cap of 16 qubits: this is a test fixture, not a
simulator.
"""

from __future__ import annotations

import numpy as np

from .paulis import PauliOperator

_I2 = np.eye(2, dtype=np.complex128)
_X2 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z2 = np.array([[1, 0], [0, -1]], dtype=np.complex128)

MAX_QUBITS = 16


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense oracle capped at {MAX_QUBITS} qubits, got {n}")


def dense_pauli(p: PauliOperator) -> np.ndarray:
    """2^n x 2^n matrix of ``i^phase_exp · E(a,b)``, built factor by factor."""
    _check_size(p.num_qubits)
    x = p.x_bits
    z = p.z_bits
    m = np.array([[1]], dtype=np.complex128)
    for i in range(p.num_qubits):
        if x[i] and z[i]:
            f = _X2 @ _Z2
        elif x[i]:
            f = _X2
        elif z[i]:
            f = _Z2
        else:
            f = _I2
        m = np.kron(m, f)
    # i^{a b^T} Hermitian correction plus the tracked phase, integer dot
    k = (int(p.phase_exp) + int(np.dot(x.astype(int), z.astype(int)))) % 4
    return (1j ** k) * m


def apply_pauli(p: PauliOperator, vec: np.ndarray) -> np.ndarray:
    """Matrix-free ``(i^k E(a,b)) |vec>`` for state vectors up to 16 qubits.

    E(a,b)|v> = i^{ab^T} (-1)^{b·v} |v ⊕ a>, with qubit 0 the MSB of the
    index.
    """
    n = p.num_qubits
    _check_size(n)
    if vec.shape != (1 << n,):
        raise ValueError("state dimension mismatch")
    x = p.x_bits
    z = p.z_bits
    a_int = 0
    b_int = 0
    for i in range(n):
        if x[i]:
            a_int |= 1 << (n - 1 - i)
        if z[i]:
            b_int |= 1 << (n - 1 - i)
    k = (int(p.phase_exp) + int(np.dot(x.astype(int), z.astype(int)))) % 4
    idx = np.arange(1 << n, dtype=np.uint64)
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(b_int)) & np.uint64(1)).astype(np.float64)
    out = np.empty_like(vec)
    out[idx ^ np.uint64(a_int)] = (1j ** k) * signs * vec
    return out


class DenseState:
    """A normalized complex amplitude vector over computational basis states."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray):
        _check_size(num_qubits)
        self.num_qubits = num_qubits
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << num_qubits,):
            raise ValueError("amplitude vector has wrong length")
        self.amplitudes = amplitudes

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "DenseState":
        v = np.zeros(1 << num_qubits, dtype=np.complex128)
        v[index] = 1.0
        return cls(num_qubits, v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "DenseState":
        n = self.norm()
        if n < 1e-12:
            raise ValueError("cannot normalize a (near-)zero state")
        return DenseState(self.num_qubits, self.amplitudes / n)

    def overlap(self, other: "DenseState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "DenseState") -> float:
        return abs(self.overlap(other)) ** 2


def bell_state(n: int) -> DenseState:
    """(1/sqrt(2^n)) sum_x |x>_A |x>_B on 2n qubits (A block then B block)."""
    _check_size(2 * n)
    v = np.zeros(1 << (2 * n), dtype=np.complex128)
    for x in range(1 << n):
        v[(x << n) | x] = 1.0
    return DenseState(2 * n, v / np.sqrt(1 << n))


def ghz_state(n: int, parties: int) -> DenseState:
    """(1/sqrt(2^n)) sum_x |x>^{otimes parties} on n*parties qubits."""
    _check_size(n * parties)
    v = np.zeros(1 << (n * parties), dtype=np.complex128)
    for x in range(1 << n):
        idx = 0
        for _ in range(parties):
            idx = (idx << n) | x
        v[idx] = 1.0
    return DenseState(n * parties, v / np.sqrt(1 << n))


def project_row(state: DenseState, row: PauliOperator) -> DenseState:
    """Apply (I + row)/2 without normalizing."""
    moved = apply_pauli(row, state.amplitudes)
    return DenseState(state.num_qubits, 0.5 * (state.amplitudes + moved))


def state_from_table(table) -> DenseState:
    """Project a reference basis state onto the table's joint +1 eigenspace.

    Tries |0>, |1>, ... until the projected vector is non-negligible, then
    normalizes.  ``table`` is anything exposing ``total_qubits`` and
    ``rows`` (a list of Hermitian-signed PauliOperator).
    """
    m = table.total_qubits
    _check_size(m)
    for ref in range(1 << m):
        st = DenseState.basis(m, ref)
        for row in table.rows:
            st = project_row(st, row)
        if st.norm() > 1e-9:
            return st.normalized()
    raise ValueError("no reference state survived projection (inconsistent table?)")


def ghz_map_dense(mat: np.ndarray, parties: int) -> np.ndarray:
    """Sum_xy M_xy (|x...x><y...y|) over ``parties - 1`` register copies."""
    dim = mat.shape[0]
    n = int(dim).bit_length() - 1
    copies = parties - 1
    _check_size(n * copies)
    big = 1 << (n * copies)
    out = np.zeros((big, big), dtype=np.complex128)
    for x in range(dim):
        xi = 0
        for _ in range(copies):
            xi = (xi << n) | x
        for y in range(dim):
            if mat[x, y] == 0:
                continue
            yi = 0
            for _ in range(copies):
                yi = (yi << n) | y
            out[xi, yi] = mat[x, y]
    return out


def random_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    d = 1 << n
    return rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))


def verify_identity(kind: str, **kw) -> dict:
    """Compute both sides of a named identity densely; report max deviation.

    Kinds: ``bell_transpose``, ``ghz_map``, ``ghz_residual``, ``ghz_residual_multi``,
    ``css_logical_bell``.  Returns {"kind", "max_deviation", "pass"} with
    pass = deviation < 1e-10.
    """
    if kind == "bell_transpose":
        dev = _verify_bell_transpose(**kw)
    elif kind == "ghz_map":
        dev = _verify_ghz_map(**kw)
    elif kind == "ghz_residual":
        dev = _verify_ghz_residual(**kw)
    elif kind == "ghz_residual_multi":
        dev = _verify_ghz_residual_multi(**kw)
    elif kind == "css_logical_bell":
        dev = _verify_css_logical_bell(**kw)
    else:
        raise ValueError(f"unknown identity kind {kind!r}")
    return {"kind": kind, "max_deviation": dev, "pass": dev < 1e-10}


def _kron_with_identity(mat: np.ndarray, left_qubits: int, right_qubits: int) -> np.ndarray:
    out = mat
    if left_qubits:
        out = np.kron(np.eye(1 << left_qubits), out)
    if right_qubits:
        out = np.kron(out, np.eye(1 << right_qubits))
    return out


def _verify_bell_transpose(n: int = 2, rng: np.random.Generator | None = None,
                           mat: np.ndarray | None = None) -> float:
    rng = rng or np.random.default_rng(0)
    m = mat if mat is not None else random_matrix(n, rng)
    phi = bell_state(n).amplitudes
    lhs = _kron_with_identity(m, 0, n) @ phi
    rhs = _kron_with_identity(m.T, n, 0) @ phi
    return float(np.max(np.abs(lhs - rhs)))


def _verify_ghz_map(n: int = 1, parties: int = 3,
                    rng: np.random.Generator | None = None) -> float:
    rng = rng or np.random.default_rng(0)
    a = random_matrix(n, rng)
    b = random_matrix(n, rng)
    alpha, beta = rng.normal(size=2)
    dev = 0.0
    # homomorphism and linearity
    dev = max(dev, float(np.max(np.abs(
        ghz_map_dense(a @ b, parties) - ghz_map_dense(a, parties) @ ghz_map_dense(b, parties)))))
    dev = max(dev, float(np.max(np.abs(
        ghz_map_dense(alpha * a + beta * b, parties)
        - alpha * ghz_map_dense(a, parties) - beta * ghz_map_dense(b, parties)))))
    # state identity: (M ⊗ I)|GHZ> = (I ⊗ Phi(M^T))|GHZ>
    ghz = ghz_state(n, parties).amplitudes
    lhs = _kron_with_identity(a, 0, n * (parties - 1)) @ ghz
    rhs = _kron_with_identity(ghz_map_dense(a.T, parties), n, 0) @ ghz
    dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return dev


def _stabilized_deviation(state: DenseState, op: PauliOperator, sign: int) -> float:
    """|| sign·op|psi> − |psi> ||_inf."""
    moved = apply_pauli(op, state.amplitudes)
    return float(np.max(np.abs(sign * moved - state.amplitudes)))


def _verify_ghz_residual(stab: PauliOperator, outcome: int = 1) -> float:
    from .ghz_map import induced_bc, pair_zz_rows

    n = stab.num_qubits
    state = ghz_state(n, 3)
    proj = stab if outcome > 0 else PauliOperator.from_words(
        n, stab.xw.copy(), stab.zw.copy(), (stab.phase_exp + 2) & 3)
    st = project_row(state, proj.embed(3 * n, 0)).normalized()
    ind = induced_bc(stab, outcome)
    joint = ind.embedded(total_parties=3)
    dev = _stabilized_deviation(st, joint, ind.sign)
    for zz in pair_zz_rows(n, parties=3):
        dev = max(dev, _stabilized_deviation(st, zz, 1))
    return dev


def _verify_ghz_residual_multi(stab: PauliOperator, parties: int, split=None, outcome: int = 1) -> float:
    from .ghz_map import BSplit, induced_multi, pair_zz_rows

    n = stab.num_qubits
    state = ghz_state(n, parties)
    proj = stab if outcome > 0 else PauliOperator.from_words(
        n, stab.xw.copy(), stab.zw.copy(), (stab.phase_exp + 2) & 3)
    st = project_row(state, proj.embed(parties * n, 0)).normalized()
    if split is None:
        split = BSplit.default(stab.z_bits, parties)
    ind = induced_multi(stab, outcome, parties, split)
    joint = ind.embedded(total_parties=parties)
    dev = _stabilized_deviation(st, joint, ind.sign)
    for zz in pair_zz_rows(n, parties=parties):
        dev = max(dev, _stabilized_deviation(st, zz, 1))
    return dev


def _verify_css_logical_bell(h_x: np.ndarray, h_z: np.ndarray) -> float:
    """CSS-projected Bell pairs equal encoded logical Bell pairs (overlap 1)."""
    from .binmat import BitMatrix, unpack_bits

    h_x = np.asarray(h_x, dtype=np.uint8) % 2
    h_z = np.asarray(h_z, dtype=np.uint8) % 2
    n = h_x.shape[1]
    _check_size(2 * n)
    bm_x = BitMatrix.from_dense(h_x)
    bm_z = BitMatrix.from_dense(h_z)
    k = n - bm_x.rank() - bm_z.rank()
    # left side: project Alice's half of |Phi+_n> onto the code space
    st = bell_state(n)
    for r in range(h_x.shape[0]):
        row = PauliOperator(n, h_x[r], np.zeros(n, dtype=np.uint8))
        st = project_row(st, row.embed(2 * n, 0))
    for r in range(h_z.shape[0]):
        row = PauliOperator(n, np.zeros(n, dtype=np.uint8), h_z[r])
        st = project_row(st, row.embed(2 * n, 0))
    lhs = st.normalized()
    # right side: explicit logical Bell pairs over C2 cosets
    c2_rows = [h_x[r] for r in range(h_x.shape[0])]
    quotient = []
    from .binmat import Eliminator, pack_bits
    elim = Eliminator(n)
    for r in c2_rows:
        elim.add(pack_bits(r, n))
    for v in bm_z.right_nullspace():  # C1 = nullspace of H_Z
        if elim.add(v):
            quotient.append(unpack_bits(v, n))
    assert len(quotient) == k, (len(quotient), k)
    c2_span = _span(c2_rows, n)
    amp = np.zeros(1 << (2 * n), dtype=np.complex128)
    for x in range(1 << k):
        zvec = np.zeros(n, dtype=np.uint8)
        for j in range(k):
            if (x >> (k - 1 - j)) & 1:
                zvec ^= quotient[j]
        for ya in c2_span:
            for yb in c2_span:
                ia = _bits_to_index(zvec ^ ya)
                ib = _bits_to_index(zvec ^ yb)
                amp[(ia << n) | ib] += 1.0
    rhs = DenseState(2 * n, amp).normalized()
    return float(1.0 - lhs.fidelity(rhs))


def _span(rows, n: int):
    out = [np.zeros(n, dtype=np.uint8)]
    from .binmat import Eliminator, pack_bits
    elim = Eliminator(n)
    basis = []
    for r in rows:
        if elim.add(pack_bits(r, n)):
            basis.append(np.asarray(r, dtype=np.uint8))
    for m in range(1, 1 << len(basis)):
        v = np.zeros(n, dtype=np.uint8)
        for j in range(len(basis)):
            if (m >> j) & 1:
                v ^= basis[j]
        out.append(v)
    return out


def _bits_to_index(bits: np.ndarray) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx
