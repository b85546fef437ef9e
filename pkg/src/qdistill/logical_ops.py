"""Logical Pauli generation by simulating code measurements on GHZ tables.

The generator matrix is first brought to the block form [[0 H_Z], [H_1 H_2]]
by GF(2) row operations carried out as genuine Pauli multiplications, so row
signs stay consistent.  Each row is then measured on subsystem A of a
reduced 2n-row GHZ table (the n Z_A Z_B rows and the n X_A X_B X_C rows; the
middle Z_B Z_C section never participates and is omitted).  Non-replaced
rows whose A-columns are independent of everything harvested so far yield
the logical Z operators (top half, always purely Z-type, sign +1) and the
logical X operators (bottom half, sign taken from the table).  A final GF(2)
change of basis on the Z side enforces the symplectic pairing
sym(Zbar_i, Xbar_j) = delta_ij.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binmat import BitMatrix, Eliminator, pack_bits
from .paulis import PauliOperator, multiply, symplectic_inner
from .tableau import TAG_REPLACED, TAG_XXX, TAG_ZZ, StabilizerTable


@dataclass
class StandardFormCode:
    """Generators in block form: first r_z rows purely Z (full-rank H_Z),
    remaining r_x rows with full-rank X part H_1."""
    rows: list[PauliOperator]
    r_z: int
    r_x: int

    @property
    def h_matrix(self) -> np.ndarray:
        n = self.rows[0].num_qubits if self.rows else 0
        out = np.zeros((len(self.rows), 2 * n), dtype=np.uint8)
        for i, p in enumerate(self.rows):
            out[i, :n] = p.x_bits
            out[i, n:] = p.z_bits
        return out

    @property
    def signs(self) -> list[int]:
        return [p.sign for p in self.rows]


def standard_form(code) -> StandardFormCode:
    base = code.code if hasattr(code, "code") else code
    work = [g.copy() for g in base.generators]
    n = base.n
    x_block: list[PauliOperator] = []
    remaining = list(range(len(work)))
    for c in range(n):
        sel = -1
        for idx in remaining:
            if work[idx].x_bits[c]:
                sel = idx
                break
        if sel < 0:
            continue
        pivot = work[sel]
        remaining.remove(sel)
        for idx in remaining:
            if work[idx].x_bits[c]:
                work[idx] = multiply(work[idx], pivot)
        x_block.append(pivot)
    z_block = [work[idx] for idx in remaining]
    for p in z_block:
        if p.xw.any():  # cannot happen: every X column was eliminated
            raise AssertionError("standard form left an X component in the Z block")
    rows = z_block + x_block
    sf = StandardFormCode(rows=rows, r_z=len(z_block), r_x=len(x_block))
    if sf.r_z + sf.r_x != len(base.generators):
        raise AssertionError("standard form changed the generator count")
    return sf


def _reduced_ghz_table(n: int) -> StabilizerTable:
    """2n-row GHZ bookkeeping table: Z_{A_i}Z_{B_i} then X_{A_i}X_{B_i}X_{C_i}."""
    total = 3 * n
    rows: list[PauliOperator] = []
    tags: list[str] = []
    for i in range(n):
        z = np.zeros(total, dtype=np.uint8)
        z[i] = z[n + i] = 1
        rows.append(PauliOperator(total, np.zeros(total, dtype=np.uint8), z, 0))
        tags.append(TAG_ZZ)
    for i in range(n):
        x = np.zeros(total, dtype=np.uint8)
        x[i] = x[n + i] = x[2 * n + i] = 1
        rows.append(PauliOperator(total, x, np.zeros(total, dtype=np.uint8), 0))
        tags.append(TAG_XXX)
    return StabilizerTable([("A", n), ("B", n), ("C", n)], rows, tags)


def _a_columns(row: PauliOperator, n: int) -> np.ndarray:
    return pack_bits(np.concatenate([row.x_bits[:n], row.z_bits[:n]]), 2 * n)


def logical_paulis(code) -> tuple[list[PauliOperator], list[PauliOperator]]:
    """(logical_z, logical_x) for a valid stabilizer code, deterministically.

    All simulated measurement outcomes are forced +1; logical X signs emerge
    purely from the Pauli arithmetic of the row updates.
    """
    base = code.code if hasattr(code, "code") else code
    n, k = base.n, base.k
    sf = standard_form(base)
    table = _reduced_ghz_table(n)
    for p, row in enumerate(sf.rows):
        obs = row.embed(3 * n, 0)
        try:
            table.measure(obs, forced=1)
        except ValueError as exc:
            raise RuntimeError(
                f"generator row {p} could not be measured on the GHZ table: {exc}")

    span = Eliminator(2 * n)
    for row in sf.rows:
        span.add(_a_columns(row, n))

    logical_z: list[PauliOperator] = []
    z_bits_rows: list[np.ndarray] = []
    for q in range(n):
        if table.row_tags[q] == TAG_REPLACED:
            continue
        row = table.rows[q]
        if not span.add(_a_columns(row, n)):
            continue
        f = row.z_bits[:n]
        if row.x_bits[:n].any() or row.phase_exp != 0:
            raise RuntimeError("harvested logical Z row is not +1 purely Z-type")
        logical_z.append(PauliOperator(n, np.zeros(n, dtype=np.uint8), f.copy(), 0))
        z_bits_rows.append(f.copy())

    logical_x: list[PauliOperator] = []
    for q in range(n, 2 * n):
        if table.row_tags[q] == TAG_REPLACED:
            continue
        row = table.rows[q]
        if not span.add(_a_columns(row, n)):
            continue
        logical_x.append(PauliOperator(n, row.x_bits[:n].copy(), row.z_bits[:n].copy(),
                                       row.phase_exp))

    if len(logical_z) != k or len(logical_x) != k:
        raise RuntimeError(
            f"harvest yielded {len(logical_z)} logical Z and {len(logical_x)} "
            f"logical X rows; expected k={k}")

    t = np.zeros((k, k), dtype=np.uint8)
    for i in range(k):
        for j in range(k):
            t[i, j] = symplectic_inner(logical_z[i], logical_x[j])
    if not np.array_equal(t, np.eye(k, dtype=np.uint8)):
        t_inv = BitMatrix.from_dense(t).inverse()
        if t_inv is None:
            raise RuntimeError("logical pairing matrix is singular")
        f_mat = np.array(z_bits_rows, dtype=np.uint8)
        new_f = (t_inv.to_dense() @ f_mat) % 2
        logical_z = [PauliOperator(n, np.zeros(n, dtype=np.uint8),
                                   new_f[i].astype(np.uint8), 0) for i in range(k)]

    return logical_z, logical_x
