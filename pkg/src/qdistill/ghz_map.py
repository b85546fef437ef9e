"""Induced stabilizers on the remaining parties after A-side measurements.

Measuring a signed stabilizer on the first party of a block-rearranged
GHZ state leaves the other parties in a code whose generators this module
produces: the joint two-party form (sign ε(−1)^{ab^T}, parts E(a,b) ⊗
E(a,0)), its ℓ-party generalization parameterized by a split of the
Z-component, and the always-present adjacent-pair ZZ rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binmat import pack_bits, parity_and, words_for
from .paulis import PauliOperator


@dataclass(frozen=True)
class InducedStabilizer:
    sign: int
    parts: list[tuple[str, PauliOperator]]

    def embedded(self, total_parties: int) -> PauliOperator:
        """Phase-0 operator on ``n * total_parties`` qubits.

        Party 1 (the measured one) is identity; parts fill parties 2..ℓ in
        order.  The sign is reported separately in ``self.sign``.
        """
        n = self.parts[0][1].num_qubits
        total = n * total_parties
        x = np.zeros(total, dtype=np.uint8)
        z = np.zeros(total, dtype=np.uint8)
        for t, (_, op) in enumerate(self.parts, start=1):
            x[t * n:(t + 1) * n] = op.x_bits
            z[t * n:(t + 1) * n] = op.z_bits
        return PauliOperator(total, x, z, 0)


@dataclass(frozen=True)
class BSplit:
    """Z-component split b_1 ⊕ ... ⊕ b_{ℓ-1} = b."""

    pieces: list[np.ndarray]

    @classmethod
    def default(cls, b_bits: np.ndarray, parties: int) -> "BSplit":
        """The (b, 0, ..., 0) split — no cross terms, sign reduces to (−1)^{ab^T}."""
        b = np.asarray(b_bits, dtype=np.uint8)
        pieces = [b.copy()] + [np.zeros_like(b) for _ in range(parties - 2)]
        return cls(pieces)

    def validate(self, b_bits: np.ndarray) -> None:
        acc = np.zeros_like(np.asarray(b_bits, dtype=np.uint8))
        for p in self.pieces:
            acc ^= np.asarray(p, dtype=np.uint8)
        if not np.array_equal(acc, np.asarray(b_bits, dtype=np.uint8)):
            raise ValueError("split pieces do not XOR to the Z-component")


_PARTY_LABELS = "ABCDEFGH"


def party_label(t: int) -> str:
    return _PARTY_LABELS[t] if t < len(_PARTY_LABELS) else f"P{t + 1}"


def induced_bc(stab: PauliOperator, outcome: int) -> InducedStabilizer:
    """Two remaining parties: sign·(−1)^{ab^T} E(a,b)_B ⊗ E(a,0)_C."""
    n = stab.num_qubits
    sgn = stab.sign * (1 if outcome > 0 else -1)
    if parity_and(stab.xw, stab.zw):
        sgn = -sgn
    zero = np.zeros(words_for(n), dtype=np.uint64)
    b_part = PauliOperator.from_words(n, stab.xw.copy(), stab.zw.copy(), 0)
    c_part = PauliOperator.from_words(n, stab.xw.copy(), zero, 0)
    return InducedStabilizer(sgn, [("B", b_part), ("C", c_part)])


def induced_multi(stab: PauliOperator, outcome: int, parties: int,
                  split: BSplit) -> InducedStabilizer:
    """ℓ-party form: sign ε(−1)^{(b + Σ_{i<j} b_i∗b_j) a^T}, parts E(a, b_t)."""
    n = stab.num_qubits
    if len(split.pieces) != parties - 1:
        raise ValueError(f"need {parties - 1} split pieces, got {len(split.pieces)}")
    split.validate(stab.z_bits)
    exponent = parity_and(stab.xw, stab.zw)
    packed = [pack_bits(np.asarray(p, dtype=np.uint8), n) for p in split.pieces]
    for i in range(len(packed)):
        for j in range(i + 1, len(packed)):
            exponent ^= parity_and(stab.xw, packed[i] & packed[j])
    sgn = stab.sign * (1 if outcome > 0 else -1)
    if exponent:
        sgn = -sgn
    parts = []
    for t, pw in enumerate(packed):
        parts.append((party_label(t + 1),
                      PauliOperator.from_words(n, stab.xw.copy(), pw.copy(), 0)))
    return InducedStabilizer(sgn, parts)


def pair_zz_rows(n: int, parties: int) -> list[PauliOperator]:
    """Adjacent-pair Z_{t,i} Z_{t+1,i} rows on the remaining ℓ−1 parties,
    embedded in the full ℓ-party register (party 1 = identity)."""
    total = n * parties
    rows = []
    for t in range(1, parties - 1):
        for i in range(n):
            z = np.zeros(total, dtype=np.uint8)
            z[t * n + i] = 1
            z[(t + 1) * n + i] = 1
            rows.append(PauliOperator(total, np.zeros(total, dtype=np.uint8), z, 0))
    return rows


def induced_code(code, outcomes, parties: int, splits=None):
    """Assemble the [[n(ℓ−1), k]] code on the remaining parties.

    ``code`` is a StabilizerCode measured on party 1 with the given
    per-generator outcomes; ``splits`` maps generator index → BSplit
    (default split used when absent).  Generators are the induced rows
    followed by the n(ℓ−2) adjacent-pair ZZ rows among parties 2..ℓ.
    """
    from .codes import StabilizerCode

    n = code.n
    rest = parties - 1
    total = n * rest
    gens: list[PauliOperator] = []
    for i, g in enumerate(code.generators):
        split = None if splits is None else splits.get(i)
        if split is None:
            split = BSplit.default(g.z_bits, parties)
        ind = induced_multi(g, outcomes[i], parties, split)
        x = np.zeros(total, dtype=np.uint8)
        z = np.zeros(total, dtype=np.uint8)
        for t, (_, op) in enumerate(ind.parts):
            x[t * n:(t + 1) * n] = op.x_bits
            z[t * n:(t + 1) * n] = op.z_bits
        gens.append(PauliOperator(total, x, z, 0 if ind.sign > 0 else 2))
    for t in range(rest - 1):
        for i in range(n):
            z = np.zeros(total, dtype=np.uint8)
            z[t * n + i] = 1
            z[(t + 1) * n + i] = 1
            gens.append(PauliOperator(total, np.zeros(total, dtype=np.uint8), z, 0))
    out = StabilizerCode(n=total, k=code.k, generators=gens,
                         name=f"{code.name}-induced-l{parties}")
    problems = out.validate()
    if problems:
        raise ValueError(f"induced code invalid: {problems}")
    return out
