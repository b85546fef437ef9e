"""Hermitian Pauli operators in binary-symplectic form with mod-4 phases.

An operator is ``i^phase_exp · E(a, b)`` where ``E(a, b) = i^{a·b^T} X^a Z^b``
is the Hermitian representative of its (a, b) class.  The per-qubit factor
of ``E`` is therefore I, X, Z, or Y (never iXZ).  ``a`` is the X-component,
``b`` the Z-component; bit 0 is qubit 1 = the leftmost printed factor.

Products stay exact: the mod-4 phase of ``E(a,b)·E(c,d)`` decomposes per
qubit, and each of the nine non-identity factor pairs contributes 0, 1, or 3
(mod 4).  The contribution is +1 exactly for the pairs ZX, XY, YZ and +3 for
XZ, YX, ZY, which the packed implementation evaluates as two bitwise masks:

    one   = (~a & b & c & ~d) | (a & ~b & c & d) | (a & b & ~c & d)
    three = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d)

Every minterm above contains at least one un-negated operand, so tail bits
beyond ``num_qubits`` (always zero) contribute nothing.

Stabilizer rows are "Hermitian-signed": phase_exp in {0, 2}, i.e. sign ±1.
Products of commuting Hermitian-signed operators stay Hermitian-signed;
anticommuting ones pass through ±i, which is why the phase is mod 4.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .binmat import (
    get_bit,
    pack_bits,
    parity_and,
    popcount,
    set_bit,
    unpack_bits,
    words_for,
)

_LABEL_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_LABEL = {v: k for k, v in _LABEL_TO_BITS.items()}


class PauliOperator:
    """``i^phase_exp · E(x_bits, z_bits)`` on ``num_qubits`` qubits."""

    __slots__ = ("num_qubits", "xw", "zw", "phase_exp")

    def __init__(self, num_qubits: int, x_bits, z_bits, phase_exp: int = 0):
        self.num_qubits = int(num_qubits)
        self.xw = self._coerce(x_bits, self.num_qubits)
        self.zw = self._coerce(z_bits, self.num_qubits)
        self.phase_exp = int(phase_exp) & 3

    @staticmethod
    def _coerce(bits, n: int) -> np.ndarray:
        if isinstance(bits, np.ndarray) and bits.dtype == np.uint64:
            if bits.size != words_for(n):
                raise ValueError("packed word count mismatch")
            return bits.copy()
        return pack_bits(bits, n)

    @classmethod
    def from_words(cls, n: int, xw: np.ndarray, zw: np.ndarray, phase_exp: int = 0) -> "PauliOperator":
        p = cls.__new__(cls)
        p.num_qubits = n
        p.xw = xw
        p.zw = zw
        p.phase_exp = phase_exp & 3
        return p

    @classmethod
    def identity(cls, n: int) -> "PauliOperator":
        nw = words_for(n)
        return cls.from_words(n, np.zeros(nw, dtype=np.uint64), np.zeros(nw, dtype=np.uint64))

    @classmethod
    def from_label(cls, label: str) -> "PauliOperator":
        """Parse e.g. ``"+XZZXI"``, ``"-YYI"``, ``"ZZ"``, ``"+iXY"``."""
        s = label.strip()
        phase = 0
        if s.startswith(("+i", "-i")):
            phase = 1 if s[0] == "+" else 3
            s = s[2:]
        elif s.startswith("+"):
            s = s[1:]
        elif s.startswith("-"):
            phase = 2
            s = s[1:]
        n = len(s)
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for i, ch in enumerate(s.upper()):
            try:
                x[i], z[i] = _LABEL_TO_BITS[ch]
            except KeyError:
                raise ValueError(f"bad Pauli letter {ch!r} in {label!r}") from None
        return cls(n, x, z, phase)

    # -- views ---------------------------------------------------------

    @property
    def x_bits(self) -> np.ndarray:
        return unpack_bits(self.xw, self.num_qubits)

    @property
    def z_bits(self) -> np.ndarray:
        return unpack_bits(self.zw, self.num_qubits)

    @property
    def is_hermitian_signed(self) -> bool:
        return self.phase_exp in (0, 2)

    @property
    def sign(self) -> int:
        """+1 or -1; raises for ±i phases."""
        if self.phase_exp == 0:
            return 1
        if self.phase_exp == 2:
            return -1
        raise ValueError(f"phase_exp {self.phase_exp} is not a ±1 sign")

    def weight(self) -> int:
        return popcount(self.xw | self.zw)

    def is_identity_bits(self) -> bool:
        return not (self.xw.any() or self.zw.any())

    def label(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase_exp]
        x, z = self.x_bits, self.z_bits
        return prefix + "".join(_BITS_TO_LABEL[(int(x[i]), int(z[i]))] for i in range(self.num_qubits))

    def __repr__(self) -> str:
        return f"PauliOperator({self.label()!r})"

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, PauliOperator)
                and self.num_qubits == other.num_qubits
                and self.phase_exp == other.phase_exp
                and bool(np.array_equal(self.xw, other.xw))
                and bool(np.array_equal(self.zw, other.zw)))

    def __hash__(self) -> int:
        return hash((self.num_qubits, self.phase_exp, self.xw.tobytes(), self.zw.tobytes()))

    def copy(self) -> "PauliOperator":
        return PauliOperator.from_words(self.num_qubits, self.xw.copy(), self.zw.copy(), self.phase_exp)

    # -- placement -------------------------------------------------------

    def embed(self, total_qubits: int, offset: int) -> "PauliOperator":
        """Place this operator at qubit ``offset`` of a larger register."""
        if offset < 0 or offset + self.num_qubits > total_qubits:
            raise ValueError("embed window out of range")
        x = np.zeros(total_qubits, dtype=np.uint8)
        z = np.zeros(total_qubits, dtype=np.uint8)
        x[offset:offset + self.num_qubits] = self.x_bits
        z[offset:offset + self.num_qubits] = self.z_bits
        return PauliOperator(total_qubits, x, z, self.phase_exp)

    def tensor(self, other: "PauliOperator") -> "PauliOperator":
        n = self.num_qubits + other.num_qubits
        x = np.concatenate([self.x_bits, other.x_bits])
        z = np.concatenate([self.z_bits, other.z_bits])
        return PauliOperator(n, x, z, (self.phase_exp + other.phase_exp) & 3)

    def restrict(self, start: int, count: int) -> "PauliOperator":
        """Slice qubits [start, start+count); phase carried as-is."""
        x = self.x_bits[start:start + count]
        z = self.z_bits[start:start + count]
        return PauliOperator(count, x, z, self.phase_exp)

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        return multiply(self, other)


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product ``p · q`` with the mod-4 phase of the E convention."""
    if p.num_qubits != q.num_qubits:
        raise ValueError("qubit count mismatch")
    a, b, c, d = p.xw, p.zw, q.xw, q.zw
    one = (~a & b & c & ~d) | (a & ~b & c & d) | (a & b & ~c & d)
    three = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d)
    phase = (p.phase_exp + q.phase_exp + popcount(one) + 3 * popcount(three)) & 3
    return PauliOperator.from_words(p.num_qubits, a ^ c, b ^ d, phase)


def symplectic_inner(p: PauliOperator, q: PauliOperator) -> int:
    """``a·d^T + b·c^T mod 2``; 0 iff the operators commute."""
    if p.num_qubits != q.num_qubits:
        raise ValueError("qubit count mismatch")
    return parity_and(p.xw, q.zw) ^ parity_and(p.zw, q.xw)


def transpose(p: PauliOperator) -> PauliOperator:
    """``E(a,b)^T = (-1)^{a·b^T} E(a,b)``; phase conjugation handled mod 4."""
    # (i^k E)^T = i^k E^T when k even; for odd k the transpose of the
    # i-multiple is handled the same way because transposition does not
    # conjugate scalars.
    flip = parity_and(p.xw, p.zw)
    return PauliOperator.from_words(p.num_qubits, p.xw.copy(), p.zw.copy(),
                                    (p.phase_exp + 2 * flip) & 3)


def sym_bits(xw1: np.ndarray, zw1: np.ndarray, xw2: np.ndarray, zw2: np.ndarray) -> int:
    """Symplectic inner product on raw packed words (hot-path helper)."""
    return parity_and(xw1, zw2) ^ parity_and(zw1, xw2)


def single_qubit(n: int, qubit: int, kind: str, sign: int = 1) -> PauliOperator:
    """``kind`` in {X, Y, Z} placed on ``qubit`` (0-based) of ``n``."""
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    xv, zv = _LABEL_TO_BITS[kind]
    x[qubit], z[qubit] = xv, zv
    return PauliOperator(n, x, z, 0 if sign > 0 else 2)


def from_xz_arrays(x: Sequence[int] | np.ndarray, z: Sequence[int] | np.ndarray,
                   sign: int = 1) -> PauliOperator:
    x = np.asarray(x, dtype=np.uint8)
    return PauliOperator(len(x), x, z, 0 if sign > 0 else 2)
