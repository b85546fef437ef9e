"""Bit-packed GF(2) vectors and matrices.

Conventions used across the package:

* A length-``n`` bit vector is stored as little-endian ``uint64`` words:
  bit ``i`` lives in word ``i >> 6`` at position ``i & 63``.  Bit index 0
  is qubit 1, i.e. the leftmost tensor factor of a printed operator.
* All arithmetic is mod 2.  Row operations are word-wide XORs; elimination
  never copies single bits.
* Unused tail bits of the last word are kept at zero.  Helpers that could
  produce tail garbage mask it off before returning.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

WORD_BITS = 64


def words_for(nbits: int) -> int:
    """Number of uint64 words needed to hold ``nbits`` bits."""
    return (nbits + WORD_BITS - 1) >> 6


def tail_mask(nbits: int) -> np.ndarray:
    """All-ones mask for ``nbits`` bits, packed."""
    nw = words_for(nbits)
    out = np.full(nw, ~np.uint64(0), dtype=np.uint64)
    rem = nbits & 63
    if rem and nw:
        out[-1] = (np.uint64(1) << np.uint64(rem)) - np.uint64(1)
    return out


def pack_bits(bits: Iterable[int], nbits: int | None = None) -> np.ndarray:
    """Pack an iterable of 0/1 ints into uint64 words."""
    arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits,
                     dtype=np.uint8).ravel()
    if nbits is None:
        nbits = arr.size
    if arr.size != nbits:
        raise ValueError(f"expected {nbits} bits, got {arr.size}")
    out = np.zeros(words_for(nbits), dtype=np.uint64)
    idx = np.nonzero(arr)[0]
    np.bitwise_or.at(out, idx >> 6, np.uint64(1) << (idx.astype(np.uint64) & np.uint64(63)))
    return out


def unpack_bits(words: np.ndarray, nbits: int) -> np.ndarray:
    """Unpack uint64 words into a uint8 array of 0/1 of length ``nbits``."""
    if nbits == 0:
        return np.zeros(0, dtype=np.uint8)
    idx = np.arange(nbits)
    return ((words[idx >> 6] >> (idx.astype(np.uint64) & np.uint64(63))) & np.uint64(1)).astype(np.uint8)


def popcount(words: np.ndarray) -> int:
    """Total number of set bits."""
    return int(np.bitwise_count(words).sum())


def parity(words: np.ndarray) -> int:
    """Parity (mod-2 popcount) of the packed vector."""
    return popcount(words) & 1


def parity_and(u: np.ndarray, v: np.ndarray) -> int:
    """Parity of the AND of two packed vectors: ``u·v^T mod 2``."""
    return int(np.bitwise_count(u & v).sum()) & 1


def get_bit(words: np.ndarray, i: int) -> int:
    return int((words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))


def set_bit(words: np.ndarray, i: int, value: int) -> None:
    mask = np.uint64(1) << np.uint64(i & 63)
    if value:
        words[i >> 6] |= mask
    else:
        words[i >> 6] &= ~mask


def flip_bit(words: np.ndarray, i: int) -> None:
    words[i >> 6] ^= np.uint64(1) << np.uint64(i & 63)


class BitMatrix:
    """Dense-over-words GF(2) matrix; ``data[r]`` is row ``r`` packed."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        self.rows = rows
        self.cols = cols
        nw = words_for(cols)
        if data is None:
            data = np.zeros((rows, nw), dtype=np.uint64)
        else:
            data = np.asarray(data, dtype=np.uint64)
            if data.shape != (rows, nw):
                raise ValueError(f"data shape {data.shape} != ({rows}, {nw})")
        self.data = data

    # -- construction -------------------------------------------------

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[int]] | np.ndarray) -> "BitMatrix":
        dense = np.asarray(dense, dtype=np.uint8) % 2
        if dense.ndim != 2:
            raise ValueError("need a 2-D array")
        rows, cols = dense.shape
        m = cls(rows, cols)
        for r in range(rows):
            m.data[r] = pack_bits(dense[r], cols)
        return m

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        m = cls(n, n)
        for i in range(n):
            set_bit(m.data[i], i, 1)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[np.ndarray], cols: int) -> "BitMatrix":
        m = cls(len(rows), cols)
        for r, w in enumerate(rows):
            m.data[r] = w
        return m

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.data.copy())

    # -- element access ------------------------------------------------

    def get(self, r: int, c: int) -> int:
        return get_bit(self.data[r], c)

    def set(self, r: int, c: int, v: int) -> None:
        set_bit(self.data[r], c, v)

    def row(self, r: int) -> np.ndarray:
        return self.data[r]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r in range(self.rows):
            out[r] = unpack_bits(self.data[r], self.cols)
        return out

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, BitMatrix) and self.rows == other.rows
                and self.cols == other.cols and bool(np.array_equal(self.data, other.data)))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"

    # -- algebra ---------------------------------------------------------

    def transpose(self) -> "BitMatrix":
        dense = self.to_dense()
        return BitMatrix.from_dense(dense.T)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        """GF(2) product ``self @ other``."""
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out = BitMatrix(self.rows, other.cols)
        for r in range(self.rows):
            acc = out.data[r]
            row = self.data[r]
            for j in range(self.cols):
                if (row[j >> 6] >> np.uint64(j & 63)) & np.uint64(1):
                    acc ^= other.data[j]
        return out

    def mul_vec(self, v: np.ndarray) -> np.ndarray:
        """``self @ v`` for a packed column vector ``v`` (length cols); returns packed length-rows vector."""
        out = np.zeros(words_for(self.rows), dtype=np.uint64)
        for r in range(self.rows):
            if parity_and(self.data[r], v):
                flip_bit(out, r)
        return out

    def vec_mul(self, v: np.ndarray) -> np.ndarray:
        """``v @ self`` for a packed row vector ``v`` (length rows); returns packed length-cols vector."""
        acc = np.zeros(words_for(self.cols), dtype=np.uint64)
        for r in range(self.rows):
            if get_bit(v, r):
                acc ^= self.data[r]
        return acc

    # -- elimination -------------------------------------------------------

    def rref(self) -> tuple["BitMatrix", list[int], "BitMatrix"]:
        """Reduced row echelon form.

        Returns ``(R, pivot_cols, T)`` where ``T @ self == R`` over GF(2),
        ``T`` is rows x rows, and ``pivot_cols[i]`` is the pivot column of
        row ``i`` of ``R``.
        """
        R = self.copy()
        T = BitMatrix.identity(self.rows)
        pivots: list[int] = []
        pr = 0
        for c in range(self.cols):
            if pr >= self.rows:
                break
            sel = -1
            for r in range(pr, self.rows):
                if R.get(r, c):
                    sel = r
                    break
            if sel < 0:
                continue
            if sel != pr:
                R.data[[pr, sel]] = R.data[[sel, pr]]
                T.data[[pr, sel]] = T.data[[sel, pr]]
            for r in range(self.rows):
                if r != pr and R.get(r, c):
                    R.data[r] ^= R.data[pr]
                    T.data[r] ^= T.data[pr]
            pivots.append(c)
            pr += 1
        return R, pivots, T

    def rank(self) -> int:
        return len(self.rref()[1])

    def right_nullspace(self) -> list[np.ndarray]:
        """Basis (packed vectors, length cols) of ``{x : self @ x = 0}``."""
        R, pivots, _ = self.rref()
        pivset = set(pivots)
        free = [c for c in range(self.cols) if c not in pivset]
        basis = []
        for f in free:
            v = np.zeros(words_for(self.cols), dtype=np.uint64)
            set_bit(v, f, 1)
            for i, pc in enumerate(pivots):
                if R.get(i, f):
                    set_bit(v, pc, 1)
            basis.append(v)
        return basis

    def solve_right(self, rhs: np.ndarray) -> np.ndarray | None:
        """Some packed ``x`` (length cols) with ``self @ x = rhs`` (packed, length rows), or None."""
        R, pivots, T = self.rref()
        b = T.mul_vec_right(rhs)
        x = np.zeros(words_for(self.cols), dtype=np.uint64)
        for i, pc in enumerate(pivots):
            if get_bit(b, i):
                set_bit(x, pc, 1)
        # rows of R beyond the pivot count are zero; rhs must vanish there
        for r in range(len(pivots), self.rows):
            if get_bit(b, r):
                return None
        # verify (guards against non-rref corner cases)
        if not np.array_equal(self.mul_vec(x), rhs & tail_mask(self.rows)):
            return None
        return x

    def mul_vec_right(self, v: np.ndarray) -> np.ndarray:
        """Alias of mul_vec for readability in solve paths."""
        return self.mul_vec(v)

    def inverse(self) -> "BitMatrix | None":
        """GF(2) inverse for square full-rank matrices, else None."""
        if self.rows != self.cols:
            return None
        R, pivots, T = self.rref()
        if len(pivots) != self.rows:
            return None
        return T


def solve_gf2(a: BitMatrix, rhs: np.ndarray | Sequence[int]) -> np.ndarray | None:
    """Solve ``x @ a = rhs`` over GF(2).

    ``rhs`` may be packed (uint64) or a plain 0/1 sequence of length
    ``a.cols``.  Returns a packed row vector of length ``a.rows`` or None
    when the system is inconsistent.  Use :meth:`BitMatrix.rank` and
    :meth:`BitMatrix.right_nullspace` on ``a.transpose()`` for the solution
    space structure.
    """
    if not isinstance(rhs, np.ndarray) or rhs.dtype != np.uint64:
        rhs = pack_bits(rhs, a.cols)
    return a.transpose().solve_right(rhs)


class Eliminator:
    """Incremental GF(2) row space with membership and combination tracking.

    ``add`` absorbs a vector and reports whether it enlarged the span.
    ``reduce`` returns the residual after eliminating against the basis,
    plus (optionally) which of the previously *added* vectors combine to
    the eliminated part.  Used for independence bookkeeping while
    harvesting logical operators and for residual-in-rowspace
    classification.
    """

    __slots__ = ("cols", "_basis", "_pivot", "_combo", "_nadded")

    def __init__(self, cols: int):
        self.cols = cols
        self._basis: list[np.ndarray] = []
        self._pivot: list[int] = []
        self._combo: list[np.ndarray] = []
        self._nadded = 0

    def _reduce(self, v: np.ndarray, combo: np.ndarray | None) -> np.ndarray:
        v = v.copy()
        for b, p, c in zip(self._basis, self._pivot, self._combo):
            if get_bit(v, p):
                v ^= b
                if combo is not None:
                    combo[: c.size] ^= c
        return v

    @staticmethod
    def _lowest_set(v: np.ndarray) -> int:
        for w in range(v.size):
            word = int(v[w])
            if word:
                return (w << 6) + (word & -word).bit_length() - 1
        return -1

    def add(self, v: np.ndarray) -> bool:
        """Absorb ``v``; True iff it was independent of the current span."""
        idx = self._nadded
        self._nadded += 1
        combo = np.zeros(words_for(max(idx + 1, 1)), dtype=np.uint64)
        set_bit(combo, idx, 1)
        red = self._reduce(v, combo)
        p = self._lowest_set(red)
        if p < 0:
            return False
        self._basis.append(red)
        self._pivot.append(p)
        self._combo.append(combo)
        return True

    def contains(self, v: np.ndarray) -> bool:
        return self._lowest_set(self._reduce(v, None)) < 0

    def reduce_with_combo(self, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(residual, combo over added vectors).  residual==0 iff in span."""
        combo = np.zeros(words_for(max(self._nadded, 1)), dtype=np.uint64)
        red = self._reduce(v, combo)
        return red, combo

    @property
    def rank(self) -> int:
        return len(self._basis)
