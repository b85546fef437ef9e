"""Stabilizer and CSS code models, code constructions, and the shipped bundle.

Check matrices for the large lifted-product codes ship as lift-spec data
files (see ``codes_data/``); everything else is constructed in code.  The
bundle manifest records construction provenance and caches logical Pauli
strings so protocol runs don't recompute them.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .binmat import BitMatrix, Eliminator, pack_bits, words_for
from .paulis import PauliOperator, multiply, symplectic_inner

_DATA_DIR = os.path.join(os.path.dirname(__file__), "codes_data")


@dataclass
class StabilizerCode:
    n: int
    k: int
    generators: list[PauliOperator]
    logical_x: list[PauliOperator] | None = None
    logical_z: list[PauliOperator] | None = None
    name: str = ""
    distance: int | None = None

    def validate(self) -> list[str]:
        """Check the stabilizer-code invariants; returns a list of violations."""
        problems: list[str] = []
        if len(self.generators) != self.n - self.k:
            problems.append(f"expected {self.n - self.k} generators, got {len(self.generators)}")
        for g in self.generators:
            if g.num_qubits != self.n:
                problems.append(f"generator {g.label()} acts on {g.num_qubits} != {self.n}")
            if not g.is_hermitian_signed:
                problems.append(f"generator {g.label()} has ±i phase")
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                if symplectic_inner(self.generators[i], self.generators[j]):
                    problems.append(f"generators {i} and {j} anticommute")
        elim = Eliminator(2 * self.n)
        for i, g in enumerate(self.generators):
            if not elim.add(self._symp_vec(g)):
                problems.append(f"generator {i} is GF(2)-dependent on earlier ones")
        if self.logical_x is not None and self.logical_z is not None:
            if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
                problems.append("logical operator count != k")
            for label, ops in (("X", self.logical_x), ("Z", self.logical_z)):
                for j, op in enumerate(ops):
                    for g in self.generators:
                        if symplectic_inner(op, g):
                            problems.append(f"logical {label}{j} anticommutes with a generator")
                    if elim.contains(self._symp_vec(op)):
                        problems.append(f"logical {label}{j} lies in the stabilizer row space")
            for i in range(self.k):
                for j in range(self.k):
                    want = 1 if i == j else 0
                    if symplectic_inner(self.logical_z[i], self.logical_x[j]) != want:
                        problems.append(f"pairing Z{i}/X{j} = {1 - want}, want {want}")
                    if i != j:
                        if symplectic_inner(self.logical_x[i], self.logical_x[j]):
                            problems.append(f"X{i} anticommutes with X{j}")
                        if symplectic_inner(self.logical_z[i], self.logical_z[j]):
                            problems.append(f"Z{i} anticommutes with Z{j}")
        return problems

    def _symp_vec(self, p: PauliOperator) -> np.ndarray:
        return pack_bits(np.concatenate([p.x_bits, p.z_bits]), 2 * self.n)

    @property
    def is_css(self) -> bool:
        return all(not (g.xw.any() and g.zw.any()) for g in self.generators)

    def ensure_logicals(self) -> None:
        """Populate logical_x/logical_z via the measurement-driven generator
        when absent."""
        if self.logical_x is None or self.logical_z is None:
            from .logical_ops import logical_paulis
            lz, lx = logical_paulis(self)
            self.logical_z = lz
            self.logical_x = lx


class CssCode:
    """A CSS code carrying its (possibly redundant) check matrices."""

    def __init__(self, h_x: BitMatrix, h_z: BitMatrix, name: str = "",
                 distance: int | None = None):
        if h_x.cols != h_z.cols:
            raise ValueError("H_X and H_Z column counts differ")
        n = h_x.cols
        product = h_x.matmul(h_z.transpose())
        if product.data.any():
            r, s = np.argwhere(product.to_dense())[0]
            raise ValueError(f"H_X row {r} and H_Z row {s} are not orthogonal")
        self.h_x = h_x
        self.h_z = h_z
        self.rank_x = h_x.rank()
        self.rank_z = h_z.rank()
        self.n = n
        self.k = n - self.rank_x - self.rank_z
        self.name = name
        self.redundant_x = h_x.rows - self.rank_x
        self.redundant_z = h_z.rows - self.rank_z
        gens: list[PauliOperator] = []
        elim = Eliminator(2 * n)
        zeros = np.zeros(words_for(n), dtype=np.uint64)
        for r in range(h_x.rows):
            cand = PauliOperator.from_words(n, h_x.row(r).copy(), zeros.copy(), 0)
            if elim.add(pack_bits(np.concatenate([cand.x_bits, cand.z_bits]), 2 * n)):
                gens.append(cand)
        for r in range(h_z.rows):
            cand = PauliOperator.from_words(n, zeros.copy(), h_z.row(r).copy(), 0)
            if elim.add(pack_bits(np.concatenate([cand.x_bits, cand.z_bits]), 2 * n)):
                gens.append(cand)
        self.code = StabilizerCode(n=n, k=self.k, generators=gens, name=name,
                                   distance=distance)

    @property
    def generators(self) -> list[PauliOperator]:
        return self.code.generators

    def ensure_logicals(self) -> None:
        self.code.ensure_logicals()

    @property
    def logical_x(self):
        return self.code.logical_x

    @property
    def logical_z(self):
        return self.code.logical_z


class TannerGraph:
    """CSR adjacency of checks to variables, row-major deterministic."""

    __slots__ = ("num_checks", "num_vars", "check_ptr", "var_idx")

    def __init__(self, matrix: BitMatrix):
        self.num_checks = matrix.rows
        self.num_vars = matrix.cols
        ptr = np.zeros(matrix.rows + 1, dtype=np.int64)
        idx: list[int] = []
        for r in range(matrix.rows):
            row_bits = np.nonzero(
                np.unpackbits(matrix.row(r).view(np.uint8), bitorder="little")[: matrix.cols]
            )[0]
            idx.extend(int(c) for c in row_bits)
            ptr[r + 1] = len(idx)
        self.check_ptr = ptr
        self.var_idx = np.asarray(idx, dtype=np.int64)

    @property
    def num_edges(self) -> int:
        return int(self.var_idx.size)


def tanner(matrix: BitMatrix) -> TannerGraph:
    return TannerGraph(matrix)


# ---------------------------------------------------------------------------
# file formats


def parse_alist(path: str) -> BitMatrix:
    """Read a standard alist file (first line ``N M``: columns then rows)."""
    with open(path) as f:
        tokens: list[int] = []
        for line in f:
            tokens.extend(int(t) for t in line.split())
    it = iter(tokens)
    n_cols = next(it)
    n_rows = next(it)
    next(it), next(it)  # max degrees, unused
    col_deg = [next(it) for _ in range(n_cols)]
    row_deg = [next(it) for _ in range(n_rows)]
    m = BitMatrix(n_rows, n_cols)
    # column adjacency (1-indexed, zero padding tolerated)
    for c in range(n_cols):
        seen = 0
        while seen < col_deg[c]:
            v = next(it)
            if v == 0:
                continue
            m.set(v - 1, c, 1)
            seen += 1
    # row adjacency is redundant; consume if present and cross-check
    try:
        for r in range(n_rows):
            seen = 0
            while seen < row_deg[r]:
                v = next(it)
                if v == 0:
                    continue
                if m.get(r, v - 1) != 1:
                    raise ValueError(f"alist row/column adjacency disagree at ({r}, {v - 1})")
                seen += 1
    except StopIteration:
        pass
    return m


def write_alist(matrix: BitMatrix, path: str) -> None:
    dense = matrix.to_dense()
    col_deg = dense.sum(axis=0)
    row_deg = dense.sum(axis=1)
    with open(path, "w") as f:
        f.write(f"{matrix.cols} {matrix.rows}\n")
        f.write(f"{int(col_deg.max(initial=0))} {int(row_deg.max(initial=0))}\n")
        f.write(" ".join(str(int(d)) for d in col_deg) + "\n")
        f.write(" ".join(str(int(d)) for d in row_deg) + "\n")
        for c in range(matrix.cols):
            ones = np.nonzero(dense[:, c])[0] + 1
            f.write(" ".join(str(int(r)) for r in ones) + "\n")
        for r in range(matrix.rows):
            ones = np.nonzero(dense[r])[0] + 1
            f.write(" ".join(str(int(c)) for c in ones) + "\n")


def load_alist_pair(path_hx: str, path_hz: str, name: str = "") -> CssCode:
    h_x = parse_alist(path_hx)
    h_z = parse_alist(path_hz)
    return CssCode(h_x, h_z, name=name or os.path.basename(path_hx))


def parse_liftspec(path: str) -> tuple[int, np.ndarray, np.ndarray]:
    """Lift-spec: first line L, then exponent rows for base A, blank line,
    exponent rows for base B (−1 marks a zero block)."""
    with open(path) as f:
        lines = [ln.rstrip("\n") for ln in f]
    lines = [ln for ln in lines if not ln.lstrip().startswith("#")]
    L = int(lines[0].split()[0])
    rows_a: list[list[int]] = []
    rows_b: list[list[int]] = []
    target = rows_a
    for ln in lines[1:]:
        if not ln.strip():
            if rows_a:
                target = rows_b
            continue
        target.append([int(t) for t in ln.split()])
    return L, np.asarray(rows_a, dtype=np.int64), np.asarray(rows_b, dtype=np.int64)


def write_liftspec(path: str, L: int, base_a: np.ndarray, base_b: np.ndarray,
                   header: str | None = None) -> None:
    with open(path, "w") as f:
        if header:
            for ln in header.splitlines():
                f.write(f"# {ln}\n")
        f.write(f"{L}\n")
        for row in np.asarray(base_a):
            f.write(" ".join(str(int(e)) for e in row) + "\n")
        f.write("\n")
        for row in np.asarray(base_b):
            f.write(" ".join(str(int(e)) for e in row) + "\n")


# ---------------------------------------------------------------------------
# constructions


def _lift_entry(dense: np.ndarray, row0: int, col0: int, exponent: int, L: int,
                transpose: bool = False) -> None:
    """OR the L×L circulant ``x^exponent`` (or its transpose) into ``dense``."""
    if exponent < 0:
        return
    e = (-exponent) % L if transpose else exponent % L
    rr = np.arange(L)
    dense[row0 + rr, col0 + (rr + e) % L] ^= 1


def lifted_product(base_a: np.ndarray, base_b: np.ndarray, L: int,
                   name: str = "", distance: int | None = None) -> CssCode:
    """Lifted product of two circulant-exponent base matrices.

    Entry e ≥ 0 is the circulant x^e over Z_L; −1 is a zero block.  Left
    qubit block is indexed by (column of A, column of B), right block by
    (row of A, row of B).  X-checks are indexed by (row of A, column of B),
    Z-checks by (column of A, row of B); orthogonality holds because
    circulants commute.
    """
    if L < 1:
        raise ValueError("lift size must be ≥ 1")
    base_a = np.asarray(base_a, dtype=np.int64)
    base_b = np.asarray(base_b, dtype=np.int64)
    ma, na = base_a.shape
    mb, nb = base_b.shape
    n_left = na * nb * L
    n_right = ma * mb * L
    n = n_left + n_right
    hx = np.zeros((ma * nb * L, n), dtype=np.uint8)
    hz = np.zeros((na * mb * L, n), dtype=np.uint8)
    for i in range(ma):
        for j in range(nb):
            r0 = (i * nb + j) * L
            for s in range(na):
                _lift_entry(hx, r0, (s * nb + j) * L, base_a[i, s], L)
            for t in range(mb):
                _lift_entry(hx, r0, n_left + (i * mb + t) * L, base_b[t, j], L, transpose=True)
    for s in range(na):
        for t in range(mb):
            r0 = (s * mb + t) * L
            for j in range(nb):
                _lift_entry(hz, r0, (s * nb + j) * L, base_b[t, j], L)
            for i in range(ma):
                _lift_entry(hz, r0, n_left + (i * mb + t) * L, base_a[i, s], L, transpose=True)
    return CssCode(BitMatrix.from_dense(hx), BitMatrix.from_dense(hz),
                   name=name or f"lp_{n}", distance=distance)


def hypergraph_product(h1: np.ndarray, h2: np.ndarray, name: str = "",
                       distance: int | None = None) -> CssCode:
    """Hypergraph product = lifted product with trivial lift (L = 1)."""
    h1 = np.asarray(h1, dtype=np.uint8)
    h2 = np.asarray(h2, dtype=np.uint8)
    exp1 = np.where(h1 != 0, 0, -1).astype(np.int64)
    exp2 = np.where(h2 != 0, 0, -1).astype(np.int64)
    return lifted_product(exp1, exp2, 1, name=name, distance=distance)


# ---------------------------------------------------------------------------
# bundle

HAMMING_74 = np.array([
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 0, 0, 1, 1],
    [1, 0, 1, 0, 1, 0, 1],
], dtype=np.uint8)

REP3 = np.array([
    [1, 1, 0],
    [0, 1, 1],
], dtype=np.uint8)

_BUNDLE_CACHE: dict[str, object] = {}


def _manifest() -> dict:
    path = os.path.join(_DATA_DIR, "manifest.json")
    if os.path.exists(path):
        with open(path) as f:
            return json.load(f)
    return {}


def _attach_cached_logicals(code: StabilizerCode, entry: dict | None) -> None:
    if not entry:
        return
    lx = entry.get("logical_x")
    lz = entry.get("logical_z")
    if lx and lz:
        code.logical_x = [PauliOperator.from_label(s) for s in lx]
        code.logical_z = [PauliOperator.from_label(s) for s in lz]


def _build(name: str):
    manifest = _manifest().get("codes", {})
    entry = manifest.get(name)
    if name == "bitflip3":
        gens = [PauliOperator.from_label("+ZZI"), PauliOperator.from_label("+IZZ")]
        code = StabilizerCode(n=3, k=1, generators=gens, name=name, distance=1)
    elif name == "yy3":
        gens = [PauliOperator.from_label("+YYI"), PauliOperator.from_label("+IYY")]
        code = StabilizerCode(n=3, k=1, generators=gens, name=name, distance=1)
    elif name == "five_qubit":
        gens = [PauliOperator.from_label("+" + s)
                for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")]
        code = StabilizerCode(n=5, k=1, generators=gens, name=name, distance=3)
    elif name == "steane":
        css = CssCode(BitMatrix.from_dense(HAMMING_74), BitMatrix.from_dense(HAMMING_74),
                      name=name, distance=3)
        _attach_cached_logicals(css.code, entry)
        return css
    elif name == "hgp_small":
        css = hypergraph_product(HAMMING_74, REP3, name=name, distance=3)
        _attach_cached_logicals(css.code, entry)
        return css
    elif name.startswith("lp118_"):
        path = os.path.join(_DATA_DIR, f"{name}.liftspec")
        if not os.path.exists(path):
            raise KeyError(f"no lift-spec file for {name!r} at {path}")
        L, base_a, base_b = parse_liftspec(path)
        dist = {"lp118_544": 12, "lp118_714": 16, "lp118_1020": 20}.get(name)
        css = lifted_product(base_a, base_b, L, name=name, distance=dist)
        _attach_cached_logicals(css.code, entry)
        return css
    else:
        raise KeyError(f"unknown bundle code {name!r}")
    _attach_cached_logicals(code, entry)
    return code


def bundle_names() -> list[str]:
    names = ["bitflip3", "yy3", "five_qubit", "steane", "hgp_small"]
    for big in ("lp118_544", "lp118_714", "lp118_1020"):
        if os.path.exists(os.path.join(_DATA_DIR, f"{big}.liftspec")):
            names.append(big)
    return names


def get_code(name: str):
    if name not in _BUNDLE_CACHE:
        _BUNDLE_CACHE[name] = _build(name)
    return _BUNDLE_CACHE[name]
