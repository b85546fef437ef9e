"""Sign-tracking stabilizer tables over named subsystems.

A table holds Hermitian-signed Pauli rows (phase exponent 0 or 2) over an
ordered list of named subsystems, e.g. ``[("A", 5), ("B", 5)]``.  Qubit 0 of
the register is qubit 1 of the first subsystem.  Measurement follows the
three textbook cases: an observable commuting with every row has a group-
determined outcome; otherwise one anticommuting row is replaced by
``outcome * observable`` and every other anticommuting row is multiplied by
the removed row, which preserves commutativity, independence and ±1 signs.

Row tags are pure metadata ("original-GHZ-ZZ", "original-GHZ-XXX",
"code-stabilizer", "replaced", "updated"); they never enter the algebra but
let downstream code find non-replaced rows.
"""

from __future__ import annotations

import numpy as np

from .binmat import Eliminator, pack_bits, unpack_bits
from .paulis import PauliOperator, multiply, symplectic_inner

TAG_ZZ = "original-GHZ-ZZ"
TAG_XXX = "original-GHZ-XXX"
TAG_CODE = "code-stabilizer"
TAG_REPLACED = "replaced"
TAG_UPDATED = "updated"

_PAULI_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


class StabilizerTable:
    __slots__ = ("subsystems", "rows", "row_tags")

    def __init__(self, subsystems: list[tuple[str, int]],
                 rows: list[PauliOperator],
                 row_tags: list[str] | None = None):
        self.subsystems = list(subsystems)
        self.rows = list(rows)
        self.row_tags = list(row_tags) if row_tags is not None else ["code-stabilizer"] * len(rows)
        if len(self.row_tags) != len(self.rows):
            raise ValueError("row_tags length != rows length")
        total = self.total_qubits
        for r in self.rows:
            if r.num_qubits != total:
                raise ValueError("row qubit count does not match subsystems")

    @property
    def total_qubits(self) -> int:
        return sum(count for _, count in self.subsystems)

    def offset(self, label: str) -> int:
        pos = 0
        for name, count in self.subsystems:
            if name == label:
                return pos
            pos += count
        raise KeyError(f"no subsystem {label!r}")

    def subsystem_size(self, label: str) -> int:
        for name, count in self.subsystems:
            if name == label:
                return count
        raise KeyError(f"no subsystem {label!r}")

    def copy(self) -> "StabilizerTable":
        return StabilizerTable(self.subsystems,
                               [r.copy() for r in self.rows],
                               list(self.row_tags))

    # -- algebra ------------------------------------------------------------

    def validate(self) -> list[str]:
        problems: list[str] = []
        for i, r in enumerate(self.rows):
            if not r.is_hermitian_signed:
                problems.append(f"row {i} has ±i phase")
        for i in range(len(self.rows)):
            for j in range(i + 1, len(self.rows)):
                if symplectic_inner(self.rows[i], self.rows[j]):
                    problems.append(f"rows {i} and {j} anticommute")
        elim = Eliminator(2 * self.total_qubits)
        for i, r in enumerate(self.rows):
            if not elim.add(self._symp_vec(r)):
                problems.append(f"row {i} is GF(2)-dependent on earlier rows")
        return problems

    def _symp_vec(self, p: PauliOperator) -> np.ndarray:
        return pack_bits(np.concatenate([p.x_bits, p.z_bits]), 2 * self.total_qubits)

    def multiply_row(self, i: int, j: int) -> None:
        """rows[i] <- rows[i] * rows[j] (rows commute, so order is cosmetic)."""
        if i == j:
            raise ValueError("row multiplied into itself would become identity")
        self.rows[i] = multiply(self.rows[i], self.rows[j])
        self.row_tags[i] = TAG_UPDATED

    def contains(self, p: PauliOperator):
        """Group membership with sign: +1 if p is in the group, -1 if -p is,
        None if the (x,z) part is outside the row space."""
        if not p.is_hermitian_signed:
            raise ValueError("membership is defined for Hermitian-signed operators")
        elim = Eliminator(2 * self.total_qubits)
        for r in self.rows:
            elim.add(self._symp_vec(r))
        residual, combo = elim.reduce_with_combo(self._symp_vec(p))
        if residual.any():
            return None
        prod = PauliOperator.identity(self.total_qubits)
        # combo is a packed bit-vector over row indices, not an index list.
        for idx in np.nonzero(unpack_bits(combo, len(self.rows)))[0]:
            prod = multiply(prod, self.rows[int(idx)])
        return 1 if prod.phase_exp == p.phase_exp else -1

    def measure(self, observable: PauliOperator, forced: int | None = None,
                rng: np.random.Generator | None = None,
                replace_index: int | None = None) -> int:
        """Measure a Hermitian-signed observable; returns the ±1 outcome and
        updates the table in place.

        By default the first anticommuting row is replaced; replace_index
        overrides that choice (it must name an anticommuting row).  Unforced
        random outcomes require an injected rng.
        """
        if observable.num_qubits != self.total_qubits:
            raise ValueError("observable must be embedded into the full register")
        if not observable.is_hermitian_signed:
            raise ValueError("observable must be Hermitian-signed")
        anti = [i for i, r in enumerate(self.rows) if symplectic_inner(r, observable)]
        if not anti:
            positive = PauliOperator.from_words(observable.num_qubits, observable.xw.copy(),
                                                observable.zw.copy(), 0)
            member = self.contains(positive)
            if member is None:
                raise ValueError("observable commutes with all rows but is not "
                                 "determined by this (rank-deficient) table")
            outcome = member * observable.sign
            if forced is not None and forced != outcome:
                raise ValueError(f"forced outcome {forced} contradicts the "
                                 f"contained stabilizer (outcome {outcome})")
            return outcome
        if replace_index is None:
            target = anti[0]
        else:
            if replace_index not in anti:
                raise ValueError(f"row {replace_index} does not anticommute with the observable")
            target = replace_index
        if forced is not None:
            if forced not in (1, -1):
                raise ValueError("forced outcome must be ±1")
            outcome = forced
        else:
            if rng is None:
                raise ValueError("unforced measurement needs an rng")
            outcome = 1 if rng.integers(0, 2) == 0 else -1
        removed = self.rows[target]
        phase = (observable.phase_exp + (0 if outcome == 1 else 2)) & 3
        self.rows[target] = PauliOperator.from_words(
            observable.num_qubits, observable.xw.copy(), observable.zw.copy(), phase)
        self.row_tags[target] = TAG_REPLACED
        for i in anti:
            if i != target:
                self.rows[i] = multiply(self.rows[i], removed)
                self.row_tags[i] = TAG_UPDATED
        return outcome

    # -- views --------------------------------------------------------------

    def restrict(self, labels: list[str]) -> list[PauliOperator]:
        """Project every row onto the named subsystems; errors if any row has
        support outside them."""
        keep = np.zeros(self.total_qubits, dtype=bool)
        for label in labels:
            off = self.offset(label)
            keep[off: off + self.subsystem_size(label)] = True
        out: list[PauliOperator] = []
        for i, r in enumerate(self.rows):
            x = r.x_bits.astype(bool)
            z = r.z_bits.astype(bool)
            if (x & ~keep).any() or (z & ~keep).any():
                raise ValueError(f"row {i} has support outside {labels}")
            out.append(PauliOperator(int(keep.sum()), x[keep].astype(np.uint8),
                                     z[keep].astype(np.uint8), r.phase_exp))
        return out

    def pretty(self, annotations: list[str] | None = None) -> str:
        """Tabular rendering: sign | X-components | Z-components | Pauli string,
        with bit groups per subsystem (leftmost character = qubit 1)."""
        lines = []
        for i, r in enumerate(self.rows):
            x = r.x_bits
            z = r.z_bits
            xg, zg, pg = [], [], []
            pos = 0
            for _, count in self.subsystems:
                xs = x[pos: pos + count]
                zs = z[pos: pos + count]
                xg.append("".join(str(int(b)) for b in xs))
                zg.append("".join(str(int(b)) for b in zs))
                pg.append("".join(_PAULI_CHAR[(int(a), int(b))] for a, b in zip(xs, zs)))
                pos += count
            sign = "+" if r.phase_exp == 0 else "-"
            annot = ""
            if annotations is not None and annotations[i]:
                annot = f" {annotations[i]}"
            lines.append(f"{sign}1 | {' '.join(xg)} | {' '.join(zg)} | {' '.join(pg)}{annot}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        subs = ",".join(f"{name}:{count}" for name, count in self.subsystems)
        return f"StabilizerTable({subs}, {len(self.rows)} rows)"


def logical_annotations(table: StabilizerTable) -> list[str]:
    """Per-row annotation strings for pretty(): a row whose support touches
    two or more subsystems is a stabilizer of the shared entangled state
    rather than of a single party's code, and gets tagged "(logical)"."""
    out = []
    for r in table.rows:
        touched = 0
        pos = 0
        for _, count in table.subsystems:
            if r.x_bits[pos: pos + count].any() or r.z_bits[pos: pos + count].any():
                touched += 1
            pos += count
        out.append("(logical)" if touched >= 2 else "")
    return out


def measure(table: StabilizerTable, observable: PauliOperator,
            forced_outcome: int | None = None,
            rng: np.random.Generator | None = None,
            replace_index: int | None = None) -> tuple[int, StabilizerTable]:
    """Functional form of StabilizerTable.measure: returns (outcome, table)."""
    outcome = table.measure(observable, forced=forced_outcome, rng=rng,
                            replace_index=replace_index)
    return outcome, table


def bell_table(n: int) -> StabilizerTable:
    """Stabilizer table of n Bell pairs split A/B: X_{A_i}X_{B_i} rows first,
    then Z_{A_i}Z_{B_i}, all +1."""
    if n < 1:
        raise ValueError("need n ≥ 1")
    rows: list[PauliOperator] = []
    tags: list[str] = []
    for i in range(n):
        x = np.zeros(2 * n, dtype=np.uint8)
        x[i] = x[n + i] = 1
        rows.append(PauliOperator(2 * n, x, np.zeros(2 * n, dtype=np.uint8), 0))
        tags.append(TAG_XXX)
    for i in range(n):
        z = np.zeros(2 * n, dtype=np.uint8)
        z[i] = z[n + i] = 1
        rows.append(PauliOperator(2 * n, np.zeros(2 * n, dtype=np.uint8), z, 0))
        tags.append(TAG_ZZ)
    return StabilizerTable([("A", n), ("B", n)], rows, tags)


def party_names(parties: int) -> list[str]:
    base = "ABCDEFGH"
    return [base[t] if t < len(base) else f"P{t + 1}" for t in range(parties)]


def ghz_table(n: int, parties: int) -> StabilizerTable:
    """Stabilizer table of n GHZ states over ``parties`` subsystems: adjacent
    Z_{t,i}Z_{t+1,i} rows grouped by pair, then the n all-X rows, all +1.

    Two parties fall back to the Bell layout (XX rows first)."""
    if n < 1 or parties < 2:
        raise ValueError("need n ≥ 1 and parties ≥ 2")
    if parties == 2:
        return bell_table(n)
    total = n * parties
    rows: list[PauliOperator] = []
    tags: list[str] = []
    for t in range(parties - 1):
        for i in range(n):
            z = np.zeros(total, dtype=np.uint8)
            z[t * n + i] = z[(t + 1) * n + i] = 1
            rows.append(PauliOperator(total, np.zeros(total, dtype=np.uint8), z, 0))
            tags.append(TAG_ZZ)
    for i in range(n):
        x = np.zeros(total, dtype=np.uint8)
        x[i::n] = 1
        rows.append(PauliOperator(total, x, np.zeros(total, dtype=np.uint8), 0))
        tags.append(TAG_XXX)
    labels = party_names(parties)
    return StabilizerTable([(labels[t], n) for t in range(parties)], rows, tags)
