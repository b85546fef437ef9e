"""I.i.d. single-qubit depolarizing error sampling (code-capacity model).

One uniform draw per qubit, binned into X / Y / Z with probability p/3 each;
a Y error sets both the x and z bit of the qubit.  Sampling returns packed
bit words so protocol hot loops can stay in word arithmetic.
"""

from __future__ import annotations

import numpy as np

from .binmat import pack_bits
from .paulis import PauliOperator


class DepolarizingChannel:
    __slots__ = ("p",)

    def __init__(self, p: float):
        if not 0.0 <= p <= 1.0:
            raise ValueError("p must be in [0, 1]")
        self.p = float(p)

    def sample_bits(self, n: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        """Packed (x_words, z_words) of one error draw on n qubits."""
        u = rng.random(n)
        x = u < (2.0 * self.p / 3.0)
        z = (u >= self.p / 3.0) & (u < self.p)
        return pack_bits(x.astype(np.uint8), n), pack_bits(z.astype(np.uint8), n)

    def sample(self, n: int, rng: np.random.Generator) -> PauliOperator:
        xw, zw = self.sample_bits(n, rng)
        return PauliOperator.from_words(n, xw, zw, 0)

    def marginal_flip_probability(self) -> float:
        """Probability a qubit carries an X component (equally, a Z component):
        2p/3.  This is the per-half channel prior handed to CSS decoding."""
        return 2.0 * self.p / 3.0

    def __repr__(self) -> str:
        return f"DepolarizingChannel(p={self.p})"


def fidelity_of_input(p: float) -> float:
    """Input fidelity of a GHZ triple whose two transmitted qubits each went
    through depolarizing(p): (1-p)^2."""
    return (1.0 - p) ** 2
