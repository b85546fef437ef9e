"""Syndrome decoders: normalized min-sum for QLDPC codes and exhaustive
minimal-weight decoding for small codes.

The min-sum decoder follows the check-serial (layered) schedule by default:
checks are processed one at a time in row order of the ingested matrix, each
immediately updating the variable totals.  Messages are normalized (factor
0.8 by default), magnitudes clipped at ±64, and the hard decision is tested
against the syndrome after every full sweep; hitting the sweep budget is a
heralded failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .binmat import pack_bits
from .codes import CssCode, StabilizerCode, TannerGraph, tanner
from .paulis import PauliOperator, sym_bits

CONVERGED = "converged"
HERALDED_FAILURE = "heralded_failure"


@dataclass
class MsaConfig:
    normalization: float = 0.8
    max_iters: int = 100
    schedule: str = "sequential"
    channel_prior: float | np.ndarray | None = None

    def __post_init__(self):
        if not 0.0 < self.normalization <= 1.0:
            raise ValueError("normalization must be in (0, 1]")
        if self.max_iters < 1:
            raise ValueError("max_iters must be ≥ 1")
        if self.schedule not in ("sequential", "flooding"):
            raise ValueError(f"unknown schedule {self.schedule!r}")


@dataclass
class DecodeResult:
    estimate: np.ndarray
    status: str
    iterations: int

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


class _Buffers:
    """Per-graph reusable message buffers (one decode call at a time each)."""

    __slots__ = ("gamma", "msg", "scratch", "est", "synd")

    def __init__(self, graph: TannerGraph):
        self.gamma = np.zeros(graph.num_vars, dtype=np.float64)
        self.msg = np.zeros(graph.num_edges, dtype=np.float64)
        self.scratch = np.zeros(graph.num_edges, dtype=np.float64)
        self.est = np.zeros(graph.num_vars, dtype=np.uint8)
        self.synd = np.zeros(graph.num_checks, dtype=np.uint8)


def _prior_llr(cfg: MsaConfig, num_vars: int) -> np.ndarray:
    q = cfg.channel_prior
    if q is None:
        raise ValueError("MsaConfig.channel_prior must be set for decoding")
    q = np.asarray(q, dtype=np.float64)
    if q.ndim == 0:
        q = np.full(num_vars, float(q))
    if q.shape != (num_vars,):
        raise ValueError("channel_prior shape mismatch")
    if (q <= 0).any() or (q >= 1).any():
        raise ValueError("channel_prior must lie strictly inside (0, 1)")
    return np.clip(np.log((1.0 - q) / q), -_kernels.CLIP, _kernels.CLIP)


def msa_decode(graph: TannerGraph, syndrome, cfg: MsaConfig,
               buffers: _Buffers | None = None) -> DecodeResult:
    synd = np.asarray(syndrome, dtype=np.uint8)
    if synd.shape != (graph.num_checks,):
        raise ValueError(f"syndrome length {synd.shape} != check count {graph.num_checks}")
    buf = buffers if buffers is not None else _Buffers(graph)
    gamma0 = _prior_llr(cfg, graph.num_vars)
    converged, iters = _kernels.decode_loop(
        graph.check_ptr, graph.var_idx, synd,
        float(cfg.normalization), int(cfg.max_iters),
        cfg.schedule == "sequential",
        gamma0, buf.gamma, buf.msg, buf.scratch, buf.est)
    estimate = buf.est.copy()
    if converged:
        # cheap in-code guarantee: a converged estimate explains the syndrome
        assert _kernels.syndrome_matches(graph.check_ptr, graph.var_idx, estimate, synd)
        return DecodeResult(estimate, CONVERGED, int(iters))
    return DecodeResult(estimate, HERALDED_FAILURE, int(iters))


@dataclass
class CssDecodeResult:
    x_estimate: np.ndarray
    z_estimate: np.ndarray
    status: str
    iterations: int  # total sweeps spent across both halves

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


class CssDecoder:
    """MSA decoding of a CSS code's two halves with shared buffers.

    X-type errors flip H_Z checks, so they are decoded on H_Z's graph, and
    vice versa.  The per-half channel prior is the depolarizing marginal
    2p/3 unless the config pins something else.
    """

    def __init__(self, code: CssCode, cfg: MsaConfig | None = None):
        self.code = code
        self.cfg = cfg if cfg is not None else MsaConfig()
        self.graph_hz = tanner(code.h_z)
        self.graph_hx = tanner(code.h_x)
        self._buf_hz = _Buffers(self.graph_hz)
        self._buf_hx = _Buffers(self.graph_hx)

    def decode(self, synd_hx, synd_hz, p: float) -> CssDecodeResult:
        cfg = self.cfg
        if cfg.channel_prior is None:
            # depolarizing marginal per half; clamped so p=0 stays decodable
            # (the prior LLR is clipped to the working range regardless)
            prior = max(2.0 * p / 3.0, 1e-12)
            cfg = MsaConfig(cfg.normalization, cfg.max_iters, cfg.schedule, prior)
        res_x = msa_decode(self.graph_hz, synd_hz, cfg, self._buf_hz)
        res_z = msa_decode(self.graph_hx, synd_hx, cfg, self._buf_hx)
        status = CONVERGED if (res_x.converged and res_z.converged) else HERALDED_FAILURE
        return CssDecodeResult(res_x.estimate, res_z.estimate, status,
                               res_x.iterations + res_z.iterations)


def css_decode(code: CssCode, synd_x_checks, synd_z_checks, p: float,
               cfg: MsaConfig | None = None) -> CssDecodeResult:
    """One-shot CSS decode; synd_x_checks are the H_X-row syndrome bits
    (which constrain the Z-error estimate), synd_z_checks the H_Z ones."""
    return CssDecoder(code, cfg).decode(synd_x_checks, synd_z_checks, p)


# ---------------------------------------------------------------------------
# exhaustive minimal-weight decoding


def _weight_w_paulis(n: int, w: int):
    """All weight-w (x,z) bit-vector pairs, lexicographic on (x_bits, z_bits)."""
    out = []
    for support in itertools.combinations(range(n), w):
        for kinds in itertools.product((1, 2, 3), repeat=w):
            x = np.zeros(n, dtype=np.uint8)
            z = np.zeros(n, dtype=np.uint8)
            for pos, kind in zip(support, kinds):
                x[pos] = kind & 1
                z[pos] = kind >> 1
            out.append((tuple(x), tuple(z)))
    out.sort()
    return out


def pauli_syndrome(code: StabilizerCode, xw: np.ndarray, zw: np.ndarray) -> tuple:
    return tuple(sym_bits(xw, zw, g.xw, g.zw) for g in code.generators)


def ml_decode(code: StabilizerCode, syndrome, max_weight: int) -> PauliOperator | None:
    """First Pauli error (by weight, then lexicographic bits) whose syndrome
    against the code generators matches; None if nothing matches in budget."""
    target = tuple(int(b) for b in syndrome)
    if len(target) != len(code.generators):
        raise ValueError("syndrome length != generator count")
    n = code.n
    for w in range(max_weight + 1):
        for x, z in _weight_w_paulis(n, w):
            xw = pack_bits(np.asarray(x, dtype=np.uint8), n)
            zw = pack_bits(np.asarray(z, dtype=np.uint8), n)
            if pauli_syndrome(code, xw, zw) == target:
                return PauliOperator.from_words(n, xw, zw, 0)
    return None


class SyndromeLookup:
    """Complete coset-leader table for a small stabilizer code: every
    syndrome maps to its minimal-weight error (packed bits)."""

    def __init__(self, code: StabilizerCode):
        n = code.n
        table: dict[tuple, tuple[np.ndarray, np.ndarray]] = {}
        want = 1 << len(code.generators)
        for w in range(n + 1):
            if len(table) == want:
                break
            for x, z in _weight_w_paulis(n, w):
                xw = pack_bits(np.asarray(x, dtype=np.uint8), n)
                zw = pack_bits(np.asarray(z, dtype=np.uint8), n)
                synd = pauli_syndrome(code, xw, zw)
                if synd not in table:
                    table[synd] = (xw, zw)
        if len(table) != want:
            raise ValueError("syndrome table incomplete; generators dependent?")
        self.code = code
        self.table = table

    def decode_bits(self, syndrome: tuple) -> tuple[np.ndarray, np.ndarray]:
        return self.table[tuple(int(b) for b in syndrome)]

    def decode(self, syndrome) -> PauliOperator:
        xw, zw = self.decode_bits(syndrome)
        return PauliOperator.from_words(self.code.n, xw.copy(), zw.copy(), 0)
