"""Distillation protocols as Monte Carlo trial executors.

Trials are executed as residual-frame bookkeeping: all ideal measurement
signs cancel against the noiseless baseline, so only error-dependent
deviations are tracked (syndrome bits are symplectic products of the error
frame with stabilizer rows).  A slow tableau-replay mode cross-validates
that bookkeeping trial-by-trial on small codes, including the sign algebra
of the induced joint codes and the diagonal-Clifford placement.

Failure metrics for the GHZ protocols:

* ``strict`` (default): every party's residual must lie in that party's
  stabilizer row space.
* ``ghz_equivalent``: the combined residual must stabilize the logical GHZ
  state — no party may carry a logical-X class, and the logical-Z classes of
  the noisy parties must match (matched Zbar x Zbar pairs are logical GHZ
  stabilizers).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .binmat import Eliminator, pack_bits, parity_and, unpack_bits, words_for
from .channels import DepolarizingChannel
from .clifford_diag import DiagonalClifford, conjugate, solve_for_code
from .codes import CssCode, StabilizerCode
from .decoders import (CONVERGED, HERALDED_FAILURE, CssDecoder, MsaConfig,
                       SyndromeLookup, pauli_syndrome)
from .paulis import PauliOperator, sym_bits
from .tableau import StabilizerTable, ghz_table

CLASS_SUCCESS = "success"
CLASS_LOGICAL = "logical_error"
CLASS_HERALDED = "heralded_failure"

METRIC_STRICT = "strict"
METRIC_GHZ_EQUIV = "ghz_equivalent"

PLACEMENT_NONE = "none"
PLACEMENT_ALICE = "clifford_by_alice"
PLACEMENT_BOB = "clifford_by_bob"


@dataclass
class TrialOutcome:
    classification: str
    per_party_status: dict
    residual_logical: str | None = None
    iterations: int = 0


@dataclass
class NetworkTopology:
    parties: list[str]
    edges: list[tuple[str, str]]

    def __post_init__(self):
        root = self.parties[0]
        seen = {root}
        for parent, child in self.edges:
            if parent not in seen:
                raise ValueError(f"edge {parent}->{child} reaches a node before its parent")
            if child in seen:
                raise ValueError(f"node {child} reached twice (not a tree)")
            seen.add(child)
        if seen != set(self.parties):
            raise ValueError("not every party is reachable from the root")

    @property
    def root(self) -> str:
        return self.parties[0]

    def subtree(self, node: str) -> list[str]:
        out = [node]
        for parent, child in self.edges:
            if parent == node:
                out.extend(self.subtree(child))
        return out

    @staticmethod
    def star(parties: int) -> "NetworkTopology":
        from .tableau import party_names
        names = party_names(parties)
        return NetworkTopology(names, [(names[0], c) for c in names[1:]])

    @staticmethod
    def chain(parties: int) -> "NetworkTopology":
        from .tableau import party_names
        names = party_names(parties)
        return NetworkTopology(names, list(zip(names[:-1], names[1:])))


def _base(code) -> StabilizerCode:
    return code.code if hasattr(code, "code") else code


class LogicalFrame:
    """Packed logical operators of a code for fast residual classification."""

    __slots__ = ("k", "lz_x", "lz_z", "lx_x", "lx_z")

    def __init__(self, code):
        base = _base(code)
        base.ensure_logicals()
        self.k = base.k
        w = words_for(base.n)
        self.lz_x = np.zeros((base.k, w), dtype=np.uint64)
        self.lz_z = np.zeros((base.k, w), dtype=np.uint64)
        self.lx_x = np.zeros((base.k, w), dtype=np.uint64)
        self.lx_z = np.zeros((base.k, w), dtype=np.uint64)
        for j in range(base.k):
            self.lz_x[j] = base.logical_z[j].xw
            self.lz_z[j] = base.logical_z[j].zw
            self.lx_x[j] = base.logical_x[j].xw
            self.lx_z[j] = base.logical_x[j].zw

    def classes(self, xw: np.ndarray, zw: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(lambda_x, lambda_z): lambda_x[j] = <r, Zbar_j>, lambda_z[j] = <r, Xbar_j>."""
        lam_x = (np.bitwise_count(xw & self.lz_z).sum(axis=1)
                 + np.bitwise_count(zw & self.lz_x).sum(axis=1)) & 1
        lam_z = (np.bitwise_count(xw & self.lx_z).sum(axis=1)
                 + np.bitwise_count(zw & self.lx_x).sum(axis=1)) & 1
        return lam_x.astype(np.uint8), lam_z.astype(np.uint8)


def _lam_str(lam_x: np.ndarray, lam_z: np.ndarray) -> str:
    return "x" + "".join(map(str, lam_x)) + "z" + "".join(map(str, lam_z))


# ---------------------------------------------------------------------------
# decoder backends


class MlBackend:
    """Complete minimal-weight lookup decoding; never heralds a failure."""

    def __init__(self, code, p: float = 0.0):
        self.base = _base(code)
        self.lookup = SyndromeLookup(self.base)

    def decode_error(self, xw, zw):
        synd = pauli_syndrome(self.base, xw, zw)
        ex, ez = self.lookup.decode_bits(synd)
        return ex, ez, True, 0


class MsaBackend:
    """Min-sum decoding of a CSS code's two halves."""

    def __init__(self, code: CssCode, p: float, cfg: MsaConfig | None = None):
        if not isinstance(code, CssCode):
            raise ValueError("msa backend needs a CssCode")
        self.css = code
        self.p = p
        self.dec = CssDecoder(code, cfg)

    def decode_error(self, xw, zw):
        synd_hz = unpack_bits(self.css.h_z.mul_vec(xw), self.css.h_z.rows)
        synd_hx = unpack_bits(self.css.h_x.mul_vec(zw), self.css.h_x.rows)
        res = self.dec.decode(synd_hx, synd_hz, self.p)
        ex = pack_bits(res.x_estimate, self.css.n)
        ez = pack_bits(res.z_estimate, self.css.n)
        return ex, ez, res.converged, res.iterations


def make_backend(code, decoder: str, p: float, cfg: MsaConfig | None = None):
    if decoder == "ml":
        return MlBackend(code)
    if decoder == "msa":
        return MsaBackend(code, p, cfg)
    raise ValueError(f"unknown decoder {decoder!r}")


# ---------------------------------------------------------------------------
# Bell protocol


class BellRunner:
    """Reusable executor for Bell trials (one code, one p, one backend)."""

    def __init__(self, code, p: float, cfg: MsaConfig | None = None,
                 decoder: str = "msa"):
        self.base = _base(code)
        self.p = p
        self.backend = make_backend(code, decoder, p, cfg)
        self.frame = LogicalFrame(code)
        self.channel = DepolarizingChannel(p)

    def trial(self, rng: np.random.Generator) -> TrialOutcome:
        exw, ezw = self.channel.sample_bits(self.base.n, rng)
        rx_hat, rz_hat, converged, iters = self.backend.decode_error(exw, ezw)
        if not converged:
            return TrialOutcome(CLASS_HERALDED, {"B": HERALDED_FAILURE}, None, iters)
        rx = exw ^ rx_hat
        rz = ezw ^ rz_hat
        lam_x, lam_z = self.frame.classes(rx, rz)
        if lam_x.any() or lam_z.any():
            return TrialOutcome(CLASS_LOGICAL, {"B": CONVERGED},
                                _lam_str(lam_x, lam_z), iters)
        return TrialOutcome(CLASS_SUCCESS, {"B": CONVERGED}, None, iters)


def run_bell_trial(code, decoder, p: float, rng: np.random.Generator) -> TrialOutcome:
    """One Bell-distillation trial: only Bob's half is noisy and only Bob
    corrects; Alice's generator signs cancel in the syndrome deviations."""
    if isinstance(decoder, str):
        return BellRunner(code, p, decoder=decoder).trial(rng)
    runner = BellRunner.__new__(BellRunner)
    runner.base = _base(code)
    runner.p = p
    runner.backend = decoder
    runner.frame = LogicalFrame(code)
    runner.channel = DepolarizingChannel(p)
    return runner.trial(rng)


# ---------------------------------------------------------------------------
# Protocol I (one noisy hop B+C, then one noisy hop C)


class _SpanChecker:
    """GF(2) membership test in the span of packed symplectic rows."""

    def __init__(self, n: int, rows_xz: list[tuple[np.ndarray, np.ndarray]]):
        self.n = n
        self.elim = Eliminator(2 * n)
        for xw, zw in rows_xz:
            self.elim.add(pack_bits(np.concatenate(
                [unpack_bits(xw, n), unpack_bits(zw, n)]), 2 * n))

    def contains(self, xw: np.ndarray, zw: np.ndarray) -> bool:
        v = pack_bits(np.concatenate(
            [unpack_bits(xw, self.n), unpack_bits(zw, self.n)]), 2 * self.n)
        return self.elim.contains(v)


class Ghz1Setup:
    """Everything trial-independent for Protocol I on a given code/placement."""

    def __init__(self, code, placement: str):
        if placement not in (PLACEMENT_NONE, PLACEMENT_ALICE, PLACEMENT_BOB):
            raise ValueError(f"unknown placement {placement!r}")
        base = _base(code)
        base.ensure_logicals()
        self.code = code
        self.base = base
        self.placement = placement
        n = base.n
        self.n = n
        self.cliff: DiagonalClifford | None = None
        if placement != PLACEMENT_NONE:
            self.cliff = solve_for_code(code)
            if self.cliff is None:
                raise ValueError(
                    f"no diagonal Clifford restores this code (placement {placement})")

        # joint BC code rows (bits only; signs cancel in deviation space)
        bc_gens: list[PauliOperator] = []
        for g in base.generators:
            gb = np.concatenate([g.x_bits, np.zeros(n, dtype=np.uint8)])
            zb = np.concatenate([g.z_bits, np.zeros(n, dtype=np.uint8)])
            if placement == PLACEMENT_ALICE:
                gb[n:] = g.x_bits
                zb[n:] = g.z_bits
            else:
                gb[n:] = g.x_bits  # E(a, 0) on C
            bc_gens.append(PauliOperator(2 * n, gb, zb, 0))
        for j in range(n):
            z = np.zeros(2 * n, dtype=np.uint8)
            z[j] = z[n + j] = 1
            bc_gens.append(PauliOperator(2 * n, np.zeros(2 * n, dtype=np.uint8), z, 0))
        self.bc_code = StabilizerCode(n=2 * n, k=base.k, generators=bc_gens,
                                      name=f"{base.name}-bc-{placement}")
        problems = self.bc_code.validate()
        if problems:
            raise AssertionError(f"joint BC code invalid: {problems}")
        self.bc_lookup = SyndromeLookup(self.bc_code)

        # Charlie's code rows, aligned with the generator order
        charlie: list[PauliOperator] = []
        for g in base.generators:
            if placement == PLACEMENT_NONE:
                if g.xw.any():
                    charlie.append(PauliOperator(n, g.x_bits, np.zeros(n, dtype=np.uint8), 0))
                else:
                    charlie.append(PauliOperator(n, np.zeros(n, dtype=np.uint8), g.z_bits, 0))
            else:
                charlie.append(PauliOperator(n, g.x_bits, g.z_bits, 0))
        self.charlie_rows = charlie
        self.charlie_code = StabilizerCode(n=n, k=base.k, generators=charlie,
                                           name=f"{base.name}-charlie-{placement}")
        cproblems = self.charlie_code.validate()
        if cproblems:
            raise AssertionError(f"Charlie-side code invalid: {cproblems}")
        self.charlie_lookup = SyndromeLookup(self.charlie_code)

        self.frame = LogicalFrame(code)
        # Charlie's representative of the logical X on his physical qubits:
        # without the Clifford his register only ever received the X parts.
        w = words_for(n)
        self.cx_x = np.zeros((base.k, w), dtype=np.uint64)
        self.cx_z = np.zeros((base.k, w), dtype=np.uint64)
        for j, lx in enumerate(base.logical_x):
            self.cx_x[j] = lx.xw
            if placement != PLACEMENT_NONE:
                self.cx_z[j] = lx.zw

        self.gen_rows = [(g.xw.copy(), g.zw.copy()) for g in base.generators]
        self.strict_b = _SpanChecker(n, self.gen_rows)
        self.strict_c = _SpanChecker(n, [(r.xw, r.zw) for r in charlie])
        self.words = words_for(n)

    def charlie_lambda_z(self, xw: np.ndarray, zw: np.ndarray) -> np.ndarray:
        lam = (np.bitwise_count(xw & self.cx_z).sum(axis=1)
               + np.bitwise_count(zw & self.cx_x).sum(axis=1)) & 1
        return lam.astype(np.uint8)


_GHZ1_CACHE: dict[tuple[int, str], Ghz1Setup] = {}


def ghz1_setup(code, placement: str) -> Ghz1Setup:
    key = (id(code), placement)
    if key not in _GHZ1_CACHE:
        _GHZ1_CACHE[key] = Ghz1Setup(code, placement)
    return _GHZ1_CACHE[key]


def _split_words(vec: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Split a packed 2n-bit vector into two packed n-bit vectors."""
    bits = unpack_bits(vec, 2 * n)
    return pack_bits(bits[:n], n), pack_bits(bits[n:], n)


def _join_words(a_bits: np.ndarray, b_bits: np.ndarray) -> np.ndarray:
    return pack_bits(np.concatenate([a_bits, b_bits]), a_bits.size + b_bits.size)


def _ghz1_fast(setup: Ghz1Setup, e1: tuple[np.ndarray, np.ndarray],
               e2: tuple[np.ndarray, np.ndarray]) -> dict:
    n = setup.n
    e1x, e1z = e1
    synd1 = tuple(sym_bits(e1x, e1z, g.xw, g.zw) for g in setup.bc_code.generators)
    hx, hz = setup.bc_lookup.decode_bits(synd1)
    r1x = e1x ^ hx
    r1z = e1z ^ hz
    r1x_bits = unpack_bits(r1x, 2 * n)
    r1z_bits = unpack_bits(r1z, 2 * n)
    r1bx = pack_bits(r1x_bits[:n], n)
    r1bz = pack_bits(r1z_bits[:n], n)
    r1cx = pack_bits(r1x_bits[n:], n)
    r1cz = pack_bits(r1z_bits[n:], n)

    beta = np.array([sym_bits(r1bx, r1bz, gx, gz) for gx, gz in setup.gen_rows],
                    dtype=np.uint8)

    if setup.placement == PLACEMENT_BOB:
        r1cz = r1cz ^ setup.cliff.shift_z(r1cx)

    e2x, e2z = e2
    fcx = r1cx ^ e2x
    fcz = r1cz ^ e2z
    synd2 = tuple((sym_bits(fcx, fcz, r.xw, r.zw) ^ int(beta[i]))
                  for i, r in enumerate(setup.charlie_rows))
    cx_hat, cz_hat = setup.charlie_lookup.decode_bits(synd2)
    fx = fcx ^ cx_hat
    fz = fcz ^ cz_hat

    lam_x_b, lam_z_b = setup.frame.classes(r1bx, r1bz)
    lam_x_c = (np.bitwise_count(fx & setup.frame.lz_z).sum(axis=1)
               + np.bitwise_count(fz & setup.frame.lz_x).sum(axis=1)) & 1
    lam_x_c = lam_x_c.astype(np.uint8)
    lam_z_c = setup.charlie_lambda_z(fx, fz)

    return {
        "synd1": synd1, "beta": beta, "synd2": synd2,
        "rb": (r1bx, r1bz), "fc": (fx, fz),
        "lam_x_b": lam_x_b, "lam_z_b": lam_z_b,
        "lam_x_c": lam_x_c, "lam_z_c": lam_z_c,
        "strict": (setup.strict_b.contains(r1bx, r1bz)
                   and setup.strict_c.contains(fx, fz)),
        "ghz_equiv": (not lam_x_b.any() and not lam_x_c.any()
                      and np.array_equal(lam_z_b, lam_z_c)),
    }


def _embed_bits(x_bits: np.ndarray, z_bits: np.ndarray, total: int, offset: int) -> PauliOperator:
    n = x_bits.size
    x = np.zeros(total, dtype=np.uint8)
    z = np.zeros(total, dtype=np.uint8)
    x[offset: offset + n] = x_bits
    z[offset: offset + n] = z_bits
    return PauliOperator(total, x, z, 0)


def _ghz1_slow(setup: Ghz1Setup, e1, e2, coin_rng: np.random.Generator) -> dict:
    """Full tableau replay of one Protocol I trial with random measurement
    outcomes; validates the deviation bookkeeping of the fast path."""
    from .ghz_map import induced_bc

    base = setup.base
    n = base.n
    total = 3 * n
    table = ghz_table(n, 3)

    eps_a = []
    for g in base.generators:
        out = table.measure(g.embed(total, 0), rng=coin_rng)
        eps_a.append(out)

    if setup.placement == PLACEMENT_ALICE:
        for i in range(len(table.rows)):
            table.rows[i] = conjugate(setup.cliff, table.rows[i], inverse=True,
                                      offset=2 * n)

    # frame bits over the full register (sign of a frame is irrelevant)
    fx = np.zeros(total, dtype=np.uint8)
    fz = np.zeros(total, dtype=np.uint8)
    e1x_bits = unpack_bits(e1[0], 2 * n)
    e1z_bits = unpack_bits(e1[1], 2 * n)
    fx[n:] ^= e1x_bits
    fz[n:] ^= e1z_bits

    def dev(op: PauliOperator) -> int:
        return sym_bits(pack_bits(fx, total), pack_bits(fz, total), op.xw, op.zw)

    # Bob measures the joint BC rows; all are contained, and for generator-
    # derived rows the contained sign must match the induced-stabilizer sign.
    synd1 = []
    for i, row in enumerate(setup.bc_code.generators):
        obs = _embed_bits(row.x_bits, row.z_bits, total, n)
        member = table.contains(obs)
        if member is None:
            raise AssertionError("joint BC row not contained in the replay table")
        if i < len(base.generators) and setup.placement != PLACEMENT_ALICE:
            ind = induced_bc(base.generators[i], eps_a[i])
            if member != ind.sign:
                raise AssertionError("induced BC sign mismatch in replay")
        synd1.append(dev(obs))
    synd1 = tuple(synd1)

    # Bob corrects with the fast path's estimate
    hx, hz = setup.bc_lookup.decode_bits(synd1)
    fx[n:] ^= unpack_bits(hx, 2 * n)
    fz[n:] ^= unpack_bits(hz, 2 * n)

    # Bob measures the code on B; deviations of the reported signs
    beta = []
    for g in base.generators:
        obs = g.embed(total, n)
        pos = PauliOperator(total, obs.x_bits, obs.z_bits, 0)
        beta.append(dev(pos))
        table.measure(pos, rng=coin_rng)
    beta = np.array(beta, dtype=np.uint8)

    if setup.placement == PLACEMENT_BOB:
        for i in range(len(table.rows)):
            table.rows[i] = conjugate(setup.cliff, table.rows[i], inverse=True,
                                      offset=2 * n)
        shifted = (fx[2 * n:] @ setup.cliff.r_matrix) & 1
        fz[2 * n:] ^= shifted

    fx[2 * n:] ^= unpack_bits(e2[0], n)
    fz[2 * n:] ^= unpack_bits(e2[1], n)

    synd2 = []
    for i, row in enumerate(setup.charlie_rows):
        obs = _embed_bits(row.x_bits, row.z_bits, total, 2 * n)
        if table.contains(obs) is None:
            raise AssertionError("Charlie row not contained in the replay table")
        synd2.append(dev(obs) ^ int(beta[i]))
    synd2 = tuple(synd2)

    cx_hat, cz_hat = setup.charlie_lookup.decode_bits(synd2)
    fx[2 * n:] ^= unpack_bits(cx_hat, n)
    fz[2 * n:] ^= unpack_bits(cz_hat, n)

    # ground truth: the logical GHZ rows must be unflipped by the residual
    base.ensure_logicals()
    flips = []
    for j in range(base.k):
        lz = base.logical_z[j]
        zz_ab = PauliOperator(total, np.zeros(total, dtype=np.uint8),
                              np.concatenate([lz.z_bits, lz.z_bits,
                                              np.zeros(n, dtype=np.uint8)]), 0)
        zz_bc = PauliOperator(total, np.zeros(total, dtype=np.uint8),
                              np.concatenate([np.zeros(n, dtype=np.uint8),
                                              lz.z_bits, lz.z_bits]), 0)
        lx = base.logical_x[j]
        c_zpart = lx.z_bits if setup.placement != PLACEMENT_NONE else np.zeros(n, dtype=np.uint8)
        xxx = PauliOperator(total,
                            np.concatenate([lx.x_bits, lx.x_bits, lx.x_bits]),
                            np.concatenate([lx.z_bits, lx.z_bits, c_zpart]), 0)
        for op in (zz_ab, zz_bc, xxx):
            if table.contains(op) is None:
                raise AssertionError("logical GHZ row not contained in the replay table")
            flips.append(dev(op))
    ghz_equiv = not any(flips)

    return {"synd1": synd1, "beta": beta, "synd2": synd2, "ghz_equiv": ghz_equiv}


def run_ghz1_trial(code, decoder, p: float, placement: str,
                   rng: np.random.Generator, metric: str = METRIC_STRICT,
                   slow_validate: bool = False) -> TrialOutcome:
    """One Protocol I trial: noisy 2n-qubit hop to Bob, joint BC decode,
    Bob's B-side code measurement, optional diagonal Clifford, noisy n-qubit
    hop to Charlie, Charlie's decode with Bob's reported sign deviations."""
    if decoder != "ml" and not isinstance(decoder, MlBackend):
        raise ValueError("Protocol I uses the exhaustive lookup decoder (non-CSS joint code)")
    setup = ghz1_setup(code, placement)
    channel = DepolarizingChannel(p)
    e1 = channel.sample_bits(2 * setup.n, rng)
    e2 = channel.sample_bits(setup.n, rng)
    fast = _ghz1_fast(setup, e1, e2)
    if slow_validate:
        slow = _ghz1_slow(setup, e1, e2, coin_rng=rng)
        if slow["synd1"] != fast["synd1"]:
            raise AssertionError("slow/fast Bob syndrome mismatch")
        if not np.array_equal(slow["beta"], fast["beta"]):
            raise AssertionError("slow/fast reported-sign deviation mismatch")
        if slow["synd2"] != fast["synd2"]:
            raise AssertionError("slow/fast Charlie syndrome mismatch")
        if slow["ghz_equiv"] != fast["ghz_equiv"]:
            raise AssertionError("slow/fast classification mismatch")
    ok = fast["strict"] if metric == METRIC_STRICT else fast["ghz_equiv"]
    status = {"B": CONVERGED, "C": CONVERGED}
    if ok:
        return TrialOutcome(CLASS_SUCCESS, status, None, 0)
    detail = (_lam_str(fast["lam_x_b"], fast["lam_z_b"]) + "|"
              + _lam_str(fast["lam_x_c"], fast["lam_z_c"]))
    return TrialOutcome(CLASS_LOGICAL, status, detail, 0)


# ---------------------------------------------------------------------------
# Protocol II


class Ghz2Runner:
    """Reusable per-thread executor for Protocol II trials (one code, one p)."""

    def __init__(self, code: CssCode, p: float, cfg: MsaConfig | None = None,
                 metric: str = METRIC_STRICT, decoder: str = "msa"):
        if not isinstance(code, CssCode):
            raise ValueError("Protocol II needs a CSS code")
        self.code = code
        self.p = p
        self.metric = metric
        self.backend = make_backend(code, decoder, p, cfg)
        self.frame = LogicalFrame(code)
        self.channel = DepolarizingChannel(p)
        self.n = code.n

    def _classify(self, residuals: dict[str, tuple[np.ndarray, np.ndarray]],
                  iterations: int) -> TrialOutcome:
        lam_xs, lam_zs = {}, {}
        for party, (rx, rz) in residuals.items():
            lam_xs[party], lam_zs[party] = self.frame.classes(rx, rz)
        status = {party: CONVERGED for party in residuals}
        if self.metric == METRIC_STRICT:
            ok = all(not lam_xs[t].any() and not lam_zs[t].any() for t in residuals)
        else:
            parity = np.zeros(self.frame.k, dtype=np.uint8)
            for t in residuals:
                parity ^= lam_zs[t]
            ok = all(not lam_xs[t].any() for t in residuals) and not parity.any()
        if ok:
            return TrialOutcome(CLASS_SUCCESS, status, None, iterations)
        detail = "|".join(f"{t}:{_lam_str(lam_xs[t], lam_zs[t])}" for t in sorted(residuals))
        return TrialOutcome(CLASS_LOGICAL, status, detail, iterations)

    def trial(self, rng: np.random.Generator) -> TrialOutcome:
        residuals = {}
        iterations = 0
        for party in ("B", "C"):
            ex, ez = self.channel.sample_bits(self.n, rng)
            rx_hat, rz_hat, converged, iters = self.backend.decode_error(ex, ez)
            iterations += iters
            if not converged:
                status = {party: HERALDED_FAILURE}
                return TrialOutcome(CLASS_HERALDED, status, None, iterations)
            residuals[party] = (ex ^ rx_hat, ez ^ rz_hat)
        return self._classify(residuals, iterations)


def run_ghz2_trial(code: CssCode, decoder, p: float, rng: np.random.Generator,
                   cfg: MsaConfig | None = None,
                   metric: str = METRIC_STRICT) -> TrialOutcome:
    name = decoder if isinstance(decoder, str) else "msa"
    return Ghz2Runner(code, p, cfg, metric, name).trial(rng)


class Ghz2MultiRunner:
    """Protocol II over a spanning tree: every subsystem accumulates one
    independent depolarizing error per tree edge on its root path, then each
    recipient decodes once."""

    def __init__(self, code: CssCode, p: float, topology: NetworkTopology,
                 cfg: MsaConfig | None = None, metric: str = METRIC_STRICT,
                 decoder: str = "msa"):
        if not isinstance(code, CssCode):
            raise ValueError("Protocol II needs a CSS code")
        self.code = code
        self.p = p
        self.topology = topology
        self.metric = metric
        self.backend = make_backend(code, decoder, p, cfg)
        self.frame = LogicalFrame(code)
        self.channel = DepolarizingChannel(p)
        self.n = code.n
        # per-edge recipient lists in breadth-first edge order
        self.edge_parties = [topology.subtree(child) for _, child in topology.edges]

    def trial(self, rng: np.random.Generator) -> TrialOutcome:
        w = words_for(self.n)
        acc = {t: (np.zeros(w, dtype=np.uint64), np.zeros(w, dtype=np.uint64))
               for t in self.topology.parties[1:]}
        for parties in self.edge_parties:
            for t in parties:
                ex, ez = self.channel.sample_bits(self.n, rng)
                ax, az = acc[t]
                acc[t] = (ax ^ ex, az ^ ez)
        residuals = {}
        iterations = 0
        for t in self.topology.parties[1:]:
            ex, ez = acc[t]
            rx_hat, rz_hat, converged, iters = self.backend.decode_error(ex, ez)
            iterations += iters
            if not converged:
                return TrialOutcome(CLASS_HERALDED, {t: HERALDED_FAILURE}, None, iterations)
            residuals[t] = (ex ^ rx_hat, ez ^ rz_hat)
        lam_xs, lam_zs = {}, {}
        for t, (rx, rz) in residuals.items():
            lam_xs[t], lam_zs[t] = self.frame.classes(rx, rz)
        status = {t: CONVERGED for t in residuals}
        if self.metric == METRIC_STRICT:
            ok = all(not lam_xs[t].any() and not lam_zs[t].any() for t in residuals)
        else:
            parity = np.zeros(self.frame.k, dtype=np.uint8)
            for t in residuals:
                parity ^= lam_zs[t]
            ok = all(not lam_xs[t].any() for t in residuals) and not parity.any()
        if ok:
            return TrialOutcome(CLASS_SUCCESS, status, None, iterations)
        detail = "|".join(f"{t}:{_lam_str(lam_xs[t], lam_zs[t])}" for t in sorted(residuals))
        return TrialOutcome(CLASS_LOGICAL, status, detail, iterations)


def run_ghz2_multi(code: CssCode, decoder, p: float, topology: NetworkTopology,
                   rng: np.random.Generator, cfg: MsaConfig | None = None,
                   metric: str = METRIC_STRICT) -> TrialOutcome:
    name = decoder if isinstance(decoder, str) else "msa"
    return Ghz2MultiRunner(code, p, topology, cfg, metric, name).trial(rng)


# ---------------------------------------------------------------------------
# output model


def estimate_fidelity(failure_rate: float, k: int) -> tuple[float, dict]:
    """Output-state model: ideal logical GHZ^{otimes k} with weight 1 - P_f,
    the 8^k - 1 Pauli-corrupted variants sharing P_f uniformly."""
    if not 0.0 <= failure_rate <= 1.0:
        raise ValueError("failure rate must be in [0, 1]")
    num_corrupted = 8 ** k - 1
    model = {
        "ideal_weight": 1.0 - failure_rate,
        "corrupted_weight_each": failure_rate / num_corrupted if num_corrupted else 0.0,
        "num_corrupted": num_corrupted,
    }
    return 1.0 - failure_rate, model
