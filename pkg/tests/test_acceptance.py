"""End-to-end acceptance gates, one test per criterion.

Each test holds one externally meaningful claim about the package: dense
oracle agreement, worked-example replays, logical-operator conventions,
decoder soundness, and the large Monte Carlo reproduction targets with
their published tolerance windows.  Seeds and stop targets are pinned so
every run reproduces the same numbers.
"""

import os
import time

import numpy as np
import pytest

from test_tableau import (
    BELL_TABLE_FINAL,
    GHZ_TABLE_FINAL,
    run_bell_walkthrough,
    run_ghz_walkthrough,
)

from qdistill import oracle
from qdistill.binmat import pack_bits
from qdistill.channels import fidelity_of_input
from qdistill.codes import HAMMING_74, bundle_names, get_code, tanner
from qdistill.decoders import CssDecoder, MsaConfig, ml_decode, msa_decode, pauli_syndrome
from qdistill.experiments import ExperimentConfig, estimate_threshold, run_point, wilson_interval
from qdistill.ghz_map import BSplit
from qdistill.logical_ops import logical_paulis
from qdistill.paulis import PauliOperator
from qdistill.tableau import bell_table, ghz_table, logical_annotations

SEED = 20240901
DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "qdistill", "codes_data")
LP118_PRESENT = all(
    os.path.exists(os.path.join(DATA_DIR, f"lp118_{n}.liftspec"))
    for n in (544, 714, 1020))


def stab(code):
    return code.code if hasattr(code, "code") else code


# ---------------------------------------------------------------------------
# 1. dense-oracle identity suite


def test_criterion_1_oracle_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    five = get_code("five_qubit")
    yy3 = get_code("yy3")
    checks = [
        dict(kind="bell_transpose", n=2, rng=rng),
        dict(kind="bell_transpose", n=3, rng=rng),
        dict(kind="ghz_map", n=1, parties=3, rng=rng),
        dict(kind="ghz_map", n=2, parties=4, rng=rng),
        dict(kind="ghz_residual_multi", stab=PauliOperator.from_label("+Y"), parties=4),
        dict(kind="ghz_residual_multi", stab=five.generators[0], parties=3),
        dict(kind="ghz_residual_multi", stab=yy3.generators[0], parties=4),
        dict(kind="css_logical_bell", h_x=np.ones((1, 4), dtype=np.uint8),
             h_z=np.ones((1, 4), dtype=np.uint8)),
        dict(kind="css_logical_bell", h_x=HAMMING_74, h_z=HAMMING_74),
    ]
    for g in five.generators + yy3.generators:
        checks.append(dict(kind="ghz_residual", stab=g))
        checks.append(dict(kind="ghz_residual", stab=g, outcome=-1))
    b1 = np.array([0, 1, 0, 0, 0], dtype=np.uint8)
    checks.append(dict(kind="ghz_residual_multi", stab=five.generators[0], parties=3,
                       split=BSplit([b1, five.generators[0].z_bits ^ b1])))
    worst = 0.0
    for kw in checks:
        kind = kw.pop("kind")
        report = oracle.verify_identity(kind, **kw)
        assert report["pass"], (kind, report)
        worst = max(worst, report["max_deviation"])

    # tableau measurements against dense projectors: random sequences on
    # Bell and GHZ tables, every intermediate state cross-checked
    for builder, args in ((bell_table, (3,)), (ghz_table, (2, 3)), (ghz_table, (1, 4))):
        for seed in range(4):
            table = builder(*args)
            local_rng = np.random.default_rng(seed)
            state = oracle.state_from_table(table)
            n = table.total_qubits
            for _ in range(3):
                x = local_rng.integers(0, 2, size=n).astype(np.uint8)
                z = local_rng.integers(0, 2, size=n).astype(np.uint8)
                if not (x | z).any():
                    continue
                obs = PauliOperator(n, x, z, 0 if (x & z).sum() % 2 == 0 else 2)
                outcome = table.measure(obs, rng=local_rng)
                dense_obs = oracle.dense_pauli(obs)
                proj = 0.5 * (np.eye(2 ** n) + outcome * dense_obs)
                projected = proj @ state.amplitudes
                norm = np.linalg.norm(projected)
                assert norm > 1e-9  # chosen outcome is always reachable
                state = oracle.DenseState(n, projected / norm)
                after = oracle.state_from_table(table)
                dev = 1.0 - abs(np.vdot(after.amplitudes, state.amplitudes))
                worst = max(worst, dev)

    elapsed = time.perf_counter() - t0
    assert worst < 1e-10
    assert elapsed < 120.0


# ---------------------------------------------------------------------------
# 2. worked-example replays


def test_criterion_2_walkthrough_tables_are_bit_exact():
    t0 = time.perf_counter()
    bell = run_bell_walkthrough()
    assert bell.pretty() == BELL_TABLE_FINAL
    ghz = run_ghz_walkthrough()
    assert ghz.pretty(logical_annotations(ghz)) == GHZ_TABLE_FINAL
    # the golden blocks carry the load-bearing details: one "-1" row in the
    # Bell table, three "(logical)" tags in the GHZ table
    assert BELL_TABLE_FINAL.count("\n-1") == 1
    assert GHZ_TABLE_FINAL.count("(logical)") == 3
    assert time.perf_counter() - t0 < 1.0


# ---------------------------------------------------------------------------
# 3. logical-operator extraction


def test_criterion_3_logical_pair_conventions():
    t0 = time.perf_counter()
    lz, lx = logical_paulis(stab(get_code("five_qubit")))
    assert [p.label() for p in lz] == ["+ZZZZZ"]
    assert [p.label() for p in lx] == ["-YIZZI"]
    lz3, _lx3 = logical_paulis(stab(get_code("yy3")))
    assert [p.label() for p in lz3] == ["+ZZZ"]
    for name in bundle_names():
        code = get_code(name)
        code.ensure_logicals()
        assert stab(code).validate() == []
    assert time.perf_counter() - t0 < 15.0


def test_criterion_3_yy3_x_label_walkthrough_convention():
    # The worked GHZ example writes the X logical of <YYI, IYY> as Y on the
    # third qubit.  The extraction algorithm, run mechanically, lands in the
    # coset {-YII, -IYI, -IIY, -YYY}; +IIY is not an element of it, so this
    # assertion documents the convention gap and is expected to fail.
    _lz, lx = logical_paulis(stab(get_code("yy3")))
    assert [p.label() for p in lx] == ["+IIY"]


# ---------------------------------------------------------------------------
# 4. decoder soundness


def test_criterion_4_decoder_soundness():
    t0 = time.perf_counter()
    from qdistill.binmat import BitMatrix

    # classical Hamming: weight-1 exact
    graph = tanner(BitMatrix.from_dense(HAMMING_74))
    for bit in range(7):
        err = np.zeros(7, dtype=np.uint8)
        err[bit] = 1
        res = msa_decode(graph, (HAMMING_74 @ err) % 2, MsaConfig(channel_prior=0.05))
        assert res.converged and np.array_equal(res.estimate, err)

    # Steane and the small product code: weight-1 exact on both halves
    for name in ("steane", "hgp_small"):
        code = get_code(name)
        dec = CssDecoder(code)
        hx = code.h_x.to_dense().astype(np.uint8)
        hz = code.h_z.to_dense().astype(np.uint8)
        for q in range(code.n):
            for kind in ("X", "Z", "Y"):
                x = np.zeros(code.n, dtype=np.uint8)
                z = np.zeros(code.n, dtype=np.uint8)
                if kind in ("X", "Y"):
                    x[q] = 1
                if kind in ("Z", "Y"):
                    z[q] = 1
                res = dec.decode((hx @ z) % 2, (hz @ x) % 2, 0.05)
                assert res.converged
                assert np.array_equal(res.x_estimate, x)
                assert np.array_equal(res.z_estimate, z)

    # [[5,1,3]]: weight-1 exact through the exhaustive decoder
    five = get_code("five_qubit")
    for q in range(5):
        for kind in ("X", "Y", "Z"):
            x = np.zeros(5, dtype=np.uint8)
            z = np.zeros(5, dtype=np.uint8)
            if kind in ("X", "Y"):
                x[q] = 1
            if kind in ("Z", "Y"):
                z[q] = 1
            xw = pack_bits(x, 5)
            zw = pack_bits(z, 5)
            found = ml_decode(five, pauli_syndrome(five, xw, zw), 2)
            assert np.array_equal(found.x_bits, x)
            assert np.array_equal(found.z_bits, z)

    # converged => syndrome equation, fuzzed
    rng = np.random.default_rng(5)
    code = get_code("hgp_small")
    hz = code.h_z.to_dense().astype(np.uint8)
    graph = tanner(code.h_z)
    for _ in range(300):
        err = (rng.random(code.n) < 0.06).astype(np.uint8)
        synd = (hz @ err) % 2
        res = msa_decode(graph, synd, MsaConfig(channel_prior=0.04))
        if res.converged:
            assert np.array_equal((hz @ res.estimate) % 2, synd)

    assert time.perf_counter() - t0 < 60.0


# ---------------------------------------------------------------------------
# 5. logical-error-rate reproduction, largest code family


@pytest.mark.skipif(not LP118_PRESENT, reason="LP118 lift-spec files not shipped")
def test_criterion_5_ler_points_and_threshold():
    code = get_code("lp118_544")
    cfg = ExperimentConfig(protocol="decode_bench", code="lp118_544",
                           p_values=[0.05, 0.07, 0.09], target_errors=100,
                           max_trials=1_000_000, seed=SEED)
    rates = {}
    for idx, p in enumerate(cfg.p_values):
        row = run_point(cfg, code, p, idx)
        assert row.logical_errors + row.heralded_failures >= 100
        rates[p] = row.failure_rate
    # published-window checks: x2 at 0.05, +/-25% at 0.07, +/-15% at 0.09
    assert 0.0184 / 2 <= rates[0.05] <= 0.0184 * 2
    assert abs(rates[0.07] - 0.132) <= 0.25 * 0.132
    assert abs(rates[0.09] - 0.539) <= 0.15 * 0.539
    # drift alarms on the pinned seeded values
    assert rates[0.05] == pytest.approx(0.01714, abs=0.01)
    assert rates[0.07] == pytest.approx(0.15175, abs=0.03)
    assert rates[0.09] == pytest.approx(0.54348, abs=0.05)

    # threshold bracketing from the three code sizes on the shared grid
    grid = [0.09, 0.1, 0.104, 0.108]
    rows = []
    for name in ("lp118_544", "lp118_714", "lp118_1020"):
        big = get_code(name)
        gcfg = ExperimentConfig(protocol="decode_bench", code=name,
                                p_values=grid, target_errors=300,
                                max_trials=1_000_000, seed=SEED)
        for idx, p in enumerate(grid):
            rows.append(run_point(gcfg, big, p, idx))
    est = estimate_threshold(rows)
    assert not est.no_crossing
    lo, hi = est.interval
    assert lo <= 0.104 and hi >= 0.108


# ---------------------------------------------------------------------------
# 6. GHZ failure-rate reproduction


@pytest.mark.skipif(not LP118_PRESENT, reason="LP118 lift-spec files not shipped")
def test_criterion_6_ghz2_points_and_fidelity():
    code = get_code("lp118_544")
    points = {0.09: (1500, 0.779, 0.05), 0.10: (2000, 0.938, 0.03)}
    for idx, (p, (target, published, tol)) in enumerate(sorted(points.items())):
        cfg = ExperimentConfig(protocol="ghz2", code="lp118_544",
                               p_values=[p], target_errors=target,
                               max_trials=1_000_000, seed=SEED)
        row = run_point(cfg, code, p, idx)
        assert abs(row.failure_rate - published) <= tol, (p, row.failure_rate)
    assert round(fidelity_of_input(0.107), 4) == 0.7974


# ---------------------------------------------------------------------------
# 7. fallback path when the large codes are absent


def test_criterion_7_fallback_property():
    if LP118_PRESENT:
        pytest.skip("LP118 files shipped; criteria 5 and 6 run directly")
    # property-based stand-in: zero failures at p=0, monotone rates elsewhere
    code = get_code("hgp_small")
    zero = ExperimentConfig(protocol="ghz2", code="hgp_small", p_values=[0.0],
                            target_errors=10**9, max_trials=10_000, seed=SEED)
    row = run_point(zero, code, 0.0, 0)
    assert row.failure_rate == 0.0
    rates = []
    for idx, p in enumerate([0.001, 0.01, 0.05, 0.1]):
        cfg = ExperimentConfig(protocol="ghz2", code="hgp_small", p_values=[p],
                               target_errors=50, max_trials=20_000, seed=SEED)
        r = run_point(cfg, code, p, idx)
        rates.append((r.failure_rate, wilson_interval(
            r.logical_errors + r.heralded_failures, r.trials)))
    values = [r for r, _ in rates]
    assert values == sorted(values)


# ---------------------------------------------------------------------------
# 8. Protocol I placement ordering


def test_criterion_8_placement_ordering():
    code = get_code("five_qubit")
    trials = 100_000
    results = {}
    for placement in ("clifford_by_bob", "clifford_by_alice"):
        for idx, p in enumerate([0.01, 0.03]):
            cfg = ExperimentConfig(protocol="ghz1", code="five_qubit",
                                   p_values=[0.01, 0.03], decoder="ml",
                                   placement=placement,
                                   target_errors=10**9, max_trials=trials,
                                   seed=SEED)
            row = run_point(cfg, code, p, idx)
            assert row.trials == trials
            failures = row.logical_errors + row.heralded_failures
            results[(placement, p)] = (row.failure_rate,
                                       wilson_interval(failures, row.trials))
    for p in (0.01, 0.03):
        bob, _ = results[("clifford_by_bob", p)]
        alice, _ = results[("clifford_by_alice", p)]
        assert bob <= alice, (p, bob, alice)
    # intervals must separate at the larger error rate
    _, (bob_lo, bob_hi) = results[("clifford_by_bob", 0.03)]
    _, (alice_lo, alice_hi) = results[("clifford_by_alice", 0.03)]
    assert bob_hi < alice_lo
    # drift alarms on the pinned seeded values
    assert results[("clifford_by_bob", 0.01)][0] == pytest.approx(0.01750, abs=0.004)
    assert results[("clifford_by_alice", 0.01)][0] == pytest.approx(0.04951, abs=0.006)
    assert results[("clifford_by_bob", 0.03)][0] == pytest.approx(0.06434, abs=0.007)
    assert results[("clifford_by_alice", 0.03)][0] == pytest.approx(0.14830, abs=0.010)
