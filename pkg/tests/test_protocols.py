"""Trial executors for the three distillation protocols."""

import numpy as np
import pytest

from qdistill.binmat import pack_bits, words_for
from qdistill.codes import get_code
from qdistill.paulis import PauliOperator
from qdistill.protocols import (
    CLASS_HERALDED,
    CLASS_LOGICAL,
    CLASS_SUCCESS,
    METRIC_GHZ_EQUIV,
    METRIC_STRICT,
    PLACEMENT_ALICE,
    PLACEMENT_BOB,
    PLACEMENT_NONE,
    BellRunner,
    NetworkTopology,
    TrialOutcome,
    estimate_fidelity,
    run_bell_trial,
    run_ghz1_trial,
    run_ghz2_multi,
    run_ghz2_trial,
)

PLACEMENTS = (PLACEMENT_NONE, PLACEMENT_ALICE, PLACEMENT_BOB)


class FixedChannel:
    """Replays scripted error draws instead of sampling."""

    def __init__(self, n, draws):
        self.n = n
        self.draws = list(draws)

    def sample_bits(self, n, rng):
        assert n == self.n
        x_bits, z_bits = self.draws.pop(0)
        return (pack_bits(np.asarray(x_bits, dtype=np.uint8), n),
                pack_bits(np.asarray(z_bits, dtype=np.uint8), n))


def bell_with_error(code, x_bits, z_bits, decoder="ml"):
    runner = BellRunner(code, 0.1, decoder=decoder)
    runner.channel = FixedChannel(runner.base.n, [(x_bits, z_bits)])
    return runner.trial(np.random.default_rng(0))


# ---------------------------------------------------------------------------
# topology


def test_star_and_chain_shapes():
    star = NetworkTopology.star(4)
    assert star.parties == ["A", "B", "C", "D"]
    assert star.edges == [("A", "B"), ("A", "C"), ("A", "D")]
    assert star.root == "A"
    chain = NetworkTopology.chain(4)
    assert chain.edges == [("A", "B"), ("B", "C"), ("C", "D")]
    assert chain.subtree("B") == ["B", "C", "D"]


def test_topology_rejects_non_trees():
    with pytest.raises(ValueError, match="before its parent"):
        NetworkTopology(["A", "B", "C"], [("B", "C"), ("A", "B")])
    with pytest.raises(ValueError, match="twice"):
        NetworkTopology(["A", "B"], [("A", "B"), ("A", "B")])
    with pytest.raises(ValueError, match="reachable"):
        NetworkTopology(["A", "B", "C"], [("A", "B")])


# ---------------------------------------------------------------------------
# zero-noise invariance


def test_everything_succeeds_at_p_zero():
    rng = np.random.default_rng(6)
    for name, decoder in (("five_qubit", "ml"), ("steane", "msa")):
        out = run_bell_trial(get_code(name), decoder, 0.0, rng)
        assert out.classification == CLASS_SUCCESS
    for name in ("yy3", "five_qubit"):
        for placement in PLACEMENTS:
            out = run_ghz1_trial(get_code(name), "ml", 0.0, placement, rng)
            assert out.classification == CLASS_SUCCESS
    out = run_ghz2_trial(get_code("steane"), "msa", 0.0, rng)
    assert out.classification == CLASS_SUCCESS
    assert set(out.per_party_status) == {"B", "C"}
    out = run_ghz2_multi(get_code("steane"), "msa", 0.0,
                         NetworkTopology.star(4), rng)
    assert out.classification == CLASS_SUCCESS


# ---------------------------------------------------------------------------
# Bell protocol


def test_bell_weight_one_errors_always_succeed():
    code = get_code("five_qubit")
    for q in range(5):
        for kind in ("X", "Y", "Z"):
            x = np.zeros(5, dtype=np.uint8)
            z = np.zeros(5, dtype=np.uint8)
            if kind in ("X", "Y"):
                x[q] = 1
            if kind in ("Z", "Y"):
                z[q] = 1
            out = bell_with_error(code, x, z)
            assert out.classification == CLASS_SUCCESS


def test_bell_logical_z_is_classified_as_logical_error():
    code = get_code("five_qubit")
    out = bell_with_error(code, np.zeros(5, np.uint8), np.ones(5, np.uint8))
    assert out.classification == CLASS_LOGICAL
    # the surviving class is pure logical-Z: x-class 0, z-class 1
    assert out.residual_logical == "x0z1"


def test_bell_per_party_status():
    out = run_bell_trial(get_code("five_qubit"), "ml", 0.05,
                         np.random.default_rng(1))
    assert set(out.per_party_status) == {"B"}
    assert isinstance(out, TrialOutcome)


def test_bell_heralded_requires_a_decoder_failure():
    # with the exhaustive decoder at full weight budget nothing heralds
    rng = np.random.default_rng(8)
    for _ in range(200):
        out = run_bell_trial(get_code("five_qubit"), "ml", 0.15, rng)
        assert out.classification in (CLASS_SUCCESS, CLASS_LOGICAL)


def test_bell_steane_msa_statuses_are_consistent():
    rng = np.random.default_rng(9)
    for _ in range(150):
        out = run_bell_trial(get_code("steane"), "msa", 0.1, rng)
        if out.classification == CLASS_HERALDED:
            assert "heralded_failure" in out.per_party_status.values()
        else:
            assert all(v == "converged" for v in out.per_party_status.values())


# ---------------------------------------------------------------------------
# Protocol I


def test_ghz1_rejects_iterative_decoders():
    with pytest.raises(ValueError, match="exhaustive"):
        run_ghz1_trial(get_code("five_qubit"), "msa", 0.01, PLACEMENT_NONE,
                       np.random.default_rng(0))


@pytest.mark.parametrize("name", ["yy3", "five_qubit"])
@pytest.mark.parametrize("placement", PLACEMENTS)
def test_ghz1_fast_path_matches_the_tableau_replay(name, placement):
    code = get_code(name)
    rng = np.random.default_rng(hash((name, placement)) % 2**32)
    for _ in range(40):
        out = run_ghz1_trial(code, "ml", 0.1, placement, rng,
                             slow_validate=True)
        assert out.classification in (CLASS_SUCCESS, CLASS_LOGICAL)


def test_ghz1_metrics_are_nested():
    # any trial that is a strict success is also a ghz-equivalent success
    code = get_code("five_qubit")
    for seed in range(300):
        strict = run_ghz1_trial(code, "ml", 0.12, PLACEMENT_NONE,
                                np.random.default_rng(seed), metric=METRIC_STRICT)
        loose = run_ghz1_trial(code, "ml", 0.12, PLACEMENT_NONE,
                               np.random.default_rng(seed), metric=METRIC_GHZ_EQUIV)
        if strict.classification == CLASS_SUCCESS:
            assert loose.classification == CLASS_SUCCESS


def test_ghz1_reports_both_parties():
    out = run_ghz1_trial(get_code("yy3"), "ml", 0.05, PLACEMENT_BOB,
                         np.random.default_rng(3))
    assert set(out.per_party_status) == {"B", "C"}


# ---------------------------------------------------------------------------
# Protocol II


def test_ghz2_needs_css():
    with pytest.raises(ValueError, match="CSS"):
        run_ghz2_trial(get_code("five_qubit"), "ml", 0.01,
                       np.random.default_rng(0))


def test_ghz2_steane_single_qubit_on_bob_succeeds():
    from qdistill.protocols import Ghz2Runner
    code = get_code("steane")
    for q in range(7):
        for kind in ("X", "Y", "Z"):
            x = np.zeros(7, dtype=np.uint8)
            z = np.zeros(7, dtype=np.uint8)
            if kind in ("X", "Y"):
                x[q] = 1
            if kind in ("Z", "Y"):
                z[q] = 1
            runner = Ghz2Runner(code, 0.05, decoder="ml")
            runner.channel = FixedChannel(7, [(x, z), (np.zeros(7), np.zeros(7))])
            out = runner.trial(np.random.default_rng(0))
            assert out.classification == CLASS_SUCCESS


def test_ghz2_star3_matches_the_pairwise_runner_draw_for_draw():
    code = get_code("steane")
    star = NetworkTopology.star(3)
    for seed in range(60):
        a = run_ghz2_trial(code, "msa", 0.1, np.random.default_rng(seed))
        b = run_ghz2_multi(code, "msa", 0.1, star, np.random.default_rng(seed))
        assert a.classification == b.classification
        assert a.residual_logical == b.residual_logical
        assert a.iterations == b.iterations


def test_ghz2_chain_and_star_both_classify():
    code = get_code("steane")
    rng = np.random.default_rng(12)
    valid = (CLASS_SUCCESS, CLASS_LOGICAL, CLASS_HERALDED)
    for topo in (NetworkTopology.chain(4), NetworkTopology.star(4)):
        for _ in range(50):
            out = run_ghz2_multi(code, "ml", 0.01, topo, rng)
            assert out.classification in valid


def test_ghz2_metrics_are_nested():
    code = get_code("steane")
    strict_wins = loose_wins = 0
    for seed in range(300):
        strict = run_ghz2_trial(code, "msa", 0.13, np.random.default_rng(seed),
                                metric=METRIC_STRICT)
        loose = run_ghz2_trial(code, "msa", 0.13, np.random.default_rng(seed),
                               metric=METRIC_GHZ_EQUIV)
        strict_wins += strict.classification == CLASS_SUCCESS
        loose_wins += loose.classification == CLASS_SUCCESS
        if strict.classification == CLASS_SUCCESS:
            assert loose.classification == CLASS_SUCCESS
    assert loose_wins >= strict_wins


def test_ghz2_classifications_partition():
    code = get_code("hgp_small")
    rng = np.random.default_rng(77)
    seen = set()
    for _ in range(400):
        out = run_ghz2_trial(code, "msa", 0.08, rng)
        seen.add(out.classification)
        if out.classification == CLASS_HERALDED:
            assert "heralded_failure" in out.per_party_status.values()
    assert seen <= {CLASS_SUCCESS, CLASS_LOGICAL, CLASS_HERALDED}
    assert CLASS_SUCCESS in seen


# ---------------------------------------------------------------------------
# output model


def test_estimate_fidelity_extremes_and_example():
    fid, model = estimate_fidelity(0.0, 3)
    assert fid == 1.0 and model["ideal_weight"] == 1.0
    fid, model = estimate_fidelity(0.25, 1)
    assert fid == 0.75
    assert model["num_corrupted"] == 7
    assert model["corrupted_weight_each"] == pytest.approx(0.25 / 7)


def test_estimate_fidelity_weights_normalise():
    for pf in (0.0, 0.3, 1.0):
        for k in (1, 2, 5):
            fid, model = estimate_fidelity(pf, k)
            total = model["ideal_weight"] + model["num_corrupted"] * model["corrupted_weight_each"]
            assert total == pytest.approx(1.0)
            assert fid == pytest.approx(model["ideal_weight"])


def test_estimate_fidelity_range_check():
    with pytest.raises(ValueError):
        estimate_fidelity(1.5, 1)
