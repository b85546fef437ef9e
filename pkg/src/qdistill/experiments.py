"""Monte Carlo campaign runner with deterministic parallelism and CSV output.

Each trial's RNG is derived from (seed, p_index, trial_index), so worker
count and scheduling cannot change any outcome.  Stopping is decided on the
ordered prefix of trial indices: the run for a p-point covers trials
0..T-1 where T is the first index at which the cumulative failure count
reaches the target (or the trial cap) — again independent of threading.
"""

from __future__ import annotations

import math
import os
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .codes import CssCode, get_code, load_alist_pair
from .decoders import MsaConfig
from .protocols import (CLASS_HERALDED, CLASS_LOGICAL, CLASS_SUCCESS,
                        METRIC_GHZ_EQUIV, METRIC_STRICT, PLACEMENT_ALICE,
                        PLACEMENT_BOB, PLACEMENT_NONE, BellRunner,
                        Ghz2MultiRunner, Ghz2Runner, NetworkTopology,
                        ghz1_setup, run_ghz1_trial)

PROTOCOLS = ("decode_bench", "bell", "ghz1", "ghz2", "ghz2_multi")


@dataclass
class ResultRow:
    protocol: str
    code_name: str
    n: int
    k: int
    p: float
    trials: int
    successes: int
    logical_errors: int
    heralded_failures: int
    failure_rate: float
    mean_iterations: float
    wall_seconds: float
    seed: int
    wilson_low: float
    wilson_high: float


CSV_FIELDS = [f.name for f in fields(ResultRow)]


def wilson_interval(failures: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for the failure proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass
class ExperimentConfig:
    protocol: str
    code: str = ""
    hx: str = ""
    hz: str = ""
    p_values: list[float] = field(default_factory=list)
    target_errors: int = 100
    max_trials: int = 1_000_000
    seed: int = 20240901
    max_iter: int = 100
    norm: float = 0.8
    schedule: str = "sequential"
    decoder: str = ""  # "" = msa for CSS codes, ml otherwise
    placement: str = PLACEMENT_BOB
    failure_metric: str = METRIC_STRICT
    topology: str = "star:3"
    out: str = ""
    threads: int = 1

    def validate(self) -> None:
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"unknown protocol {self.protocol!r}")
        if not self.code and not (self.hx and self.hz):
            raise ValueError("need --code or both --hx and --hz")
        if not self.p_values:
            raise ValueError("no p values given")
        for p in self.p_values:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"p={p} outside [0, 1]")
        if self.target_errors < 1 and self.max_trials < 1:
            raise ValueError("stop rule needs target_errors >= 1 or max_trials >= 1")
        if self.placement not in (PLACEMENT_NONE, PLACEMENT_ALICE, PLACEMENT_BOB):
            raise ValueError(f"unknown placement {self.placement!r}")
        if self.failure_metric not in (METRIC_STRICT, METRIC_GHZ_EQUIV):
            raise ValueError(f"unknown failure metric {self.failure_metric!r}")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")


def parse_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment; keys mirror CLI flags."""
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def parse_p_list(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def parse_topology(text: str) -> NetworkTopology:
    kind, _, num = text.partition(":")
    parties = int(num) if num else 3
    if kind == "star":
        return NetworkTopology.star(parties)
    if kind == "chain":
        return NetworkTopology.chain(parties)
    raise ValueError(f"unknown topology {text!r} (use star:N or chain:N)")


def load_code(cfg: ExperimentConfig):
    if cfg.hx and cfg.hz:
        return load_alist_pair(cfg.hx, cfg.hz)
    return get_code(cfg.code)


def _msa_config(cfg: ExperimentConfig) -> MsaConfig:
    return MsaConfig(normalization=cfg.norm, max_iters=cfg.max_iter,
                     schedule=cfg.schedule)


def _decoder_name(cfg: ExperimentConfig, code) -> str:
    if cfg.decoder:
        return cfg.decoder
    if cfg.protocol == "ghz1":
        return "ml"
    return "msa" if isinstance(code, CssCode) else "ml"


def make_runner_factory(cfg: ExperimentConfig, code, p: float):
    """A zero-argument callable building a per-thread trial runner."""
    decoder = _decoder_name(cfg, code)
    mcfg = _msa_config(cfg)
    if cfg.protocol in ("decode_bench", "bell"):
        return lambda: BellRunner(code, p, mcfg, decoder)
    if cfg.protocol == "ghz2":
        return lambda: Ghz2Runner(code, p, mcfg, cfg.failure_metric, decoder)
    if cfg.protocol == "ghz2_multi":
        topo = parse_topology(cfg.topology)
        return lambda: Ghz2MultiRunner(code, p, topo, mcfg, cfg.failure_metric, decoder)
    if cfg.protocol == "ghz1":
        placement, metric = cfg.placement, cfg.failure_metric

        class _Ghz1Adapter:
            def trial(self, rng):
                return run_ghz1_trial(code, "ml", p, placement, rng, metric)

        return _Ghz1Adapter
    raise ValueError(f"unknown protocol {cfg.protocol!r}")


def trial_rng(seed: int, p_index: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(p_index, trial_index))
    return np.random.default_rng(ss)


def run_point(cfg: ExperimentConfig, code, p: float, p_index: int) -> ResultRow:
    """All trials for one p value; the stop decision scans trial indices in
    order, so results are identical for any thread count."""
    factory = make_runner_factory(cfg, code, p)
    t0 = time.perf_counter()
    outcomes: list[tuple[str, int]] = []
    scan_pos = 0
    scan_failures = 0
    cut: int | None = None

    def scan() -> None:
        """Advance the ordered-prefix stop decision over new outcomes."""
        nonlocal scan_pos, scan_failures, cut
        while scan_pos < len(outcomes) and cut is None:
            if outcomes[scan_pos][0] != CLASS_SUCCESS:
                scan_failures += 1
            scan_pos += 1
            if scan_failures >= cfg.target_errors or scan_pos >= cfg.max_trials:
                cut = scan_pos

    last_report = t0
    if cfg.threads == 1:
        runner = factory()
        i = 0
        while cut is None:
            outcomes.append(_one_trial(runner, cfg.seed, p_index, i))
            i += 1
            scan()
            if time.perf_counter() - last_report > 5.0:
                _progress(cfg, p, outcomes)
                last_report = time.perf_counter()
    else:
        tls = threading.local()

        def task(idx: int) -> tuple[str, int]:
            runner = getattr(tls, "runner", None)
            if runner is None:
                runner = factory()
                tls.runner = runner
            return _one_trial(runner, cfg.seed, p_index, idx)

        batch = 64 * cfg.threads
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            base = 0
            while cut is None:
                count = min(batch, cfg.max_trials - base)
                if count <= 0:
                    break
                outcomes.extend(pool.map(task, range(base, base + count)))
                base += count
                scan()
                if time.perf_counter() - last_report > 5.0:
                    _progress(cfg, p, outcomes)
                    last_report = time.perf_counter()

    if cut is not None:
        del outcomes[cut:]
    successes = sum(1 for cls, _ in outcomes if cls == CLASS_SUCCESS)
    logical = sum(1 for cls, _ in outcomes if cls == CLASS_LOGICAL)
    heralded = len(outcomes) - successes - logical
    iter_sum = sum(it for _, it in outcomes)
    trials = len(outcomes)
    failures = logical + heralded
    low, high = wilson_interval(failures, trials)
    return ResultRow(
        protocol=cfg.protocol,
        code_name=getattr(code, "name", "") or cfg.code,
        n=code.n, k=code.k, p=p,
        trials=trials, successes=successes, logical_errors=logical,
        heralded_failures=heralded,
        failure_rate=1.0 - successes / trials if trials else 0.0,
        mean_iterations=iter_sum / trials if trials else 0.0,
        wall_seconds=time.perf_counter() - t0,
        seed=cfg.seed, wilson_low=low, wilson_high=high,
    )


def _one_trial(runner, seed: int, p_index: int, idx: int) -> tuple[str, int]:
    out = runner.trial(trial_rng(seed, p_index, idx))
    return out.classification, out.iterations


def _progress(cfg: ExperimentConfig, p: float, outcomes) -> None:
    failures = sum(1 for cls, _ in outcomes if cls != CLASS_SUCCESS)
    print(f"  [{cfg.protocol} p={p:g}] trials={len(outcomes)} failures={failures}",
          file=sys.stderr, flush=True)


def append_rows(path: str, rows: list[ResultRow]) -> None:
    """Append rows; the header is written once for a new/empty file.  Each
    row goes out in a single write call, then the stream is flushed."""
    need_header = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        if need_header:
            fh.write(",".join(CSV_FIELDS) + "\n")
            fh.flush()
        for row in rows:
            values = [repr(getattr(row, name)) if isinstance(getattr(row, name), float)
                      else str(getattr(row, name)) for name in CSV_FIELDS]
            fh.write(",".join(values) + "\n")
            fh.flush()


def run(cfg: ExperimentConfig) -> list[ResultRow]:
    cfg.validate()
    code = load_code(cfg)
    code.ensure_logicals()  # before any worker threads exist
    if cfg.protocol == "ghz1":
        ghz1_setup(code, cfg.placement)  # build lookup tables up front
    rows: list[ResultRow] = []
    for p_index, p in enumerate(cfg.p_values):
        row = run_point(cfg, code, p, p_index)
        rows.append(row)
        if cfg.out:
            append_rows(cfg.out, [row])
        print(f"[{cfg.protocol} {row.code_name} p={p:g}] trials={row.trials} "
              f"failure_rate={row.failure_rate:.6g} "
              f"wilson=[{row.wilson_low:.4g},{row.wilson_high:.4g}] "
              f"({row.wall_seconds:.1f}s)", file=sys.stderr, flush=True)
    return rows


# ---------------------------------------------------------------------------
# threshold estimation


@dataclass
class ThresholdEstimate:
    crossings: list[float]
    interval: tuple[float, float] | None

    @property
    def no_crossing(self) -> bool:
        return self.interval is None


def estimate_threshold(rows) -> ThresholdEstimate:
    """Bracket the failure-rate curve crossings of consecutive code sizes.

    Rows need code_name, n, p, failure_rate attributes.  For each pair of
    consecutive sizes the crossing is located on the shared p grid by
    log-linear interpolation; the interval is the union of the bracketing
    grid segments.  Curves that never cross yield interval None.
    """
    curves: dict[str, tuple[int, dict[float, float]]] = {}
    for row in rows:
        entry = curves.setdefault(row.code_name, (row.n, {}))
        entry[1][row.p] = row.failure_rate
    if len(curves) < 2:
        raise ValueError("need rows for at least two code sizes")
    order = sorted(curves, key=lambda name: curves[name][0])
    crossings: list[float] = []
    seg_lo: list[float] = []
    seg_hi: list[float] = []
    for small, large in zip(order[:-1], order[1:]):
        pts_s, pts_l = curves[small][1], curves[large][1]
        grid = sorted(set(pts_s) & set(pts_l))
        diffs = [pts_l[p] - pts_s[p] for p in grid]
        for i in range(len(grid) - 1):
            if diffs[i] == 0.0:
                crossings.append(grid[i])
                seg_lo.append(grid[i])
                seg_hi.append(grid[i + 1])
            elif (diffs[i] < 0.0) != (diffs[i + 1] < 0.0):
                crossings.append(_interp_crossing(
                    grid[i], grid[i + 1],
                    pts_s[grid[i]], pts_s[grid[i + 1]],
                    pts_l[grid[i]], pts_l[grid[i + 1]]))
                seg_lo.append(grid[i])
                seg_hi.append(grid[i + 1])
    if not crossings:
        return ThresholdEstimate([], None)
    return ThresholdEstimate(sorted(crossings), (min(seg_lo), max(seg_hi)))


def _interp_crossing(p0, p1, s0, s1, l0, l1) -> float:
    """p where the two curves meet, interpolating each in log space when
    possible (positive rates) and linearly otherwise."""
    if min(s0, s1, l0, l1) > 0.0:
        s0, s1, l0, l1 = math.log(s0), math.log(s1), math.log(l0), math.log(l1)
    num = s0 - l0
    den = (l1 - l0) - (s1 - s0)
    if den == 0.0:
        return 0.5 * (p0 + p1)
    t = num / den
    t = min(1.0, max(0.0, t))
    return p0 + t * (p1 - p0)
