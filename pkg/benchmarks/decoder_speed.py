#!/usr/bin/env python3
"""Compare the JIT decoder kernels against the pure-numpy fallback.

Runs the same batch of seeded decoding problems twice: once in this
process with whatever kernels the build selected (numba unless
QDISTILL_PURE_NUMPY=1), and once in a subprocess forced onto the pure
path.  Prints per-decode timings and the speedup.  The iteration totals
must match between the two runs — the fallback is the same algorithm,
not an approximation.

    python3 benchmarks/decoder_speed.py --code lp118_544 --trials 10
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from qdistill import _kernels
from qdistill.binmat import unpack_bits
from qdistill.channels import DepolarizingChannel
from qdistill.codes import get_code
from qdistill.decoders import CssDecoder, MsaConfig


def run_workload(code_name, p, trials, seed):
    code = get_code(code_name)
    dec = CssDecoder(code, MsaConfig())
    chan = DepolarizingChannel(p)
    rng = np.random.default_rng(seed)
    syndromes = []
    for _ in range(trials + 1):
        xw, zw = chan.sample_bits(code.n, rng)
        synd_hz = unpack_bits(code.h_z.mul_vec(xw), code.h_z.rows)
        synd_hx = unpack_bits(code.h_x.mul_vec(zw), code.h_x.rows)
        syndromes.append((synd_hx, synd_hz))

    dec.decode(*syndromes[0], p)  # warmup; compiles the JIT path
    t0 = time.perf_counter()
    iterations = 0
    for synd_hx, synd_hz in syndromes[1:]:
        res = dec.decode(synd_hx, synd_hz, p)
        iterations += res.iterations
    seconds = time.perf_counter() - t0
    return {
        "kernel": "numba" if _kernels.USING_NUMBA else "numpy",
        "code": code_name,
        "p": p,
        "trials": trials,
        "seconds": seconds,
        "ms_per_decode": 1e3 * seconds / trials,
        "iterations": iterations,
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--code", default="lp118_544")
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=20240901)
    ap.add_argument("--inner", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args(argv)

    if args.inner:
        print(json.dumps(run_workload(args.code, args.p, args.trials,
                                      args.seed)))
        return 0

    here = run_workload(args.code, args.p, args.trials, args.seed)

    env = dict(os.environ, QDISTILL_PURE_NUMPY="1")
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--inner",
         "--code", args.code, "--p", str(args.p),
         "--trials", str(args.trials), "--seed", str(args.seed)],
        env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=sys.stderr)
        return 1
    pure = json.loads(proc.stdout)

    rows = [here, pure] if here["kernel"] != "numpy" else [pure, here]
    print(f"code={args.code} p={args.p} trials={args.trials} "
          f"seed={args.seed}")
    print(f"{'kernel':<8} {'total s':>10} {'ms/decode':>12} {'iters':>8}")
    for r in rows:
        print(f"{r['kernel']:<8} {r['seconds']:>10.3f} "
              f"{r['ms_per_decode']:>12.3f} {r['iterations']:>8d}")
    if here["iterations"] != pure["iterations"]:
        print("WARNING: iteration totals differ between kernels",
              file=sys.stderr)
        return 1
    if rows[0]["kernel"] == "numba":
        print(f"speedup: {rows[1]['seconds'] / rows[0]['seconds']:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
