"""Command-line entry point.

Subcommands map one-to-one onto the experiment protocols, plus `logicals`
(print a code's logical Pauli pair) and `verify` (dense-oracle identity
suite).  Every experiment flag can also be given in a flat key=value config
file via --config; explicit command-line flags win.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import codes, experiments, oracle
from .experiments import ExperimentConfig, parse_config_file, parse_p_list
from .paulis import PauliOperator

_P_DEFAULTS = {
    "decode_bench": "0.01,0.03,0.05,0.07,0.09,0.1,0.104,0.108",
    "bell": "0.01,0.03,0.05",
    "ghz1": "0.01,0.03",
    "ghz2": "0.09,0.1,0.104,0.108,0.11",
    "ghz2_multi": "0.01,0.05",
}


def _add_experiment_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--code", default=None,
                     help="bundle code name (see `logicals --list`)")
    sub.add_argument("--hx", default=None, help="alist file for H_X")
    sub.add_argument("--hz", default=None, help="alist file for H_Z")
    sub.add_argument("--p", default=None, help="comma-separated error rates")
    sub.add_argument("--target-errors", type=int, default=None)
    sub.add_argument("--max-trials", type=int, default=None)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--max-iter", type=int, default=None)
    sub.add_argument("--norm", type=float, default=None,
                     help="min-sum normalization factor")
    sub.add_argument("--schedule", choices=["sequential", "flooding"], default=None)
    sub.add_argument("--decoder", choices=["msa", "ml"], default=None)
    sub.add_argument("--placement", default=None,
                     choices=["none", "clifford_by_alice", "clifford_by_bob"])
    sub.add_argument("--failure-metric", default=None,
                     choices=["strict", "ghz_equivalent"])
    sub.add_argument("--topology", default=None, help="star:N or chain:N")
    sub.add_argument("--out", default=None, help="CSV output path (appended)")
    sub.add_argument("--threads", type=int, default=None)
    sub.add_argument("--config", default=None, help="flat key=value config file")


_CONFIG_KEYS = {
    "code": str, "hx": str, "hz": str, "p": str, "target_errors": int,
    "max_trials": int, "seed": int, "max_iter": int, "norm": float,
    "schedule": str, "decoder": str, "placement": str, "failure_metric": str,
    "topology": str, "out": str, "threads": int,
}


def _build_config(protocol: str, args: argparse.Namespace) -> ExperimentConfig:
    merged: dict = {}
    if args.config:
        raw = parse_config_file(args.config)
        for key, value in raw.items():
            if key == "protocol":
                continue
            if key not in _CONFIG_KEYS:
                raise SystemExit(f"config: unknown key {key!r}")
            merged[key] = _CONFIG_KEYS[key](value)
    for key in _CONFIG_KEYS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value

    cfg = ExperimentConfig(protocol=protocol)
    if "p" in merged:
        cfg.p_values = parse_p_list(str(merged.pop("p")))
    else:
        cfg.p_values = parse_p_list(_P_DEFAULTS[protocol])
    for key, value in merged.items():
        setattr(cfg, key, value)
    if not cfg.code and not (cfg.hx and cfg.hz):
        cfg.code = "steane"
    return cfg


def _run_experiment(protocol: str, args: argparse.Namespace) -> int:
    cfg = _build_config(protocol, args)
    rows = experiments.run(cfg)
    print(",".join(experiments.CSV_FIELDS))
    for row in rows:
        print(",".join(str(getattr(row, name)) for name in experiments.CSV_FIELDS))
    return 0


def _cmd_logicals(args: argparse.Namespace) -> int:
    if args.list:
        for name in codes.bundle_names():
            print(name)
        return 0
    code = codes.get_code(args.code)
    code.ensure_logicals()
    base = code.code if hasattr(code, "code") else code
    print(f"{base.name} [[{base.n},{base.k}]]")
    for j in range(base.k):
        print(f"Zbar_{j + 1} = {base.logical_z[j].label()}")
        print(f"Xbar_{j + 1} = {base.logical_x[j].label()}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    rng = np.random.default_rng(args.seed)
    five = codes.get_code("five_qubit")
    yy3 = codes.get_code("yy3")
    checks = [
        ("bell_transpose n=2", dict(kind="bell_transpose", n=2, rng=rng)),
        ("bell_transpose n=3", dict(kind="bell_transpose", n=3, rng=rng)),
        ("ghz_map n=1 parties=3", dict(kind="ghz_map", n=1, parties=3, rng=rng)),
        ("ghz_map n=2 parties=4", dict(kind="ghz_map", n=2, parties=4, rng=rng)),
    ]
    for g in five.generators:
        checks.append((f"ghz_residual {g.label()}",
                       dict(kind="ghz_residual", stab=g)))
        checks.append((f"ghz_residual {g.label()} out=-1",
                       dict(kind="ghz_residual", stab=g, outcome=-1)))
    for g in yy3.generators:
        checks.append((f"ghz_residual {g.label()}",
                       dict(kind="ghz_residual", stab=g)))
    checks.append(("ghz_residual_multi parties=4 Y",
                   dict(kind="ghz_residual_multi",
                        stab=PauliOperator.from_label("+Y"), parties=4)))
    checks.append(("ghz_residual_multi parties=3 XZZXI",
                   dict(kind="ghz_residual_multi", parties=3,
                        stab=five.generators[0])))
    checks.append(("ghz_residual_multi parties=4 YYI",
                   dict(kind="ghz_residual_multi", parties=4,
                        stab=yy3.generators[0])))
    checks.append(("css_logical_bell [[4,2,2]]",
                   dict(kind="css_logical_bell",
                        h_x=np.ones((1, 4), dtype=np.uint8),
                        h_z=np.ones((1, 4), dtype=np.uint8))))
    checks.append(("css_logical_bell steane",
                   dict(kind="css_logical_bell",
                        h_x=codes.HAMMING_74, h_z=codes.HAMMING_74)))
    worst = 0.0
    failed = 0
    for label, kw in checks:
        kind = kw.pop("kind")
        result = oracle.verify_identity(kind, **kw)
        worst = max(worst, result["max_deviation"])
        status = "ok" if result["pass"] else "FAIL"
        if not result["pass"]:
            failed += 1
        print(f"{status:4s} {label:36s} max_deviation={result['max_deviation']:.3e}")
    print(f"{len(checks) - failed}/{len(checks)} identities verified "
          f"(worst deviation {worst:.3e})")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qdistill",
        description="Entanglement distillation with stabilizer codes: "
                    "Monte Carlo experiments and verification tools.")
    subs = parser.add_subparsers(dest="command", required=True)

    for proto, cmd in (("decode_bench", "decode-bench"), ("bell", "bell"),
                       ("ghz1", "ghz1"), ("ghz2", "ghz2"),
                       ("ghz2_multi", "ghz2-multi")):
        sub = subs.add_parser(cmd, help=f"run {proto} trials")
        _add_experiment_flags(sub)
        sub.set_defaults(func=lambda a, proto=proto: _run_experiment(proto, a))

    logical = subs.add_parser("logicals", help="print a code's logical Paulis")
    logical.add_argument("--code", default="five_qubit")
    logical.add_argument("--list", action="store_true", help="list bundle codes")
    logical.set_defaults(func=_cmd_logicals)

    verify = subs.add_parser("verify", help="dense-oracle identity suite")
    verify.add_argument("--seed", type=int, default=7)
    verify.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
