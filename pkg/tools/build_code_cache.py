"""Regenerate codes_data: alist exports, cached logical operators, manifest.

Run from the repository root after changing any lift-spec:

    python tools/build_code_cache.py

The manifest caches the generated logical X/Z labels for the large lifted
product codes (regenerating them takes seconds to tens of seconds) and
records where each data file comes from.  Everything written here is
reproducible from the lift-specs plus the deterministic generator, and the
test suite re-derives the [[544]] cache from scratch to keep this honest.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qdistill.codes import get_code, write_alist, _DATA_DIR  # noqa: E402

LP_SOURCE = ("Base exponents from Table II of 'Trapping Sets of Quantum LDPC "
             "Codes', Quantum 5, 562 (2021); quasi-cyclic lifted product, "
             "base B identical to base A.")


def main() -> None:
    manifest = {"codes": {}}

    steane = get_code("steane")
    write_alist(steane.h_x, os.path.join(_DATA_DIR, "steane_hx.alist"))
    write_alist(steane.h_z, os.path.join(_DATA_DIR, "steane_hz.alist"))
    manifest["codes"]["steane"] = {
        "source": "Hamming(7,4) check matrix on both sides.",
        "files": ["steane_hx.alist", "steane_hz.alist"],
    }

    for name, lift in (("lp118_544", 16), ("lp118_714", 21), ("lp118_1020", 30)):
        code = get_code(name)
        code.ensure_logicals()
        problems = code.code.validate()
        if problems:
            raise SystemExit(f"{name} failed validation: {problems[:3]}")
        write_alist(code.h_x, os.path.join(_DATA_DIR, f"{name}_hx.alist"))
        write_alist(code.h_z, os.path.join(_DATA_DIR, f"{name}_hz.alist"))
        manifest["codes"][name] = {
            "source": LP_SOURCE,
            "lift": lift,
            "parameters": [code.n, code.k, code.code.distance],
            "files": [f"{name}.liftspec", f"{name}_hx.alist", f"{name}_hz.alist"],
            "logical_x": [op.label() for op in code.logical_x],
            "logical_z": [op.label() for op in code.logical_z],
        }
        print(f"{name}: [[{code.n},{code.k}]] logicals cached, validation clean")

    out = os.path.join(_DATA_DIR, "manifest.json")
    with open(out, "w") as f:
        json.dump(manifest, f, indent=1)
        f.write("\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
