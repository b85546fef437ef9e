"""qdistill: one-way entanglement distillation with stabilizer codes.

Bit-packed symplectic Pauli algebra, stabilizer tableaux with measurement
updates, CSS/lifted-product code constructions, min-sum and exhaustive
syndrome decoders, and Monte Carlo executors for Bell/GHZ purification
protocols over noisy channels.
"""

from .binmat import BitMatrix, Eliminator
from .channels import DepolarizingChannel, fidelity_of_input
from .clifford_diag import (DiagonalClifford, conjugate, solve_for_code,
                            solve_symmetric)
from .codes import (CssCode, StabilizerCode, TannerGraph, bundle_names,
                    get_code, hypergraph_product, lifted_product,
                    load_alist_pair, parse_alist, parse_liftspec, tanner,
                    write_alist, write_liftspec)
from .decoders import (CssDecoder, DecodeResult, MsaConfig, SyndromeLookup,
                       css_decode, ml_decode, msa_decode)
from .ghz_map import BSplit, InducedStabilizer, induced_bc, induced_multi
from .logical_ops import StandardFormCode, logical_paulis, standard_form
from .paulis import PauliOperator, multiply, symplectic_inner, transpose
from .protocols import (NetworkTopology, TrialOutcome, estimate_fidelity,
                        run_bell_trial, run_ghz1_trial, run_ghz2_multi,
                        run_ghz2_trial)
from .tableau import (StabilizerTable, bell_table, ghz_table,
                      logical_annotations, measure)

__version__ = "0.1.0"

__all__ = [
    "BitMatrix", "Eliminator",
    "DepolarizingChannel", "fidelity_of_input",
    "DiagonalClifford", "conjugate", "solve_for_code", "solve_symmetric",
    "CssCode", "StabilizerCode", "TannerGraph", "bundle_names", "get_code",
    "hypergraph_product", "lifted_product", "load_alist_pair", "parse_alist",
    "parse_liftspec", "tanner", "write_alist", "write_liftspec",
    "CssDecoder", "DecodeResult", "MsaConfig", "SyndromeLookup",
    "css_decode", "ml_decode", "msa_decode",
    "BSplit", "InducedStabilizer", "induced_bc", "induced_multi",
    "StandardFormCode", "logical_paulis", "standard_form",
    "PauliOperator", "multiply", "symplectic_inner", "transpose",
    "NetworkTopology", "TrialOutcome", "estimate_fidelity",
    "run_bell_trial", "run_ghz1_trial", "run_ghz2_multi", "run_ghz2_trial",
    "StabilizerTable", "bell_table", "ghz_table", "logical_annotations",
    "measure",
    "__version__",
]
