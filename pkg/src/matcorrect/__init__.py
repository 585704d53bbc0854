"""Verification and correction of erroneous matrix products over exact rings."""

from .corrections import BitBudgetLedger, Correction, ErrorReport
from .correct_deterministic import DetConfig, correct_det_singlepass, correct_det_twopass
from .correct_fewbits import correct_fewbits, draw_random_prime
from .correct_randomized import RandConfig, correct_rand_known, correct_rand_unknown
from .correct_single import correct_single_error
from .instrumentation import CountingRng
from .matrix import (
    Matrix,
    extract_cols,
    extract_rows,
    mat_vec,
    naive_multiply,
    recompute_entry,
    recompute_row,
    transpose,
    vec_mat,
)
from .ring import RingContext, dot
from .sketch import (
    HashPair,
    Sketch,
    SketchParams,
    build_sketch,
    correct_compressed,
    poly_multiply,
    recover_corrections,
    sample_hash_pairs,
)
from .verifier import freivalds_rounds, test_strip, verify_product

__all__ = [
    "BitBudgetLedger",
    "Correction",
    "CountingRng",
    "DetConfig",
    "ErrorReport",
    "HashPair",
    "Matrix",
    "RandConfig",
    "RingContext",
    "Sketch",
    "SketchParams",
    "build_sketch",
    "correct_compressed",
    "correct_det_singlepass",
    "correct_det_twopass",
    "correct_fewbits",
    "correct_rand_known",
    "correct_rand_unknown",
    "correct_single_error",
    "dot",
    "draw_random_prime",
    "extract_cols",
    "extract_rows",
    "freivalds_rounds",
    "mat_vec",
    "naive_multiply",
    "poly_multiply",
    "recompute_entry",
    "recompute_row",
    "recover_corrections",
    "sample_hash_pairs",
    "test_strip",
    "transpose",
    "vec_mat",
    "verify_product",
]

__version__ = "0.1.0"
