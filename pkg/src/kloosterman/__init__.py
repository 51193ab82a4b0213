"""Kloosterman sums over prime fields with exact verification in Z[zeta_p].

The hot loops live in a compiled extension when it is available; otherwise
numpy fallbacks are used. ``backend()`` reports which one is active.
"""

from ._backend import name as backend
from .cyclotomic import (
    CyclotomicInt,
    cyc_add,
    cyc_basis,
    cyc_conjugate,
    cyc_from_int,
    cyc_is_zero,
    cyc_mul,
    cyc_scale,
    cyc_sub,
    cyc_to_complex,
)
from .identities import (
    BoundReport,
    CounterexampleError,
    HypothesisError,
    IdentityReport,
    ParameterPolicy,
    ScanReport,
    check_bounds,
    kr_scan,
    scan_primes,
    verify_identity_sq,
    verify_second_moment,
    verify_sum_over_l,
    verify_Y_decomposition,
)
from .klsum import (
    KloostermanValue,
    LambdaTable,
    batch_kloosterman,
    kloosterman_exact,
    kloosterman_float,
    kloosterman_r_exact,
    lambda_brute,
    lambda_formula,
)
from .modfield import (
    NotPrimeError,
    PrimeModulus,
    UnsupportedPrimeError,
    legendre,
    make_modulus,
    mod_inverse,
    mod_pow,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CounterexampleError",
    "CyclotomicInt",
    "HypothesisError",
    "IdentityReport",
    "KloostermanValue",
    "LambdaTable",
    "NotPrimeError",
    "ParameterPolicy",
    "PrimeModulus",
    "ScanReport",
    "UnsupportedPrimeError",
    "backend",
    "batch_kloosterman",
    "check_bounds",
    "cyc_add",
    "cyc_basis",
    "cyc_conjugate",
    "cyc_from_int",
    "cyc_is_zero",
    "cyc_mul",
    "cyc_scale",
    "cyc_sub",
    "cyc_to_complex",
    "kloosterman_exact",
    "kloosterman_float",
    "kloosterman_r_exact",
    "kr_scan",
    "lambda_brute",
    "lambda_formula",
    "legendre",
    "make_modulus",
    "mod_inverse",
    "mod_pow",
    "scan_primes",
    "verify_Y_decomposition",
    "verify_identity_sq",
    "verify_second_moment",
    "verify_sum_over_l",
]
