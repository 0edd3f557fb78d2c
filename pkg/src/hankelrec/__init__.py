"""Finite sequences satisfying linear recursions over finite fields.

Hankel ranks, minimal recursions, the transform of the set H_m of sequences
with a degree-m recursion, and singularity probabilities of Hankel matrices
with independently drawn entries.
"""

from .gf import Felt, FieldCtx, field_new, field_of_size
from .homopoly import (
    HomoPoly,
    SeqVec,
    adjoint_apply,
    enumerate_monic,
    factorize,
    omega_d,
    omega_total,
    poly_divrem,
    poly_gcd,
    poly_lcm,
    poly_mul,
)
from .recurrence import (
    HankelMatrix,
    RecursionIdealSlice,
    chi_decomposition,
    enumerate_Hm,
    hankel,
    ideal_slice,
    in_Hm,
    minimal_recursion,
    rank,
)
from .fourier import ChiHatReport, ComplexFn, chi_hat_brute, chi_hat_closed, dft, inverse_dft, verify_thm1
from .prob import (
    Distribution,
    error_bound,
    mu_hat,
    pi_direct,
    pi_fourier,
    pi_montecarlo,
    threshold_check,
)

__version__ = "0.1.0"

__all__ = [
    "Felt",
    "FieldCtx",
    "field_new",
    "field_of_size",
    "HomoPoly",
    "SeqVec",
    "adjoint_apply",
    "enumerate_monic",
    "factorize",
    "omega_d",
    "omega_total",
    "poly_divrem",
    "poly_gcd",
    "poly_lcm",
    "poly_mul",
    "HankelMatrix",
    "RecursionIdealSlice",
    "chi_decomposition",
    "enumerate_Hm",
    "hankel",
    "ideal_slice",
    "in_Hm",
    "minimal_recursion",
    "rank",
    "ChiHatReport",
    "ComplexFn",
    "chi_hat_brute",
    "chi_hat_closed",
    "dft",
    "inverse_dft",
    "verify_thm1",
    "Distribution",
    "error_bound",
    "mu_hat",
    "pi_direct",
    "pi_fourier",
    "pi_montecarlo",
    "threshold_check",
]
