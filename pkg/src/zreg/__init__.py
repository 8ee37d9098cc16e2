"""zreg: regularized Euler products, prime zeta, Bernoulli-type polynomials,
Stieltjes constants and elliptic-curve L-function diagnostics."""
from __future__ import annotations

from .errors import (CapacityError, DomainError, FormatError, InvariantError, NonDivisibilityError,
                     PoleError, VanishingFactorError, ZregError)
from .numerics import format_complex, gamma, h_factor, parse_complex
from .primes import PrimeTable, sieve_to_count
from .zeta_core import fn_ratio, hardy_z, scan_zeros, zeta_hat

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "DomainError", "FormatError", "InvariantError", "NonDivisibilityError",
    "PoleError", "VanishingFactorError", "ZregError",
    "format_complex", "gamma", "h_factor", "parse_complex",
    "PrimeTable", "sieve_to_count",
    "fn_ratio", "hardy_z", "scan_zeros", "zeta_hat",
]
