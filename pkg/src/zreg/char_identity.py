"""A finite character sum over the conic ab + bc + ca = 0 in (F_p^x)^3 against
generalized Bernoulli numbers of the quadratic character, for p = 3 mod 4.

    LHS = sum_{(a,b,c) in S} psi(abc) / ((1 - zeta^a)(1 - zeta^b)(1 - zeta^c)),
    RHS = -sqrt(-p) * ((p + 1)/4 * B_{1,psi} + B_{3,psi}/6),

with zeta = exp(2 pi i / p) and psi the Legendre symbol.  The enumerated LHS
is purely imaginary, so the square root has to be read as sqrt(-p) = i sqrt(p)
(the Gauss sum of psi).  The report also carries the real-sqrt(p) reading and
its distance from the LHS.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _parallel
from .bernoulli import DirichletCharacter, gen_bernoulli
from .errors import DomainError, InvariantError
from .primes import is_prime
from .report import Table

__all__ = ["IdentityReport", "verify_identity", "triple_set_size", "enumerate_triples", "identity_table"]

MAX_P = 200
ENUMERATION_CHECK_MAX = 50


@dataclass(frozen=True)
class IdentityReport:
    p: int
    lhs: complex
    rhs: complex
    abs_diff: float
    triple_count: int
    b1: Fraction = Fraction(0)
    b3: Fraction = Fraction(0)
    rhs_literal: complex = 0j
    abs_diff_literal: float = 0.0
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.p % 4 != 3:
            raise InvariantError("p must be 3 mod 4")
        if self.triple_count != (self.p - 1) * (self.p - 2):
            raise InvariantError(f"|S| = {self.triple_count}, expected {(self.p - 1) * (self.p - 2)}")


def enumerate_triples(p: int) -> list[tuple[int, int, int]]:
    """S by brute force over all (p-1)^3 candidates.  Only for small p."""
    return [(a, b, c)
            for a in range(1, p) for b in range(1, p) for c in range(1, p)
            if (a * b + b * c + c * a) % p == 0]


def triple_set_size(p: int) -> int:
    """(p-1)(p-2), checked against brute force for p <= 50."""
    if p < 3:
        raise DomainError("p must be >= 3")
    size = (p - 1) * (p - 2)
    if p <= ENUMERATION_CHECK_MAX:
        got = len(enumerate_triples(p))
        if got != size:
            raise InvariantError(f"enumeration found {got} triples, closed form says {size}")
    return size


def _row(a: int, p: int, psi: np.ndarray, inv_one_minus: np.ndarray) -> tuple[complex, int]:
    """Contribution of all (a, b, c) in S with first coordinate a."""
    b = np.arange(1, p, dtype=np.int64)
    s = (a + b) % p
    b = b[s != 0]
    s = s[s != 0]
    inv_s = np.array([pow(int(v), p - 2, p) for v in s.tolist()], dtype=np.int64)
    c = (-a * b % p) * inv_s % p
    keep = c != 0
    b, c = b[keep], c[keep]
    sign = psi[a] * psi[b] * psi[c]
    terms = sign * inv_one_minus[a] * inv_one_minus[b] * inv_one_minus[c]
    return _parallel.complex_fsum(terms), int(len(b))


def _lhs(p: int) -> tuple[complex, int]:
    psi = np.array(DirichletCharacter.legendre(p).values, dtype=np.float64)
    k = np.arange(p, dtype=np.float64)
    inv_one_minus = np.zeros(p, dtype=np.complex128)
    inv_one_minus[1:] = 1.0 / (1.0 - np.exp(2j * math.pi * k[1:] / p))
    rows = _parallel.map_ordered(lambda a: _row(a, p, psi, inv_one_minus), list(range(1, p)))
    total = _parallel.complex_fsum(np.array([r[0] for r in rows]))
    return total, sum(r[1] for r in rows)


def verify_identity(p: int) -> IdentityReport:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p % 4 != 3:
        raise DomainError(f"p = {p} is not 3 mod 4")
    if p > MAX_P:
        raise DomainError(f"p = {p} exceeds {MAX_P}")
    lhs, count = _lhs(p)
    chi = DirichletCharacter.legendre(p)
    b1 = gen_bernoulli(chi, 1)
    b3 = gen_bernoulli(chi, 3)
    bracket = float(Fraction(p + 1, 4) * b1 + b3 / 6)
    root = math.sqrt(p)
    rhs = complex(0.0, -root * bracket)
    rhs_literal = complex(-root * bracket, 0.0)
    notes = {"sqrt_convention": "sqrt(-p) = i sqrt(p)",
             "lhs_real_residue": abs(lhs.real), "lhs_imag_residue": abs(lhs.imag)}
    return IdentityReport(p, lhs, rhs, abs(lhs - rhs), count, b1, b3,
                          rhs_literal, abs(lhs - rhs_literal), notes)


def identity_table(primes) -> Table:
    t = Table(["p", "triple_count", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff",
               "B1", "B3", "rhs_literal_re", "abs_diff_literal"],
              metadata={"rhs": "-sqrt(-p) ((p+1)/4 B_1 + B_3/6)", "literal": "-sqrt(p) ((p+1)/4 B_1 + B_3/6)"})
    for p in primes:
        r = verify_identity(int(p))
        t.add(r.p, r.triple_count, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.abs_diff,
              r.b1, r.b3, r.rhs_literal.real, r.abs_diff_literal)
    return t
