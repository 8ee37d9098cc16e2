"""Prime zeta function P(z) = sum_p p^-z: partial sums, integral-subtracted
regularization, inclusion-exclusion over squarefree prime products, and the
remainder R(z) = sum_{m>=2} P(mz)/m linking P to log zeta.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy import integrate

from . import _parallel
from .errors import DomainError
from .primes import PrimeTable, shared_table
from .report import Table

__all__ = [
    "PrimeZetaValue",
    "p_partial",
    "p_hat",
    "p_hat_integral",
    "squarefree_terms",
    "p_inclusion_exclusion",
    "inclusion_exclusion_detail",
    "expansion_coefficient",
    "r_remainder",
    "special_values_report",
    "p_hat_growth_table",
]

PRODUCT_CAP = 200
METHODS = ("partial", "regularized", "inclusion-exclusion")


@dataclass(frozen=True)
class PrimeZetaValue:
    z: complex
    value: complex
    method: str
    cutoffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")


def _table(table: PrimeTable | None, n: int) -> PrimeTable:
    if table is None:
        return shared_table(n)
    table.require(n)
    return table


def p_partial(z, n: int, table: PrimeTable | None = None) -> complex:
    """P_n(z): sum of p_k^-z over the first n primes."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return 0j
    z = complex(z)
    table = _table(table, n)
    logp = np.log(table.primes[:n].astype(np.float64))
    return _parallel.complex_fsum(np.exp(-z * logp))


def p_hat_integral(z, n: int, split: float | None = None) -> complex:
    """Integral of (t log t)^-z over t in [1, n], for 0 < Re z < 1.

    With u = log t the integrand is e^{u(1-z)} u^{-z}.  On [0, a] the
    singular factor is integrated term by term,
        sum_j (1-z)^j / j! * a^{j+1-z} / (j+1-z),
    and the smooth remainder on [a, log n] by adaptive quadrature.  The
    default split a = min(1, 2/|1-z|) keeps the series free of cancellation.
    """
    z = complex(z)
    if not (0.0 < z.real < 1.0):
        raise DomainError("integral subtraction is defined for 0 < Re z < 1")
    if n < 1:
        raise DomainError("n must be >= 1")
    upper = math.log(n)
    if split is None:
        split = min(1.0, 2.0 / abs(1.0 - z))
    a = min(split, upper)
    head = 0j
    if a > 0:
        la = math.log(a)
        term = 1 + 0j  # (1-z)^j a^j / j!
        for j in range(200):
            contrib = term * cmath.exp((1.0 - z) * la) / (j + 1.0 - z)
            head += contrib
            if j > 5 and abs(contrib) < 1e-18 * max(1.0, abs(head)):
                break
            term = term * (1.0 - z) * a / (j + 1)
    tail = 0j
    if upper > a:
        def f(u, part):
            v = cmath.exp(u * (1.0 - z) - z * math.log(u))
            return v.real if part == 0 else v.imag

        knots = [a] + [float(k) for k in range(math.floor(a) + 1, math.ceil(upper))] + [upper]
        pieces = []
        for lo, hi in zip(knots[:-1], knots[1:]):
            # |integrand| <= e^{hi(1-x)} lo^{-x} with x = Re z
            size = math.exp(hi * (1.0 - z.real) - z.real * math.log(lo)) * (hi - lo)
            re = _quad(f, lo, hi, 0, size)
            im = _quad(f, lo, hi, 1, size) if z.imag != 0.0 else 0.0
            pieces.append(complex(re, im))
        tail = _parallel.complex_fsum(np.array(pieces))
    return head + tail


def _quad(f, lo: float, hi: float, part: int, size: float) -> float:
    with warnings.catch_warnings():
        # the returned error estimate is checked instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(f, lo, hi, args=(part,), limit=500, epsabs=1e-15 * size, epsrel=1e-12)
    if err > 1e-10 * max(size, abs(val)):
        raise ArithmeticError(f"quadrature did not converge on [{lo}, {hi}] (error {err:.3g})")
    return val


def p_hat(z, n: int, table: PrimeTable | None = None) -> complex:
    """P_hat_n(z) = P_n(z) - integral_1^n dt / (t log t)^z, for 0 < Re z < 1."""
    z = complex(z)
    if not (0.0 < z.real < 1.0):
        raise DomainError("p_hat is defined for 0 < Re z < 1")
    if n < 2:
        raise DomainError("n must be >= 2")
    return p_partial(z, n, table) - p_hat_integral(z, n)


def p_hat_growth_table(zs=(0.6, 0.7, 0.8, 0.9), n: int = 10**5, table: PrimeTable | None = None) -> Table:
    """P_hat_n(z) - log(1/(1-z)) over real z; boundedness is only observed."""
    t = Table(["z", "p_hat_re", "p_hat_im", "log_1_over_1mz", "difference_re"], metadata={"n": n})
    for z in zs:
        v = p_hat(z, n, table)
        ref = math.log(1.0 / (1.0 - z))
        t.add(float(z), v.real, v.imag, ref, v.real - ref)
    return t


# ------------------------------------------------ inclusion-exclusion (Mobius)


def squarefree_terms(M: int, depth: int, cap: int = PRODUCT_CAP) -> tuple[list[tuple[int, int]], list[int]]:
    """Squarefree products of distinct primes among p_1..p_M with at most
    ``depth`` factors, as (product, sign) sorted by product.  Products above
    ``cap`` are returned separately as dropped.
    """
    if M < 0 or depth < 0:
        raise DomainError("M and depth must be nonnegative")
    primes = [int(p) for p in shared_table(max(M, 1)).primes[:M]]
    kept = [(1, 1)]
    dropped = []
    for k in range(1, min(depth, M) + 1):
        for combo in combinations(primes, k):
            m = math.prod(combo)
            if m > cap:
                dropped.append(m)
            else:
                kept.append((m, -1 if k % 2 else 1))
    kept.sort()
    dropped.sort()
    return kept, dropped


def _log_zeta(w: complex) -> complex:
    from .zeta_core import zeta_hat

    if w.real > 40.0:
        # zeta(w) - 1 ~ 2^-w; log1p keeps the tiny increment.
        return complex(np.log1p(complex(_zeta_minus_one_large(w))))
    return cmath.log(zeta_hat(w))


def _zeta_minus_one_large(w: complex) -> complex:
    k = np.arange(2, 40, dtype=np.float64)
    return complex(np.sum(np.exp(-w * np.log(k))[::-1]))


@dataclass
class InclusionExclusion:
    z: complex
    value: complex
    terms: list[tuple[int, int, complex, bool]]  # (product, sign, log zeta(mz), valid)
    dropped: list[int]
    dropped_bound: float
    M: int
    depth: int

    def as_value(self) -> PrimeZetaValue:
        return PrimeZetaValue(self.z, self.value, "inclusion-exclusion",
                              {"M": self.M, "depth": self.depth, "cap": PRODUCT_CAP})


def inclusion_exclusion_detail(z, M: int, depth: int) -> InclusionExclusion:
    z = complex(z)
    if z.real <= 0.5 and M > 0:
        raise DomainError("inclusion-exclusion needs Re z > 1/2")
    kept, dropped = squarefree_terms(M, depth)
    terms = []
    parts = []
    for m, sign in kept:
        w = m * z
        lz = _log_zeta(w)
        terms.append((m, sign, lz, w.real > 1.0))
        parts.append(sign * lz / m)
    value = _parallel.complex_fsum(np.array(parts))
    # |log zeta(w)| <= 2 * 2^-Re w once Re w >= 2
    bound = sum(2.0 * 2.0 ** (-m * z.real) / m for m in dropped) if z.real * 2 >= 1 else math.inf
    return InclusionExclusion(z, value, terms, dropped, bound, M, depth)


def p_inclusion_exclusion(z, M: int, depth: int) -> complex:
    """P(z) from log zeta(z) - sum (1/p) log zeta(pz) + sum 1/(pq) log zeta(pqz) - ...

    Products use the first M primes, at most ``depth`` distinct factors,
    and stop at 200.  ``M = 0`` returns log zeta(z).
    """
    return inclusion_exclusion_detail(z, M, depth).value


def expansion_coefficient(m: int, M: int, depth: int) -> Fraction:
    """Accumulated coefficient of P(mz)/m when every log zeta(dz)/d term of the
    expansion is itself expanded as sum_j P(jdz)/j.  Exact rational.
    """
    kept, _ = squarefree_terms(M, depth)
    total = Fraction(0)
    for d, sign in kept:
        if m % d == 0:
            j = m // d
            # (sign/d) * (1/j) P(jd z) = sign * P(mz)/m
            total += Fraction(sign, d) * Fraction(1, j) * m
    return total


def r_remainder(z, depth: int, n: int = 10**5, table: PrimeTable | None = None) -> complex:
    """R(z) ~ sum_{m=2}^{depth} P(mz)/m, each P by a partial sum over n primes."""
    z = complex(z)
    if z.real <= 0.5:
        raise DomainError("R(z) needs Re z > 1/2")
    if depth <= 1:
        return 0j
    parts = [p_partial(m * z, n, table) / m for m in range(2, depth + 1)]
    return _parallel.complex_fsum(np.array(parts))


def r_tail_bound(z, depth: int) -> float:
    """Crude bound on the omitted terms m > depth: 2^{-depth Re z} scale."""
    return 2.0 ** (-depth * complex(z).real)


# ------------------------------------------------------- special values


CLAIMED_SPECIAL = ((0, 0.0, "P(0) = 0"), (-1, -math.log(2.0), "P(-1) = -log 2"),
                   (-3, -math.log(4.0), "P(-3) = -log 4"))


def special_values_report(b_terms: int = 20) -> Table:
    """Claimed P(0), P(-1), P(-3) against P_hat(z) = log(-zeta_hat(z) / b(1-z)).

    b(1-z) is the partial sum b_n(1-z) at n = ``b_terms``; at integer
    arguments it no longer depends on n once n >= 1-z.
    """
    from .bernoulli import b_partial_value
    from .zeta_core import zeta_hat

    t = Table(["z", "claim", "claimed", "computed_re", "computed_im", "abs_diff", "b_value", "zeta_hat", "flags"],
              metadata={"route": "log(-zeta_hat(z)/b_n(1-z))", "b_terms": b_terms})
    for z, claimed, label in CLAIMED_SPECIAL:
        flags = []
        bval = b_partial_value(Fraction(1 - z), b_terms)
        zh = zeta_hat(z)
        if 1 - z > b_terms:
            flags.append("b-not-stabilized")
        if bval == 0:
            flags.append("b-zero")
            computed = complex("nan")
        else:
            computed = cmath.log(-zh / float(bval))
        t.add(z, label, claimed, computed.real, computed.imag, abs(computed - claimed),
              str(bval), zh.real, ";".join(flags))
    return t
