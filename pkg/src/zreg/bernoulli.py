"""Exact Bernoulli arithmetic and the b_n(z) partial-sum polynomials.

Conventions
-----------
``b_r`` are the signed Bernoulli numbers with b_1 = -1/2 (generating function
t/(e^t - 1)).  The positive convention ``B_k = |b_{2k}|`` (B_1 = 1/6,
B_2 = 1/30, ...) is available through :func:`positive_bernoulli`.

``b_partial_poly(n)`` is sum_{r=0}^{n} C(z, r) b_r.  The r = 0 term (the
constant 1) is included so that b_2(z) = (z-3)(z-4)/12.

b_n(k) is independent of n once n >= k for integer k, and for even n the
polynomial vanishes at z = 3, 5, ..., n+1 and at z = n+2; ``g_factor`` divides
those linear factors out.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import CapacityError, DomainError, InvariantError, NonDivisibilityError

__all__ = [
    "RationalPolynomial",
    "DirichletCharacter",
    "bernoulli_numbers",
    "positive_bernoulli",
    "bernoulli_poly",
    "bernoulli_poly_coeffs",
    "binom_poly",
    "b_partial_poly",
    "b_partial_value",
    "b_extrapolated",
    "trivial_zeros",
    "g_factor",
    "b_limit",
    "zeta_from_b",
    "gen_bernoulli",
    "gen_bernoulli_series",
]

MAX_BERNOULLI = 200
MAX_POLY = 100
MAX_G = 40


# ------------------------------------------------------------- polynomials


class RationalPolynomial:
    """Polynomial with Fraction coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "RationalPolynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @classmethod
    def x(cls) -> "RationalPolynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalPolynomial([other])
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = f"({c})" if c.denominator != 1 else str(c)
                if mono:
                    coef += "*"
            parts.append(coef + mono)
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other) -> "RationalPolynomial":
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> "RationalPolynomial":
        return RationalPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "RationalPolynomial":
        return self + (-_poly(other))

    def __rsub__(self, other) -> "RationalPolynomial":
        return _poly(other) - self

    def __mul__(self, other) -> "RationalPolynomial":
        other = _poly(other)
        if not self.coeffs or not other.coeffs:
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def divmod(self, other: "RationalPolynomial") -> tuple["RationalPolynomial", "RationalPolynomial"]:
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading()
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            quot[k - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return RationalPolynomial(quot), RationalPolynomial(rem[:dq])

    def exact_div(self, other) -> "RationalPolynomial":
        q, r = self.divmod(_poly(other))
        if not r.is_zero():
            raise NonDivisibilityError(f"nonzero remainder {r}")
        return q

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (int, Fraction)) else float(c))
        return acc

    def evaluate_complex(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + float(c)
        return acc

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "RationalPolynomial":
        return cls(Fraction(s) for s in data)


def _poly(x) -> RationalPolynomial:
    if isinstance(x, RationalPolynomial):
        return x
    return RationalPolynomial([x])


# --------------------------------------------------------- Bernoulli numbers


@lru_cache(maxsize=1)
def _bernoulli_table() -> tuple[Fraction, ...]:
    b = [Fraction(1)]
    for m in range(1, MAX_BERNOULLI + 1):
        s = Fraction(0)
        c = 1  # C(m+1, k)
        for k in range(m):
            s += c * b[k]
            c = c * (m + 1 - k) // (k + 1)
        b.append(-s / (m + 1))
    return tuple(b)


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """Signed b_0 .. b_{n_max}: 1, -1/2, 1/6, 0, -1/30, ..."""
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    if n_max > MAX_BERNOULLI:
        raise CapacityError(f"n_max {n_max} exceeds {MAX_BERNOULLI}")
    return list(_bernoulli_table()[: n_max + 1])


def positive_bernoulli(k: int) -> Fraction:
    """B_k = |b_{2k}| for k >= 1 (B_1 = 1/6, B_2 = 1/30, B_3 = 1/42, ...)."""
    if k < 1:
        raise DomainError("k must be >= 1")
    return abs(bernoulli_numbers(2 * k)[2 * k])


def bernoulli_poly_coeffs(n: int) -> RationalPolynomial:
    """B_n(x) = sum_k C(n, k) b_k x^(n-k) as a polynomial."""
    if n < 0 or n > MAX_POLY:
        raise CapacityError(f"n must be in [0, {MAX_POLY}]")
    b = bernoulli_numbers(n)
    coeffs = [Fraction(0)] * (n + 1)
    for k in range(n + 1):
        coeffs[n - k] = math.comb(n, k) * b[k]
    return RationalPolynomial(coeffs)


def bernoulli_poly(n: int, x) -> Fraction:
    """B_n(x) evaluated exactly at rational x."""
    return bernoulli_poly_coeffs(n)(Fraction(x))


# ------------------------------------------------------------ b_n(z) family


@lru_cache(maxsize=None)
def binom_poly(r: int) -> RationalPolynomial:
    """C(z, r) = z(z-1)...(z-r+1)/r! as a polynomial in z."""
    p = RationalPolynomial([1])
    for j in range(r):
        p = p * RationalPolynomial([Fraction(-j, j + 1), Fraction(1, j + 1)])
    return p


@lru_cache(maxsize=None)
def b_partial_poly(n: int) -> RationalPolynomial:
    """b_n(z) = sum_{r=0}^{n} C(z, r) b_r, exact."""
    if n < 0 or n > MAX_POLY:
        raise CapacityError(f"n must be in [0, {MAX_POLY}]")
    b = bernoulli_numbers(n)
    p = RationalPolynomial()
    for r in range(n + 1):
        if b[r]:
            p = p + binom_poly(r) * b[r]
    return p


def b_partial_value(w, n: int):
    """b_n(w); exact Fraction for rational w, complex otherwise."""
    if isinstance(w, (int, Fraction)):
        return b_partial_poly(n)(Fraction(w))
    w = complex(w)
    if w.imag == 0 and w.real == round(w.real):
        return complex(float(b_partial_poly(n)(Fraction(int(round(w.real))))))
    b = bernoulli_numbers(n)
    acc = 0j
    c = 1 + 0j
    for r in range(n + 1):
        if r:
            c = c * (w - (r - 1)) / r
        if b[r]:
            acc += c * float(b[r])
    return acc


def b_extrapolated(w, n_values: Sequence[int]) -> tuple[complex, list[complex]]:
    """Richardson (polynomial-in-1/n) extrapolation of b_n(w) over even n.

    Returns the extrapolated value and the raw partial values.  This is the
    documented stand-in for the bracketed regularization of the Bernoulli
    series; for non-integer w the raw values typically diverge and the
    extrapolation only reports that behaviour.
    """
    ns = [int(n) for n in n_values]
    if any(n % 2 for n in ns) or len(ns) < 1:
        raise DomainError("extrapolation uses even n only")
    vals = [complex(b_partial_value(w, n)) for n in ns]
    # Neville's scheme at h = 1/n -> 0.
    h = [1.0 / n for n in ns]
    tab = list(vals)
    for k in range(1, len(ns)):
        for i in range(len(ns) - 1, k - 1, -1):
            tab[i] = (h[i - k] * tab[i] - h[i] * tab[i - 1]) / (h[i - k] - h[i])
    return tab[-1], vals


def trivial_zeros(n: int) -> list[int]:
    """Integer zeros of b_n(z) for even n: 3, 5, ..., n+1 and n+2."""
    if n < 2 or n % 2:
        raise DomainError("trivial zeros are defined for even n >= 2")
    return list(range(3, n + 2, 2)) + [n + 2]


def g_factor(n: int) -> RationalPolynomial:
    """Quotient g_n(z) of b_n(z) by (b_n/n!) (z-3)(z-5)...(z-(n+1))(z-(n+2))."""
    if n < 2 or n % 2 or n > MAX_G:
        raise DomainError(f"g_factor needs even n in [2, {MAX_G}]")
    lead = bernoulli_numbers(n)[n] / math.factorial(n)
    divisor = RationalPolynomial.from_roots(trivial_zeros(n), lead)
    return b_partial_poly(n).exact_div(divisor)


# -------------------------------------------------------- analytic bridges


def b_limit(z) -> complex:
    """b(z) = -z zeta_hat(1 - z); at z = 0 the removable value 1 (= b_n(0))."""
    from .zeta_core import zeta_hat

    z = complex(z)
    if abs(z) <= 1e-12:
        return complex(1.0)
    return -z * zeta_hat(1.0 - z)


@dataclass
class ZetaFromB:
    z: complex
    value: complex
    reference: complex
    b_value: complex
    p_hat: complex | None
    n_primes: int
    b_source: str
    flags: tuple[str, ...] = ()

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.reference)


def zeta_from_b(z, n_primes: int = 10**4, table=None, b_source: str = "limit",
                b_terms: Sequence[int] = (20, 22, 24, 26)) -> ZetaFromB:
    """Right-hand side -b(1-z) exp(P_hat_n(z)) against zeta_hat(z).

    ``b_source`` is ``"limit"`` (b from zeta_hat through the reflection) or
    ``"partial"`` (Richardson-extrapolated partial sums over ``b_terms``).
    When b(1-z) vanishes the result is zero and flagged without evaluating
    P_hat.
    """
    from .prime_zeta import p_hat
    from .zeta_core import zeta_hat

    z = complex(z)
    w = 1.0 - z
    flags: list[str] = []
    if b_source == "limit":
        bval = b_limit(w)
    elif b_source == "partial":
        bval, _ = b_extrapolated(w, b_terms)
        flags.append("b-partial-extrapolated")
    else:
        raise DomainError(f"unknown b_source {b_source!r}")
    try:
        ref = zeta_hat(z)
    except DomainError:
        ref = complex("nan")
        flags.append("no-reference")
    if abs(bval) < 1e-300:
        flags.append("b-zero")
        return ZetaFromB(z, 0j, ref, bval, None, n_primes, b_source, tuple(flags))
    ph = p_hat(z, n_primes, table)
    return ZetaFromB(z, -bval * cmath.exp(ph), ref, bval, ph, n_primes, b_source, tuple(flags))


# ----------------------------------------------------- Dirichlet characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Values chi(0), ..., chi(f-1) of a character of modulus f."""

    modulus: int
    values: tuple

    def __post_init__(self):
        f = self.modulus
        if f < 1 or len(self.values) != f:
            raise InvariantError("need exactly f values")
        vals = self.values
        for a in range(f):
            unit = math.gcd(a, f) == 1
            if (vals[a] == 0) == unit:
                raise InvariantError(f"chi({a}) must vanish iff gcd({a}, {f}) > 1")
        if vals[1 % f] != 1:
            raise InvariantError("chi(1) must be 1")
        for a in range(f):
            for b in range(f):
                if abs(vals[a * b % f] - vals[a] * vals[b]) > 1e-12:
                    raise InvariantError("character is not multiplicative")

    def __call__(self, a: int):
        return self.values[a % self.modulus]

    @property
    def is_real(self) -> bool:
        return all(isinstance(v, int) for v in self.values)

    @classmethod
    def trivial(cls, f: int = 1) -> "DirichletCharacter":
        return cls(f, tuple(1 if math.gcd(a, f) == 1 else 0 for a in range(f)))

    @classmethod
    def legendre(cls, p: int) -> "DirichletCharacter":
        """Quadratic character (Legendre symbol) modulo an odd prime p."""
        from .primes import is_prime

        if p < 3 or not is_prime(p):
            raise DomainError("Legendre character needs an odd prime")
        return cls(p, tuple(legendre_symbol(a, p) for a in range(p)))


def legendre_symbol(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def gen_bernoulli(chi: DirichletCharacter, n: int):
    """B_{n,chi} = f^(n-1) sum_{a=1}^{f} chi(a) B_n(a/f).

    Exact Fraction for real characters, complex otherwise.
    """
    if n < 0 or n > MAX_POLY:
        raise CapacityError(f"n must be in [0, {MAX_POLY}]")
    f = chi.modulus
    bn = bernoulli_poly_coeffs(n)
    scale = Fraction(f) ** (n - 1)
    if chi.is_real:
        return scale * sum((chi(a) * bn(Fraction(a, f)) for a in range(1, f + 1)), Fraction(0))
    acc = 0j
    for a in range(1, f + 1):
        acc += complex(chi(a)) * float(bn(Fraction(a, f)))
    return complex(float(scale) * acc)


def gen_bernoulli_series(chi: DirichletCharacter, order: int) -> list:
    """B_{0,chi} .. B_{order,chi} from the generating function by series division.

    sum_a chi(a) t e^{at} / (e^{ft} - 1) is expanded with exact power-series
    arithmetic; no Bernoulli numbers are used.  Real characters only.
    """
    if not chi.is_real:
        raise DomainError("series oracle implemented for real characters")
    f = chi.modulus
    m = order + 2
    # denominator (e^{ft} - 1)/t = sum_{k>=0} f^{k+1} t^k / (k+1)!
    den = [Fraction(f ** (k + 1), math.factorial(k + 1)) for k in range(m)]
    num = [Fraction(0)] * m
    for a in range(1, f + 1):
        c = chi(a)
        if c:
            for k in range(m):
                num[k] += c * Fraction(a**k, math.factorial(k))
    q = [Fraction(0)] * m
    for k in range(m):
        s = num[k] - sum(q[j] * den[k - j] for j in range(k))
        q[k] = s / den[0]
    return [q[k] * math.factorial(k) for k in range(order + 1)]
