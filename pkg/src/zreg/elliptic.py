"""Elliptic curves over Q: point counts mod p and truncated L(E, z) Euler products.

Curves are stored in long Weierstrass form
    y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6;
the short form Y^2 + aY = X^3 + bX^2 + cX + d (input "paper:a,b,c,d") maps to
(a1, a2, a3, a4, a6) = (0, b, a, c, d).

``N_p`` is the affine count over F_p, so ``a_p = p - N_p`` is the usual trace
p + 1 - #E(F_p).  The local factor 1 - a_p p^-z + p^(1-2z) is applied at every
prime by default, bad ones included; ``bad_primes="standard"`` swaps in
1 - a_p p^-z there instead.

Out of scope: rank computation and the invariants on the other side of the
BSD formula (Sha, regulator, Tamagawa numbers, real period, torsion).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from . import _parallel
from .errors import DomainError, InvariantError, VanishingFactorError
from .primes import PrimeTable, is_prime, shared_table
from .report import Table

__all__ = [
    "EllipticCurve",
    "LocalData",
    "count_points",
    "count_points_enumerate",
    "count_points_character",
    "local_data",
    "trace_array",
    "l_partial",
    "l_window_ratio",
    "l_window_table",
    "vanishing_probe",
    "parse_curve",
    "load_curves",
    "bundled_curves",
]

ENUMERATION_MAX = 1000
COUNT_MAX = 10**6


@dataclass(frozen=True)
class EllipticCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    label: str = ""

    def __post_init__(self):
        if self.discriminant == 0:
            raise InvariantError(f"singular curve {self.coefficients}")

    @classmethod
    def from_short(cls, a: int, b: int, c: int, d: int, label: str = "") -> "EllipticCurve":
        """Y^2 + aY = X^3 + bX^2 + cX + d."""
        return cls(0, b, a, c, d, label)

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.coefficients
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def good_reduction(self, p: int) -> bool:
        return self.discriminant % p != 0

    def spec(self) -> str:
        return ",".join(str(c) for c in self.coefficients)


@dataclass(frozen=True)
class LocalData:
    p: int
    N_p: int
    a_p: int
    good_reduction: bool

    def __post_init__(self):
        if not (0 <= self.N_p <= 2 * self.p):
            raise InvariantError(f"N_p = {self.N_p} out of range for p = {self.p}")
        if self.a_p != self.p - self.N_p:
            raise InvariantError("a_p must equal p - N_p")


def parse_curve(text: str) -> EllipticCurve:
    """``"a1,a2,a3,a4,a6"`` or ``"paper:a,b,c,d"``; an optional label follows whitespace."""
    text = text.strip()
    body, _, label = text.partition(" ")
    label = label.strip()
    try:
        if body.startswith("paper:"):
            vals = [int(v) for v in body[6:].split(",")]
            if len(vals) != 4:
                raise ValueError
            return EllipticCurve.from_short(*vals, label=label)
        vals = [int(v) for v in body.split(",")]
        if len(vals) != 5:
            raise ValueError
    except ValueError as exc:
        raise DomainError(f"cannot parse curve spec {text!r}") from exc
    return EllipticCurve(*vals, label=label)


def load_curves(path) -> list[EllipticCurve]:
    curves = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            curves.append(parse_curve(line))
    return curves


def bundled_curves() -> dict[str, EllipticCurve]:
    ref = resources.files("zreg") / "data" / "curves.txt"
    with resources.as_file(ref) as p:
        return {c.label: c for c in load_curves(p)}


# ----------------------------------------------------------- point counting


def count_points_enumerate(E: EllipticCurve, p: int) -> int:
    """Affine solutions over F_p by checking all p^2 pairs."""
    a1, a2, a3, a4, a6 = (c % p for c in E.coefficients)
    x = np.arange(p, dtype=np.int64)
    rhs = ((((x + a2) * x % p + a4) * x) % p + a6) % p
    y = np.arange(p, dtype=np.int64)
    count = 0
    for xv, r in zip(x.tolist(), rhs.tolist()):
        lhs = (y * (y + a1 * xv + a3)) % p
        count += int(np.count_nonzero(lhs == r))
    return count


def _quadratic_character(p: int) -> np.ndarray:
    if p <= ENUMERATION_MAX:
        return _small_character(p)
    return _build_character(p)


@lru_cache(maxsize=256)
def _small_character(p: int) -> np.ndarray:
    return _build_character(p)


def _build_character(p: int) -> np.ndarray:
    chi = np.full(p, -1, dtype=np.int64)
    sq = np.arange((p + 1) // 2, dtype=np.int64)
    chi[(sq * sq) % p] = 1
    chi[0] = 0
    return chi


def count_points_character(E: EllipticCurve, p: int) -> int:
    """N_p = sum_x (1 + chi(4x^3 + b2 x^2 + 2 b4 x + b6)) for odd p >= 5."""
    if p < 5:
        raise DomainError("character-sum count needs p >= 5")
    b2, b4, b6, _ = (b % p for b in E.b_invariants)
    x = np.arange(p, dtype=np.int64)
    if p < 700_000:
        # 4x^3 + ... stays below 2^63, so one reduction suffices
        g = (((4 * x + b2) * x + 2 * b4) * x + b6) % p
    else:
        g = (((4 * x + b2) % p * x % p + 2 * b4) % p * x % p + b6) % p
    return int(p + _quadratic_character(p)[g].sum())


def count_points(E: EllipticCurve, p: int, method: str = "auto") -> LocalData:
    """Affine point count and trace at p.

    ``auto`` enumerates for p <= 1000 (and always for p = 2, 3) and uses the
    character sum above that.
    """
    if p > COUNT_MAX:
        raise DomainError(f"p = {p} exceeds the counting cap {COUNT_MAX}")
    if method == "auto":
        method = "enumerate" if p <= ENUMERATION_MAX else "character"
    if p < 5:
        method = "enumerate"
    if method == "enumerate":
        n = count_points_enumerate(E, p)
    elif method == "character":
        n = count_points_character(E, p)
    else:
        raise DomainError(f"unknown method {method!r}")
    return LocalData(p, n, p - n, E.good_reduction(p))


def local_data(E: EllipticCurve, p: int) -> LocalData:
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return count_points(E, p)


_trace_cache: dict[tuple[tuple[int, ...], int], np.ndarray] = {}


def trace_array(E: EllipticCurve, n: int, table: PrimeTable | None = None) -> np.ndarray:
    """a_p for the first n primes (cached per curve)."""
    table = shared_table(n) if table is None else table
    table.require(n)
    key = E.coefficients
    have = _trace_cache.get((key, 0))
    start = 0 if have is None else len(have)
    if start < n:
        ps = table.primes[start:n].tolist()
        new = _parallel.map_ordered(lambda p: p - _count_fast(E, p), ps)
        arr = np.array(new, dtype=np.int64)
        have = arr if have is None else np.concatenate([have, arr])
        _trace_cache[(key, 0)] = have
    return have[:n]


def _count_fast(E: EllipticCurve, p: int) -> int:
    return count_points_enumerate(E, p) if p < 5 else count_points_character(E, p)


# ---------------------------------------------------------------- L-series


def _local_inverse(E: EllipticCurve, z: complex, primes: np.ndarray, ap: np.ndarray,
                   bad_primes: str) -> np.ndarray:
    logp = np.log(primes.astype(np.float64))
    pz = np.exp(-z * logp)
    den = 1.0 - ap * pz + np.exp((1.0 - 2.0 * z) * logp)
    if bad_primes == "standard":
        bad = np.array([not E.good_reduction(int(p)) for p in primes.tolist()], dtype=bool)
        den = np.where(bad, 1.0 - ap * pz, den)
    elif bad_primes != "uniform":
        raise DomainError(f"unknown bad_primes mode {bad_primes!r}")
    if np.any(np.abs(den) < 1e-14):
        raise VanishingFactorError("local factor vanishes")
    return 1.0 / den


def l_partial(E: EllipticCurve, z, n: int, table: PrimeTable | None = None,
              bad_primes: str = "uniform") -> complex:
    """Product of 1/(1 - a_p p^-z + p^(1-2z)) over the first n primes."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return complex(1.0)
    z = complex(z)
    table = shared_table(n) if table is None else table
    ap = trace_array(E, n, table)
    return _parallel.ordered_product(_local_inverse(E, z, table.primes[:n], ap, bad_primes))


def l_window_ratio(E: EllipticCurve, z, n: int, table: PrimeTable | None = None,
                   bad_primes: str = "uniform") -> complex:
    """Product of local factors over prime indices n+1 .. 2n."""
    if n < 1:
        raise DomainError("n must be >= 1")
    z = complex(z)
    table = shared_table(2 * n) if table is None else table
    ap = trace_array(E, 2 * n, table)
    return _parallel.ordered_product(
        _local_inverse(E, z, table.primes[n : 2 * n], ap[n : 2 * n], bad_primes))


def l_range_product(E: EllipticCurve, z, lo: int, hi: int, table: PrimeTable | None = None,
                    bad_primes: str = "uniform") -> complex:
    """Product of local factors over prime indices lo+1 .. hi."""
    z = complex(z)
    table = shared_table(hi) if table is None else table
    ap = trace_array(E, hi, table)
    return _parallel.ordered_product(
        _local_inverse(E, z, table.primes[lo:hi], ap[lo:hi], bad_primes))


def l_window_table(E: EllipticCurve, z, ladder, table: PrimeTable | None = None) -> Table:
    z = complex(z)
    t = Table(["n", "re", "im"], metadata={"curve": E.spec(), "label": E.label, "z": z,
                                           "quantity": "window product n+1..2n"})
    for n in sorted(int(v) for v in ladder):
        v = l_window_ratio(E, z, n, table)
        t.add(n, v.real, v.imag)
    return t


def vanishing_probe(E: EllipticCurve, n_ladder, table: PrimeTable | None = None) -> Table:
    """|L_n(E, 1)| along a ladder with fitted slopes against log n and log log n.

    A partial product at z = 1 shrinking like (log n)^-r suggests order of
    vanishing r; the slopes are commentary only.
    """
    ladder = [int(v) for v in n_ladder]
    if ladder != sorted(ladder):
        raise DomainError("ladder must be ascending")
    t = Table(["n", "re", "im", "log_abs", "log_n", "log_log_n"],
              metadata={"curve": E.spec(), "label": E.label, "z": 1.0})
    for n in ladder:
        v = l_partial(E, 1.0, n, table)
        t.add(n, v.real, v.imag, math.log(abs(v)), math.log(n), math.log(math.log(n)) if n > 2 else float("nan"))
    if len(ladder) >= 2:
        y = np.array(t.column("log_abs"))
        t.metadata["slope_log_n"] = float(np.polyfit(np.array(t.column("log_n")), y, 1)[0])
        lln = np.array(t.column("log_log_n"))
        ok = np.isfinite(lln)
        if ok.sum() >= 2:
            t.metadata["slope_log_log_n"] = float(np.polyfit(lln[ok], y[ok], 1)[0])
        t.metadata["commentary"] = ("partial products at z=1 decaying like (log n)^-r would point to "
                                    "order of vanishing r; not asserted")
    return t
