"""Truncated and regularized zeta evaluations.

Partial sums and partial Euler products, the alternating series and its
accelerated limit ``zeta_hat``, the cutoff regularization, the prime-window
ratio f_n(z) and the reconstructions built from it, and a critical-line zero
scanner.  Limit claims are surfaced through :class:`ConvergenceTable` rows and
never asserted by the library itself.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from . import _parallel
from .errors import DomainError, InvariantError, PoleError, VanishingFactorError
from .numerics import log_h_factor, h_factor
from .primes import PrimeTable, shared_table, window
from .report import Table

__all__ = [
    "TruncationRecord",
    "ConvergenceTable",
    "partial_sum",
    "euler_product_partial",
    "alternating_partial",
    "zeta_hat",
    "zeta_hat_array",
    "zeta_hat_cutoff",
    "fn_ratio",
    "zeta_hat_from_ratio",
    "zeta_hat_from_products",
    "window_log_sum",
    "sigma_gap",
    "hardy_z",
    "scan_zeros",
    "convergence_table",
]

METHODS = ("partial-sum", "euler-product", "alternating", "cutoff-regularized", "ratio-reconstructed")
NEAR_POLE_TOL = 1e-8
VANISH_TOL = 1e-14  # |1 - p^-z| at roundoff level counts as zero
DEGENERATE_TOL = 1e-14


@dataclass(frozen=True)
class TruncationRecord:
    n: int
    z: complex
    value: complex
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise InvariantError("non-finite truncation value")


@dataclass
class ConvergenceTable:
    """Rows (n, value, reference, abs_err) for one z and one method."""

    z: complex
    method: str
    rows: list[tuple[int, complex, complex | None, float | None]] = field(default_factory=list)
    timestamp: str | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def add(self, n: int, value: complex, reference: complex | None = None) -> None:
        if self.rows and n <= self.rows[-1][0]:
            raise InvariantError("n must be strictly increasing across rows")
        err = None if reference is None else abs(value - reference)
        self.rows.append((int(n), complex(value), None if reference is None else complex(reference), err))

    @property
    def ns(self) -> list[int]:
        return [r[0] for r in self.rows]

    @property
    def values(self) -> list[complex]:
        return [r[1] for r in self.rows]

    def error_slope(self) -> float | None:
        """Least-squares slope of log(abs_err) against log(n)."""
        pts = [(math.log(n), math.log(e)) for n, _, _, e in self.rows if e is not None and e > 0]
        if len(pts) < 2:
            return None
        x, y = np.array(pts).T
        return float(np.polyfit(x, y, 1)[0])

    def to_table(self) -> Table:
        meta = {"z": self.z, "method": self.method, **self.extra}
        if self.timestamp is not None:
            meta["timestamp"] = self.timestamp
        t = Table(["n", "re", "im", "ref_re", "ref_im", "abs_err"], metadata=meta)
        for n, v, ref, err in self.rows:
            t.add(n, v.real, v.imag,
                  None if ref is None else ref.real,
                  None if ref is None else ref.imag,
                  err)
        return t

    def to_csv(self) -> str:
        return self.to_table().to_csv()

    def to_json(self) -> str:
        return self.to_table().to_json()


def _z(z) -> complex:
    return complex(z)


def _powers(z: complex, base: np.ndarray) -> np.ndarray:
    """base**(-z) through exp(-z log base) on the principal branch."""
    return np.exp(-z * np.log(base.astype(np.float64)))


def _table(table: PrimeTable | None, n: int) -> PrimeTable:
    if table is None:
        return shared_table(n)
    table.require(n)
    return table


def partial_sum(z, n: int) -> complex:
    """Sum of k^-z for k = 1..n (correctly rounded accumulation)."""
    if n < 1:
        raise DomainError("n must be >= 1")
    z = _z(z)
    k = np.arange(1, n + 1, dtype=np.float64)
    return _parallel.complex_fsum(_powers(z, k))


def alternating_partial(z, n: int) -> complex:
    """Sum of (-1)^(k-1) k^-z for k = 1..n."""
    if n < 1:
        raise DomainError("n must be >= 1")
    z = _z(z)
    k = np.arange(1, n + 1, dtype=np.float64)
    terms = _powers(z, k)
    terms[1::2] *= -1.0
    return _parallel.complex_fsum(terms)


def _factor_offsets(z: complex, primes: np.ndarray) -> np.ndarray:
    # (1 - p^-z)^-1 = 1 + d with d = p^-z / (1 - p^-z)
    x = _powers(z, primes)
    w = 1.0 - x
    small = np.abs(w) < VANISH_TOL
    if np.any(small):
        p = int(primes[np.argmax(small)])
        raise VanishingFactorError(f"1 - p^-z vanishes at p = {p}")
    return x / w


def euler_product_partial(z, n: int, table: PrimeTable | None = None) -> complex:
    """Product over the first n primes of (1 - p^-z)^-1, ascending order."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return complex(1.0)
    z = _z(z)
    table = _table(table, n)
    return _parallel.ordered_product(1.0 + _factor_offsets(z, table.primes[:n]))


def fn_ratio(z, n: int, table: PrimeTable | None = None) -> complex:
    """f_n(z): product of (1 - p_k^-z)^-1 over the window k = n+1 .. 2n."""
    z = _z(z)
    return _fn_pair(z, n, table)[0]


def _fn_pair(z: complex, n: int, table: PrimeTable | None) -> tuple[complex, complex]:
    """(f_n, f_n - 1). Near 1 the offset is accumulated directly; elsewhere the plain product is kept."""
    table = _table(table, 2 * n)
    d = _factor_offsets(z, window(table, n))
    f = _parallel.ordered_product(1.0 + d)
    if abs(f) < 0.5:
        return f, f - 1.0
    e = _parallel.ordered_product_m1(d)
    return 1.0 + e, e


def sigma_gap(z, n: int, table: PrimeTable | None = None) -> complex:
    """Partial sum minus partial Euler product at the same n."""
    return partial_sum(z, n) - euler_product_partial(z, n, table)


# ---------------------------------------------------------------- zeta_hat

_LOG_BORWEIN = math.log(3.0 + math.sqrt(8.0))


@lru_cache(maxsize=64)
def _borwein_weights(n: int) -> np.ndarray:
    # eta(s) ~ sum_k w_k (k+1)^-s with w_k = (-1)^k (d_n - d_k) / d_n.
    d = []
    acc = 0
    f_num = math.factorial(n - 1)  # (n+i-1)! at i=0
    for i in range(n + 1):
        if i > 0:
            f_num *= n + i - 1
        acc += Fraction(n * f_num * 4**i, math.factorial(n - i) * math.factorial(2 * i))
        d.append(acc)
    dn = d[-1]
    w = np.array([float((dn - d[k]) / dn) for k in range(n)])
    w[1::2] *= -1.0
    w.setflags(write=False)
    return w


def _borwein_terms(t_abs: float, tol: float = 1e-17) -> int:
    n = (0.5 * math.pi * t_abs + math.log(1.0 + 2.0 * t_abs) + math.log(3.0 / tol)) / _LOG_BORWEIN
    return int(math.ceil(n)) + 2


def _eta_array(s: np.ndarray) -> np.ndarray:
    n = _borwein_terms(float(np.max(np.abs(s.imag))) if s.size else 0.0)
    w = _borwein_weights(n)
    logk = np.log(np.arange(1, n + 1, dtype=np.float64))
    powers = np.exp(-np.outer(s, logk))
    # Compensated row sums keep the result independent of BLAS ordering.
    return np.array([_parallel.complex_fsum(row * w) for row in powers])


def _check_pole(z: complex) -> None:
    if abs(z - 1.0) <= 1e-12:
        raise PoleError("zeta has a pole at z = 1")
    if abs(1.0 - 2.0 ** (1.0 - z)) < NEAR_POLE_TOL:
        raise PoleError(f"1 - 2^(1-z) vanishes near z = {z} (alternating regularization singular)")


def zeta_hat_array(zs: Iterable[complex]) -> np.ndarray:
    """Vectorized :func:`zeta_hat` for points with Re z >= 0."""
    s = np.asarray(list(zs), dtype=np.complex128)
    for z in s.tolist():
        if z.real < 0:
            raise DomainError("zeta_hat_array requires Re z >= 0")
        _check_pole(z)
    eta = _eta_array(s)
    return eta / (1.0 - np.exp((1.0 - s) * math.log(2.0)))


def zeta_hat(z) -> complex:
    """Regularized zeta via the accelerated alternating series.

    Uses Chebyshev-weighted (Borwein) acceleration of the alternating
    Dirichlet series for Re z >= 0 and the functional equation below that.
    """
    z = _z(z)
    _check_pole(z)
    if z.real < 0:
        return h_factor(z) * zeta_hat(1.0 - z)
    return complex(zeta_hat_array([z])[0])


def zeta_hat_cutoff(z, n: int) -> complex:
    """Partial sum minus the cutoff term n^(1-z)/(1-z)."""
    z = _z(z)
    if abs(z - 1.0) <= 1e-12:
        raise PoleError("cutoff regularization has a pole at z = 1")
    return partial_sum(z, n) - cmath.exp((1.0 - z) * math.log(n)) / (1.0 - z)


def _reconstruction_prefactor(z: complex, n: int) -> complex:
    if abs(z - 1.0) <= 1e-12:
        raise PoleError("reconstruction has a pole at z = 1")
    return cmath.exp((1.0 - z) * math.log(n)) / (z - 1.0)


def zeta_hat_from_ratio(z, n: int, table: PrimeTable | None = None, check: bool = False) -> complex:
    """(f_n - 2^(1-z)) / (f_n - 1) * n^(1-z) / (z - 1).

    With ``check=True`` the product form is evaluated as well and an
    :class:`InvariantError` raised if the two disagree beyond 1e-10 relative.
    """
    z = _z(z)
    pre = _reconstruction_prefactor(z, n)
    f, e = _fn_pair(z, n, table)
    if abs(e) < DEGENERATE_TOL:
        raise VanishingFactorError("f_n(z) - 1 is numerically zero")
    two = 2.0 ** (1.0 - z)
    value = (f - two) / e * pre
    if check:
        other = zeta_hat_from_products(z, n, table)
        if abs(value - other) > 1e-10 * max(abs(value), abs(other)):
            raise InvariantError(f"ratio and product reconstructions disagree: {value} vs {other}")
    return value


def zeta_hat_from_products(z, n: int, table: PrimeTable | None = None) -> complex:
    """(P_2n - 2^(1-z) P_n) / (P_2n - P_n) * n^(1-z) / (z - 1), P_k the partial Euler products."""
    z = _z(z)
    pre = _reconstruction_prefactor(z, n)
    pn = euler_product_partial(z, n, table)
    p2n = euler_product_partial(z, 2 * n, table)
    den = p2n - pn
    if abs(den) < DEGENERATE_TOL * abs(pn):
        raise VanishingFactorError("P_2n - P_n is numerically zero")
    return (p2n - 2.0 ** (1.0 - z) * pn) / den * pre


def window_log_sum(rho, n: int, depth: int, table: PrimeTable | None = None) -> complex:
    """Sum over the window n+1..2n and m = 1..depth of (p^-m rho + p^-m(1-rho)) / m."""
    if depth < 1:
        raise DomainError("depth must be >= 1")
    rho = _z(rho)
    table = _table(table, 2 * n)
    logp = np.log(window(table, n).astype(np.float64))
    terms = []
    for m in range(1, depth + 1):
        terms.append(np.exp(-m * rho * logp) / m)
        terms.append(np.exp(-m * (1.0 - rho) * logp) / m)
    return _parallel.complex_fsum(np.concatenate(terms))


# ---------------------------------------------------------- critical line


def _raw_phase(t: np.ndarray) -> np.ndarray:
    return np.array([log_h_factor(complex(0.5, x)).imag for x in t.tolist()])


def _zeta_line(t: np.ndarray) -> np.ndarray:
    return zeta_hat_array(0.5 + 1j * np.asarray(t, dtype=np.float64))


def _nearest_branch(raw: np.ndarray, guess: np.ndarray) -> np.ndarray:
    return raw + 2.0 * math.pi * np.round((guess - raw) / (2.0 * math.pi))


def hardy_z(t: Iterable[float]) -> np.ndarray:
    """Real function Re[e^{i theta} zeta_hat(1/2 + it)] on an ascending grid.

    theta = -arg H(1/2+it)/2, unwrapped along the grid, so the grid must be
    fine enough (spacing < 0.5) to track the phase.
    """
    t = np.asarray(list(t), dtype=np.float64)
    phase = np.unwrap(_raw_phase(t))
    return (np.exp(-0.5j * phase) * _zeta_line(t)).real


def _z_with_phase(t: np.ndarray, phase: np.ndarray) -> np.ndarray:
    return (np.exp(-0.5j * phase) * _zeta_line(t)).real


def scan_zeros(t_min: float, t_max: float, step: float = 0.05, tol: float = 1e-9) -> list[float]:
    """Ordinates of sign changes of :func:`hardy_z` on [t_min, t_max].

    Brackets are refined by bisection to ``tol``.  Where |Z| has a local
    minimum without a sign change the two neighbouring steps are re-sampled
    eight times finer; if that reveals a hidden pair of zeros a warning is
    issued and the pair is refined too.
    """
    if not (0 < t_min < t_max):
        raise DomainError("need 0 < t_min < t_max")
    if step <= 0 or step > 0.5:
        raise DomainError("step must be in (0, 0.5]")
    count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
    t = t_min + step * np.arange(count)
    if t[-1] < t_max:
        t = np.append(t, t_max)
    phase = np.unwrap(_raw_phase(t))
    zv = _z_with_phase(t, phase)

    lo_t, hi_t, lo_ph, hi_ph, lo_s = [], [], [], [], []

    def bracket(a, b, pa, pb, za):
        lo_t.append(a)
        hi_t.append(b)
        lo_ph.append(pa)
        hi_ph.append(pb)
        lo_s.append(np.sign(za))

    for i in range(len(t) - 1):
        if zv[i] == 0.0:
            bracket(t[i], t[i], phase[i], phase[i], 0.0)
        elif zv[i] * zv[i + 1] < 0:
            bracket(t[i], t[i + 1], phase[i], phase[i + 1], zv[i])

    # hidden pairs: local |Z| minima with no sign change on either side
    az = np.abs(zv)
    for i in range(1, len(t) - 1):
        if az[i] < az[i - 1] and az[i] < az[i + 1] and zv[i - 1] * zv[i] > 0 and zv[i] * zv[i + 1] > 0:
            fine = np.linspace(t[i - 1], t[i + 1], 17)
            fph = _nearest_branch(_raw_phase(fine), np.interp(fine, t, phase))
            fz = _z_with_phase(fine, fph)
            changes = np.flatnonzero(fz[:-1] * fz[1:] < 0)
            if len(changes):
                warnings.warn(
                    f"step {step} too coarse near t = {t[i]:.4f}: {len(changes)} sign changes hidden in one step",
                    RuntimeWarning,
                    stacklevel=2,
                )
                for j in changes:
                    bracket(fine[j], fine[j + 1], fph[j], fph[j + 1], fz[j])

    if not lo_t:
        return []
    a = np.array(lo_t)
    b = np.array(hi_t)
    pa = np.array(lo_ph)
    pb = np.array(hi_ph)
    sa = np.array(lo_s)
    while np.max(b - a) > tol:
        m = 0.5 * (a + b)
        guess = pa + (pb - pa) * 0.5
        pm = _nearest_branch(_raw_phase(m), guess)
        zm = _z_with_phase(m, pm)
        left = np.sign(zm) == sa
        a = np.where(left, m, a)
        pa = np.where(left, pm, pa)
        b = np.where(left, b, m)
        pb = np.where(left, pb, pm)
    roots = sorted(set(np.round(0.5 * (a + b), 12).tolist()))
    return [float(r) for r in roots]


# ------------------------------------------------------------ diagnostics


def convergence_table(kind: str, z, ladder: Iterable[int], table: PrimeTable | None = None,
                      depth: int = 5) -> ConvergenceTable:
    """Build the standard diagnostic tables.

    kinds: ``fn-ratio`` (reference 2^(1-z)), ``ratio-zeta`` (reference zeta_hat),
    ``window-sum`` (reference log 2), ``sigma-gap`` (reference 0),
    ``cutoff`` (reference zeta_hat), ``euler`` and ``partial`` (reference zeta_hat when Re z > 1).
    """
    z = _z(z)
    ladder = sorted(int(n) for n in ladder)
    if kind == "fn-ratio":
        ct = ConvergenceTable(z, "euler-product", extra={"quantity": "f_n(z)", "reference": "2^(1-z)"})
        ref = 2.0 ** (1.0 - z)
        for n in ladder:
            ct.add(n, fn_ratio(z, n, table), ref)
    elif kind == "ratio-zeta":
        ct = ConvergenceTable(z, "ratio-reconstructed", extra={"reference": "zeta_hat"})
        ref = zeta_hat(z)
        for n in ladder:
            ct.add(n, zeta_hat_from_ratio(z, n, table), ref)
    elif kind == "window-sum":
        ct = ConvergenceTable(z, "euler-product",
                              extra={"quantity": "window_log_sum", "depth": depth, "reference": "log 2"})
        for n in ladder:
            ct.add(n, window_log_sum(z, n, depth, table), complex(math.log(2.0)))
    elif kind == "sigma-gap":
        ct = ConvergenceTable(z, "euler-product", extra={"quantity": "sigma_n(z)", "reference": "0"})
        for n in ladder:
            ct.add(n, sigma_gap(z, n, table), 0j)
    elif kind == "cutoff":
        ct = ConvergenceTable(z, "cutoff-regularized", extra={"reference": "zeta_hat"})
        ref = zeta_hat(z)
        for n in ladder:
            ct.add(n, zeta_hat_cutoff(z, n), ref)
    elif kind in ("euler", "partial", "alternating"):
        method = {"euler": "euler-product", "partial": "partial-sum", "alternating": "alternating"}[kind]
        ct = ConvergenceTable(z, method, extra={"reference": "zeta_hat" if kind != "alternating" else "eta"})
        ref = None
        if kind == "alternating":
            ref = zeta_hat(z) * (1.0 - 2.0 ** (1.0 - z))
        elif z.real > 1:
            ref = zeta_hat(z)
        for n in ladder:
            if kind == "euler":
                v = euler_product_partial(z, n, table)
            elif kind == "partial":
                v = partial_sum(z, n)
            else:
                v = alternating_partial(z, n)
            ct.add(n, v, ref)
    else:
        raise DomainError(f"unknown convergence table kind {kind!r}")
    return ct
