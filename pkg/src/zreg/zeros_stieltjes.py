"""Stieltjes constants, zero-power sums Z(n) and the relations between them.

Z(n) = sum over nontrivial zeros rho of rho^-n, with rho = 1/2 +- i*lambda_j.
The closed forms for n = 1, 2, 3 in terms of gamma_0..gamma_2 are inverted
order by order.  The gamma_1 inversion uses +pi^2/8, the sign consistent with
Z(2) = 1 + gamma^2 - pi^2/8 + 2 gamma_1 (see ``sign_discrepancy_report``).
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import integrate

from . import _parallel
from .errors import DomainError, FormatError, InvariantError
from .report import Table

__all__ = [
    "ZeroTable",
    "StieltjesSet",
    "ZeroSum",
    "stieltjes",
    "stieltjes_set",
    "z_sum_from_zeros",
    "z_closed_form",
    "gammas_from_z",
    "taylor_zeta",
    "sign_discrepancy_report",
    "load_zero_table",
    "save_zero_table",
    "default_zero_table",
]

FIRST_ZERO = 14.134725
LOG_4PI = math.log(4.0 * math.pi)
PI2_8 = math.pi**2 / 8.0


@dataclass(frozen=True)
class ZeroTable:
    ordinates: tuple[float, ...]
    source: str = "file"
    starts_at_first: bool = True

    def __post_init__(self):
        if self.source not in ("file", "scan"):
            raise ValueError("source must be 'file' or 'scan'")
        o = self.ordinates
        if any(x <= 0 for x in o):
            raise InvariantError("ordinates must be positive")
        if any(b <= a for a, b in zip(o, o[1:])):
            raise InvariantError("ordinates must be strictly increasing")
        if o and self.starts_at_first and abs(o[0] - FIRST_ZERO) > 1e-3:
            raise InvariantError(f"first ordinate {o[0]} is not the first zero")

    def __len__(self) -> int:
        return len(self.ordinates)

    def head(self, k: int) -> "ZeroTable":
        return ZeroTable(self.ordinates[:k], self.source, self.starts_at_first)


def load_zero_table(path: str | os.PathLike) -> ZeroTable:
    """Text file, one ordinate per line; ``#`` starts a comment."""
    vals = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            vals.append(float(line))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: not a number: {line!r}") from exc
    return ZeroTable(tuple(vals), "file")


def save_zero_table(table: ZeroTable, path: str | os.PathLike, header: str = "") -> None:
    lines = [f"# {h}" for h in header.splitlines()] + [f"{x:.10f}" for x in table.ordinates]
    Path(path).write_text("\n".join(lines) + "\n")


def default_zero_table() -> ZeroTable:
    """The shipped table of the first 100 ordinates (generated by the scanner)."""
    ref = resources.files("zreg") / "data" / "zeros_100.txt"
    with resources.as_file(ref) as p:
        return load_zero_table(p)


# ------------------------------------------------------------- Stieltjes


@dataclass
class StieltjesSet:
    gammas: list[float]
    method: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> float:
        return self.gammas[k]

    def __len__(self) -> int:
        return len(self.gammas)

    def to_json(self) -> str:
        return json.dumps({"gammas": self.gammas, "method": self.method}, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "StieltjesSet":
        d = json.loads(text)
        return cls([float(g) for g in d["gammas"]], dict(d.get("method", {})))


def stieltjes(n: int, m: int = 10**6, corrections: int = 2) -> float:
    """gamma_n from the truncated defining limit at cutoff m.

    sum_{k<=m} (log k)^n / k - (log m)^{n+1}/(n+1), minus the Euler-Maclaurin
    endpoint terms f(m)/2 and f'(m)/12 for f(x) = (log x)^n / x.
    """
    if not (0 <= n <= 8):
        raise DomainError("n must be in [0, 8]")
    if m < 2:
        raise DomainError("m must be >= 2")
    logk = np.log(np.arange(1, m + 1, dtype=np.float64))
    terms = logk**n / np.arange(1, m + 1, dtype=np.float64)
    lm = math.log(m)
    s = math.fsum(terms.tolist()) - lm ** (n + 1) / (n + 1)
    if corrections >= 1:
        s -= 0.5 * lm**n / m
    if corrections >= 2:
        d1 = ((n * lm ** (n - 1)) if n else 0.0) - lm**n
        s -= d1 / (12.0 * m * m)
    return s


def stieltjes_set(k_max: int, m: int = 10**6) -> StieltjesSet:
    gs = _parallel.map_ordered(lambda n: stieltjes(n, m), list(range(k_max + 1)))
    return StieltjesSet(gs, {"m": m, "corrections": 2, "route": "defining limit"})


# ------------------------------------------------------------- zero sums


def _pair_term(lam, n: int):
    """(1/2 + i lam)^-n + (1/2 - i lam)^-n = 2 Re (1/2 + i lam)^-n."""
    return 2.0 * np.real((0.5 + 1j * np.asarray(lam, dtype=np.float64)) ** (-n))


def _density(lam: float) -> float:
    return math.log(lam / (2.0 * math.pi)) / (2.0 * math.pi)


@dataclass(frozen=True)
class ZeroSum:
    n: int
    raw: float
    tail: float
    count: int

    @property
    def total(self) -> float:
        return self.raw + self.tail


def zero_tail(n: int, start: float) -> float:
    """Zeros above ``start`` replaced by the smooth density log(lam/2pi)/(2pi)."""
    val, err = integrate.quad(lambda x: float(_pair_term(x, n)) * _density(x), start, np.inf,
                              limit=400, epsabs=1e-14, epsrel=1e-12)
    return val


def z_sum_from_zeros(n: int, table: ZeroTable | None = None, tail: bool = True) -> ZeroSum:
    """Z(n) over the table ordinates plus a density-integrated tail."""
    if n < 1:
        raise DomainError("n must be >= 1")
    table = default_zero_table() if table is None else table
    if not len(table):
        raise DomainError("zero table is empty")
    raw = math.fsum(_pair_term(np.array(table.ordinates), n).tolist())
    t = zero_tail(n, table.ordinates[-1]) if tail else 0.0
    return ZeroSum(n, raw, t, len(table))


def _zeta3() -> float:
    from .zeta_core import zeta_hat

    return zeta_hat(3).real


def z_closed_form(n: int, gammas) -> float:
    """Z(1), Z(2), Z(3) from gamma_0, gamma_1, gamma_2."""
    g = list(gammas.gammas if isinstance(gammas, StieltjesSet) else gammas)
    if n not in (1, 2, 3):
        raise DomainError("closed forms are available for n = 1, 2, 3")
    if len(g) < n:
        raise DomainError(f"Z({n}) needs gamma_0..gamma_{n - 1}")
    g0 = g[0]
    if n == 1:
        return 0.5 * (2.0 + g0 - LOG_4PI)
    if n == 2:
        return 1.0 + g0**2 - PI2_8 + 2.0 * g[1]
    return 1.0 + g0**3 + 3.0 * g0 * g[1] + 1.5 * g[2] - 0.875 * _zeta3()


def gammas_from_z(z_values: Sequence[float]) -> StieltjesSet:
    """Invert the closed forms order by order: Z(1..k) -> gamma_0..gamma_{k-1}."""
    z = list(z_values)
    if not z:
        raise DomainError("need at least Z(1)")
    if len(z) > 3:
        raise DomainError("inversion is available up to Z(3)")
    g0 = 2.0 * z[0] - 2.0 + LOG_4PI
    out = [g0]
    if len(z) >= 2:
        out.append(0.5 * (z[1] - 1.0 - g0**2 + PI2_8))
    if len(z) >= 3:
        out.append((2.0 / 3.0) * (z[2] - 1.0 - g0**3 - 3.0 * g0 * out[1] + 0.875 * _zeta3()))
    return StieltjesSet(out, {"route": "zero-sum inversion"})


def sign_discrepancy_report(z2: float, gamma0: float, oracle_gamma1: float) -> Table:
    """Both readings of the gamma_1 inversion against an independent gamma_1."""
    t = Table(["variant", "formula", "gamma_1", "abs_err_vs_oracle"],
              metadata={"Z(2)": z2, "gamma_0": gamma0, "oracle_gamma_1": oracle_gamma1})
    plus = 0.5 * (z2 - 1.0 - gamma0**2 + PI2_8)
    minus = 0.5 * (z2 - 1.0 - gamma0**2 - PI2_8)
    t.add("consistent", "(Z(2) - 1 - g^2 + pi^2/8)/2", plus, abs(plus - oracle_gamma1))
    t.add("as-printed", "(Z(2) - 1 - g^2 - pi^2/8)/2", minus, abs(minus - oracle_gamma1))
    t.metadata["selected"] = "consistent" if abs(plus - oracle_gamma1) < abs(minus - oracle_gamma1) else "as-printed"
    return t


def taylor_zeta(z, gammas) -> complex:
    """1/(z-1) + sum_n (-1)^n gamma_n (z-1)^n / n!."""
    g = list(gammas.gammas if isinstance(gammas, StieltjesSet) else gammas)
    w = complex(z) - 1.0
    acc = 1.0 / w
    for n, gn in enumerate(g):
        acc += (-1) ** n * gn * w**n / math.factorial(n)
    return acc
