"""Prime tables: segmented sieve, 1-based indexing, windows and binary persistence."""
from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, DomainError, FormatError, InvariantError

__all__ = [
    "PrimeTable",
    "sieve_to_count",
    "sieve_to_limit",
    "window",
    "save",
    "load",
    "is_prime",
    "MAX_COUNT",
]

MAX_COUNT = 10**8
MAGIC = b"ZREGPRM1"
_SEGMENT = 1 << 21


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _small_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def sieve_to_limit(limit: int) -> np.ndarray:
    """All primes <= limit, odd-only segmented sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    root = math.isqrt(limit)
    base = _small_sieve(max(root, 2))
    out = [np.array([2], dtype=np.int64)]
    odd_base = base[base > 2]
    low = 3
    while low <= limit:
        high = min(low + 2 * _SEGMENT, limit + 1)  # exclusive
        count = (high - low + 1) // 2
        mask = np.ones(count, dtype=bool)
        for p in odd_base.tolist():
            pp = p * p
            if pp >= high:
                break
            start = max(pp, (low + p - 1) // p * p)
            if start % 2 == 0:
                start += p
            if start >= high:
                continue
            mask[(start - low) // 2 :: p] = False
        out.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high if high % 2 else high + 1
    return np.concatenate(out)


def _count_upper_bound(n: int) -> int:
    if n < 6:
        return 15
    ln = math.log(n)
    return int(n * (ln + math.log(ln))) + 10


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Immutable ascending prime list; ``nth(1) == 2``."""

    primes: np.ndarray
    limit: int

    def __post_init__(self):
        arr = np.ascontiguousarray(self.primes, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "primes", arr)

    def __len__(self) -> int:
        return len(self.primes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeTable):
            return NotImplemented
        return self.limit == other.limit and np.array_equal(self.primes, other.primes)

    def nth(self, k: int) -> int:
        if k < 1:
            raise DomainError("prime index is 1-based")
        if k > len(self.primes):
            raise CapacityError(f"table holds {len(self.primes)} primes, asked for p_{k}")
        return int(self.primes[k - 1])

    def first(self, n: int) -> np.ndarray:
        self.require(n)
        return self.primes[:n]

    def require(self, n: int) -> None:
        if n > len(self.primes):
            raise CapacityError(f"table holds {len(self.primes)} primes, need {n}")

    def validate(self, full_primality: bool = False) -> None:
        p = self.primes
        if len(p) == 0:
            return
        if p[0] != 2:
            raise InvariantError("table must start with 2")
        if np.any(np.diff(p) <= 0):
            raise InvariantError("table is not strictly increasing")
        idx = range(len(p)) if full_primality else np.unique(
            np.linspace(0, len(p) - 1, num=min(len(p), 64)).astype(np.int64)
        )
        for i in idx:
            if not is_prime(int(p[i])):
                raise InvariantError(f"entry {int(p[i])} at index {int(i) + 1} is not prime")


def sieve_to_count(n: int, cap: int = MAX_COUNT) -> PrimeTable:
    """Table holding at least the first ``n`` primes."""
    if n < 1:
        raise DomainError("n must be positive")
    if n > cap:
        raise CapacityError(f"{n} primes exceeds the cap {cap}")
    limit = _count_upper_bound(n)
    primes = sieve_to_limit(limit)
    while len(primes) < n:
        limit *= 2
        primes = sieve_to_limit(limit)
    return PrimeTable(primes, limit)


def window(table: PrimeTable, n: int) -> np.ndarray:
    """Primes with indices n+1 .. 2n."""
    if n < 1:
        raise DomainError("window size must be positive")
    if 2 * n > len(table):
        raise CapacityError(f"window({n}) needs {2 * n} primes, table holds {len(table)}")
    return table.primes[n : 2 * n]


_HEADER = struct.Struct("<8sQQ")


def save(table: PrimeTable, path: str | os.PathLike) -> None:
    """Write magic, count and limit (little-endian u64) followed by the primes."""
    data = _HEADER.pack(MAGIC, len(table), table.limit) + table.primes.astype("<u8").tobytes()
    Path(path).write_bytes(data)


def load(path: str | os.PathLike) -> PrimeTable:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError("file too short for header")
    magic, count, limit = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError("bad magic")
    body = raw[_HEADER.size :]
    if len(body) != 8 * count:
        raise FormatError(f"expected {count} entries, found {len(body) / 8:g}")
    primes = np.frombuffer(body, dtype="<u8").astype(np.int64)
    table = PrimeTable(primes, int(limit))
    table.validate()
    return table


_shared: PrimeTable | None = None


def shared_table(n: int) -> PrimeTable:
    """Process-wide table grown on demand (tables are immutable, so sharing is safe)."""
    global _shared
    if _shared is None or len(_shared) < n:
        _shared = sieve_to_count(max(n, 1000, 2 * len(_shared) if _shared is not None else 0))
    return _shared


def cached_table(n: int, path: str | os.PathLike | None = None) -> PrimeTable:
    """Load a table from ``path`` when it is large enough, else sieve (and save)."""
    if path is not None and Path(path).exists():
        table = load(path)
        if len(table) >= n:
            return table
    table = sieve_to_count(n)
    if path is not None:
        save(table, path)
    return table
