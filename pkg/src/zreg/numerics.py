"""Complex special functions: Gamma, generalized binomial, functional-equation factor.

All routines work on Python ``complex`` scalars in double precision and use
the principal branch of log and power.
"""
from __future__ import annotations

import cmath
import math
import re

from .errors import DomainError, PoleError

__all__ = [
    "gamma",
    "loggamma",
    "binom",
    "h_factor",
    "log_h_factor",
    "sinpi",
    "parse_complex",
    "format_complex",
]

POLE_TOL = 1e-12

# Lanczos coefficients, g = 607/128, 15 terms (Godfrey).
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEF = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_2PI = math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _as_complex(z) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"non-finite argument {z!r}")
    return z


def _near_integer(x: complex, tol: float = POLE_TOL) -> int | None:
    k = round(x.real)
    if abs(x.imag) <= tol and abs(x.real - k) <= tol:
        return int(k)
    return None


def sinpi(w: complex) -> complex:
    """sin(pi*w) with exact reduction of the real part modulo 2."""
    w = complex(w)
    k = round(w.real)
    r = complex(w.real - k, w.imag)
    s = cmath.sin(math.pi * r)
    return -s if k % 2 else s


def _log_sinpi(w: complex) -> complex:
    # Some branch of log(sin(pi*w)); safe for large |Im w|.
    k = round(w.real)
    r = complex(w.real - k, w.imag)
    u = math.pi * r
    if abs(u.imag) < 30.0:
        val = cmath.log(cmath.sin(u))
    elif u.imag > 0:
        val = -1j * u + cmath.log(0.5j) + cmath.log(1.0 - cmath.exp(2j * u))
    else:
        val = 1j * u - cmath.log(2j) + cmath.log(1.0 - cmath.exp(-2j * u))
    return val + 1j * math.pi if k % 2 else val


def _loggamma_right(z: complex) -> complex:
    # Lanczos for Re z >= 1/2.
    z = z - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def loggamma(z) -> complex:
    """A logarithm of Gamma(z); exp(loggamma(z)) == gamma(z).

    The branch is not the principal one of log Gamma; only the exponential
    is meaningful.
    """
    z = _as_complex(z)
    k = _near_integer(z)
    if k is not None and k <= 0:
        raise PoleError(f"Gamma has a pole at {k}")
    if z.real >= 0.5:
        return _loggamma_right(z)
    return _LOG_PI - _log_sinpi(z) - _loggamma_right(1.0 - z)


def gamma(z) -> complex:
    """Gamma(z) for complex z off the nonpositive integers."""
    z = _as_complex(z)
    k = _near_integer(z)
    if k is not None:
        if k <= 0:
            raise PoleError(f"Gamma has a pole at {k}")
        if k <= 20:
            return complex(math.factorial(k - 1))
    return cmath.exp(loggamma(z))


def binom(z, r: int) -> complex:
    """Generalized binomial coefficient z(z-1)...(z-r+1)/r!."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    z = _as_complex(z)
    c = complex(1.0)
    for j in range(r):
        c = c * (z - j) / (j + 1)
    return c


def _h_even_limit(m: int) -> complex:
    # lim_{z -> 2m} H(z) for m >= 1.
    sign = -1.0 if m % 2 else 1.0
    return complex(sign * math.pi * (2.0 * math.pi) ** (2 * m - 1) / math.factorial(2 * m - 1))


def log_h_factor(z) -> complex:
    """A logarithm of H(z) = 2 Gamma(1-z) (2 pi)^(z-1) sin(pi z / 2)."""
    z = _as_complex(z)
    k = _near_integer(z)
    if k is not None and k >= 1:
        if k % 2:
            raise PoleError(f"H(z) is singular at z = {k}")
        return cmath.log(_h_even_limit(k // 2))
    return math.log(2.0) + loggamma(1.0 - z) + (z - 1.0) * _LOG_2PI + _log_sinpi(0.5 * z)


def h_factor(z) -> complex:
    """Functional-equation factor: zeta(z) = H(z) zeta(1 - z).

    Even positive integers use the removable-singularity limit; odd positive
    integers are poles.
    """
    z = _as_complex(z)
    k = _near_integer(z)
    if k is not None and k >= 1 and k % 2 == 0:
        return _h_even_limit(k // 2)
    if k is not None and k <= 0:
        # Gamma(1-z) is finite and small-argument logs are exact here.
        return 2.0 * gamma(1 - k) * (2.0 * math.pi) ** (k - 1) * sinpi(0.5 * k)
    return cmath.exp(log_h_factor(z))


_COMPLEX_RE = re.compile(
    r"""^\s*
    (?:
        (?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
        \s*
        (?:(?P<sign>[+-])\s*(?P<im>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?
      |
        (?P<only_im>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)\s*[ij]
    )\s*$""",
    re.VERBOSE,
)


def parse_complex(text: str) -> complex:
    """Parse ``"a+bi"``, ``"a-bi"``, ``"a"`` or ``"bi"`` (whitespace allowed)."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse complex literal {text!r}")
    if m.group("re") is not None:
        re_part = float(m.group("re"))
        im_part = 0.0
        if m.group("sign"):
            mag = float(m.group("im")) if m.group("im") else 1.0
            im_part = mag if m.group("sign") == "+" else -mag
        return complex(re_part, im_part)
    tok = m.group("only_im")
    if tok in ("", "+"):
        return 1j
    if tok == "-":
        return -1j
    return complex(0.0, float(tok))


def format_complex(z: complex) -> str:
    """17-significant-digit text form, real part only when Im z == 0."""
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.17g}"
    return f"{z.real:.17g}{z.imag:+.17g}i"
