from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from zreg import elliptic as el
from zreg.errors import DomainError, InvariantError
from zreg.primes import is_prime, sieve_to_count

CURVES = el.bundled_curves()
RANK0 = CURVES["11a1-rank0"]
RANK1 = CURVES["37a1-rank1"]
SMALL_PRIMES = [p for p in range(2, 998) if is_prime(p)]


@pytest.fixture(scope="module")
def tab():
    return sieve_to_count(2 * 10**4)


def eta_product_11a(limit):
    """Coefficients of q prod (1 - q^n)^2 (1 - q^11n)^2 up to q^limit."""
    c = np.zeros(limit + 1, dtype=object)
    c[0] = 1
    for n in range(1, limit + 1):
        for step, times in ((n, 2), (11 * n, 2)):
            if step > limit:
                continue
            for _ in range(times):
                for k in range(limit, step - 1, -1):
                    c[k] -= c[k - step]
    return {k + 1: int(c[k]) for k in range(limit)}


def test_bundled_curves():
    assert set(CURVES) == {"11a1-rank0", "37a1-rank1", "36a1-rank0", "389a1-rank2", "5077a1-rank3"}
    assert RANK0.discriminant == -161051 and RANK1.discriminant == 37
    assert CURVES["389a1-rank2"].discriminant == 389
    assert CURVES["5077a1-rank3"].discriminant == 5077


def test_singular_curve_rejected():
    with pytest.raises(InvariantError):
        el.EllipticCurve(0, 0, 0, 0, 0)


def test_parse_curve():
    assert el.parse_curve("paper:1,0,-1,0 x") == el.EllipticCurve(0, 0, 1, -1, 0, "x")
    assert el.parse_curve("0,0,0,0,1").coefficients == (0, 0, 0, 0, 1)
    with pytest.raises(DomainError):
        el.parse_curve("1,2,3")


def test_count_examples():
    E = el.EllipticCurve(0, 0, 0, 0, 1)
    d = el.count_points(E, 5)
    assert d.N_p == 5 and d.a_p == 0
    F = el.EllipticCurve.from_short(1, 0, -1, 0)
    brute = sum(1 for x in range(2) for y in range(2) if (y * y + y - x**3 + x) % 2 == 0)
    assert el.count_points(F, 2).N_p == brute


def test_enumeration_matches_character_sum():
    for E in CURVES.values():
        for p in SMALL_PRIMES:
            if p < 5:
                continue
            assert el.count_points_enumerate(E, p) == el.count_points_character(E, p), (E.label, p)


def test_hasse_bound():
    for E in CURVES.values():
        for p in SMALL_PRIMES:
            d = el.count_points(E, p)
            if d.good_reduction:
                assert abs(d.a_p) <= 2 * math.sqrt(p)


def test_traces_match_modular_form_11a():
    coeffs = eta_product_11a(200)
    for p in SMALL_PRIMES:
        if p > 200 or p == 11:
            continue
        assert el.count_points(RANK0, p).a_p == coeffs[p], p


def test_traces_37a_known():
    known = {2: -2, 3: -3, 5: -2, 7: -1, 11: -5, 13: -2}
    for p, a in known.items():
        assert el.count_points(RANK1, p).a_p == a


def test_short_form_is_reduction_invariant():
    a = el.EllipticCurve.from_short(1, -1, -10, -20)
    b = el.EllipticCurve(0, -1, 1, -10, -20)
    for p in SMALL_PRIMES[:60]:
        assert el.count_points(a, p) == el.count_points(b, p)


def test_local_data_requires_prime():
    with pytest.raises(DomainError):
        el.local_data(RANK0, 15)


def test_l_partial_examples(tab):
    assert el.l_partial(RANK0, 2, 0, tab) == 1
    E = el.EllipticCurve(0, 0, 0, 0, 1)
    a2 = el.count_points(E, 2).a_p
    assert abs(el.l_partial(E, 2, 1, tab) - 1 / (1 - a2 / 4 + 1 / 8)) < 1e-15


def test_local_factor_at_one(tab):
    # at z = 1 the factor 1 - a_p/p + p/p^2 is the rational (p - a_p + 1)/p
    ap = el.trace_array(RANK1, 50, tab)
    for k, (p, a) in enumerate(zip(tab.primes[:50].tolist(), ap.tolist())):
        single = el.l_range_product(RANK1, 1.0, k, k + 1, tab)
        assert abs(single - p / (p - a + 1)) < 1e-15


@pytest.mark.parametrize("E", [RANK0, RANK1, CURVES["389a1-rank2"]])
def test_window_splice(tab, E):
    for z in (1.0, 2.0, 0.7 + 3j):
        for m, n in ((10, 100), (100, 2000), (1, 2)):
            lhs = el.l_partial(E, z, n, tab)
            rhs = el.l_partial(E, z, m, tab) * el.l_range_product(E, z, m, n, tab)
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


def test_window_ratio_examples(tab):
    a3 = el.count_points(RANK0, 3).a_p
    assert abs(el.l_window_ratio(RANK0, 2, 1, tab) - 1 / (1 - a3 / 9 + 1 / 27)) < 1e-15
    assert abs(el.l_window_ratio(RANK0, 2, 1000, tab) - 1) < 1e-3


def mp_window(E, z, n, primes):
    acc = mpmath.mpc(1)
    for p in primes[n : 2 * n]:
        a = el.count_points(E, int(p)).a_p
        acc /= 1 - a * mpmath.power(int(p), -z) + mpmath.power(int(p), 1 - 2 * z)
    return complex(acc)


@pytest.mark.parametrize("E", [RANK0, RANK1])
def test_window_table_vs_recomputation(tab, E):
    t = el.l_window_table(E, 1.0, [100, 1000], tab)
    for n, re, im in t.rows:
        ref = mp_window(E, 1, n, tab.primes)
        assert abs(complex(re, im) - ref) <= 1e-12 * abs(ref)


def test_vanishing_probe(tab):
    t0 = el.vanishing_probe(RANK0, [100, 1000, 3000], tab)
    t1 = el.vanishing_probe(RANK1, [100, 1000, 3000], tab)
    assert t0.metadata["slope_log_log_n"] > t1.metadata["slope_log_log_n"]
    assert "commentary" in t0.metadata
    for n, re, im, log_abs, log_n, _ in t1.rows:
        v = el.l_partial(RANK1, 1.0, n, tab)
        assert (re, im) == (v.real, v.imag) and log_abs == math.log(abs(v))
    assert el.vanishing_probe(RANK0, [], tab).rows == []
    with pytest.raises(DomainError):
        el.vanishing_probe(RANK0, [100, 10], tab)


def test_standard_bad_prime_mode(tab):
    a = el.l_partial(RANK0, 2, 10, tab, bad_primes="standard")
    b = el.l_partial(RANK0, 2, 10, tab)
    a11 = el.count_points(RANK0, 11).a_p
    ratio = (1 - a11 * 11**-2 + 11**-3) / (1 - a11 * 11**-2)
    assert abs(a / b - ratio) < 1e-14
    with pytest.raises(DomainError):
        el.l_partial(RANK0, 2, 10, tab, bad_primes="weird")


@pytest.mark.slow
def test_l_partial_converges_at_two(tab):
    a = el.l_partial(RANK0, 2, 10**4, tab)
    b = el.l_partial(RANK0, 2, 2 * 10**4, tab)
    assert abs(b / a - 1) < 1e-4
