"""Acceptance criteria 1-11, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line (collected in the terminal summary).
Two criteria contain a literal reading that is false; each such reading is
exercised as a strict xfail next to the criterion so it stays visible:
the trivial-zero set of b_n(z) (criterion 6) and the real square root in
the character-sum identity (criterion 10).
"""
from __future__ import annotations

import cmath
import math
import subprocess
import sys
import time
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from zreg import _parallel
from zreg import bernoulli as bn
from zreg import char_identity as ci
from zreg import elliptic as el
from zreg import prime_zeta as pz
from zreg import zeros_stieltjes as zs
from zreg import zeta_core as zc
from zreg.numerics import h_factor
from zreg.primes import sieve_to_count

mpmath.mp.dps = 30


@pytest.fixture(scope="module")
def big_table():
    return sieve_to_count(2 * 10**5)


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# 1 ---------------------------------------------------------------------------


def test_criterion_1_functional_factor(random_z, acceptance):
    def body():
        a = max(abs(h_factor(z + 2) / h_factor(z) + 4 * math.pi**2 / (z * (z + 1))) for z in random_z)
        b = max(abs(h_factor(z) * h_factor(1 - z) - 1) for z in random_z)
        return a, b

    (a, b), dt = timed(body)
    ok = len(random_z) == 100 and a < 1e-9 and b < 1e-9 and dt < 1
    acceptance(1, ok, f"ratio residual {a:.2e}, reflection residual {b:.2e}, {dt:.2f}s")
    assert ok


# 2 ---------------------------------------------------------------------------


def test_criterion_2_regularized_zeta(acceptance):
    oracle_half = float(mpmath.zeta(0.5))

    def body():
        e2 = abs(zc.zeta_hat(2) - math.pi**2 / 6)
        e0 = abs(zc.zeta_hat(0) + 0.5)
        eh = abs(zc.zeta_hat(0.5) - oracle_half)
        fe = 0.0
        for x in np.linspace(0.1, 0.9, 9):
            for y in np.linspace(-30, 30, 31):
                z = complex(x, y)
                v = zc.zeta_hat(z)
                fe = max(fe, abs(v - h_factor(z) * zc.zeta_hat(1 - z)) / max(1.0, abs(v)))
        return e2, e0, eh, fe

    (e2, e0, eh, fe), dt = timed(body)
    ok = e2 < 1e-10 and e0 < 1e-10 and eh < 1e-8 and fe < 1e-8 and dt < 5
    acceptance(2, ok, f"zeta(2) err {e2:.1e}, zeta(0) err {e0:.1e}, zeta(1/2) err {eh:.1e}, "
                      f"functional equation {fe:.1e}, {dt:.2f}s")
    assert ok


# 3 ---------------------------------------------------------------------------


def test_criterion_3_finite_identities(big_table, acceptance):
    # the reconstruction regularizes the critical strip; for Re z > 1 both forms
    # divide by a difference that shrinks like the window tail and lose digits.
    # Points sit off the zeros of zeta, where the relative error is ill posed.
    zs_ = [0.5, 0.6 + 3j, 0.5 + 10j, 0.3 - 7j, 0.25 + 0.5j, 0.75 + 1j, 0.9 - 21j, 0.1 + 2j, 0.7, 0.4 + 25j]
    ns = [1, 10, 100, 1000, 5000]

    def body():
        worst_xi = worst_rec = 0.0
        for z in zs_:
            for n in ns:
                xi = zc.alternating_partial(z, 2 * n)
                rhs = zc.partial_sum(z, 2 * n) - 2 ** (1 - z) * zc.partial_sum(z, n)
                worst_xi = max(worst_xi, abs(xi - rhs) / abs(xi))
                a = zc.zeta_hat_from_ratio(z, n, big_table)
                b = zc.zeta_hat_from_products(z, n, big_table)
                worst_rec = max(worst_rec, abs(a - b) / abs(b))
        return worst_xi, worst_rec

    (wx, wr), dt = timed(body)
    ok = len(zs_) * len(ns) == 50 and wx < 1e-12 and wr < 1e-12 and dt < 5
    acceptance(3, ok, f"alternating doubling {wx:.1e}, ratio vs product reconstruction {wr:.1e}, {dt:.2f}s")
    assert ok


# 4 ---------------------------------------------------------------------------


def mp_window_product(z, primes):
    z = mpmath.mpc(z)
    acc = mpmath.mpc(1)
    for p in primes:
        acc /= 1 - mpmath.power(int(p), -z)
    return complex(acc)


def test_criterion_4_fn_tables(big_table, acceptance):
    points = [2, 0.5, 0.5 + 14.134725j]
    ladder = [10**2, 10**3, 10**4, 10**5]

    def body():
        tables = {z: zc.convergence_table("fn-ratio", z, ladder, big_table) for z in points}
        return tables

    tables, dt = timed(body)
    worst = 0.0
    with mpmath.workdps(20):
        for z, ct in tables.items():
            for n, v, _, _ in ct.rows:
                ref = mp_window_product(z, big_table.primes[n : 2 * n])
                worst = max(worst, abs(v - ref) / abs(ref))
    at2 = abs(tables[2].values[ladder.index(10**4)] - 1)
    ok = worst < 1e-12 and at2 < 1e-3 and dt < 60
    acceptance(4, ok, f"worst cell vs mpmath {worst:.1e}, |f_1e4(2) - 1| = {at2:.1e}, {dt:.2f}s")
    assert ok


# 5 ---------------------------------------------------------------------------


def test_criterion_5_prime_zeta(acceptance):
    def body():
        ie = pz.p_inclusion_exclusion(2, 6, 3)
        direct = pz.p_partial(2, 10**6)
        r2 = pz.r_remainder(2, 30, 10**5)
        log_gap = abs(cmath.log(zc.zeta_hat(2)) - (ie + r2))
        gamma = zs.stieltjes(0, 10**6)
        s = math.fsum((zc.zeta_hat(k).real - 1) / k for k in range(2, 61))
        return abs(ie - direct), log_gap, abs(s - (1 - gamma))

    (d1, d2, d3), dt = timed(body)
    ok = d1 < 1e-6 and d2 < 1e-9 and d3 < 1e-10 and dt < 30
    acceptance(5, ok, f"IE vs direct P(2) {d1:.1e}, log zeta(2) - P(2) - R(2) {d2:.1e}, "
                      f"sum (zeta(k)-1)/k vs 1-gamma {d3:.1e}, {dt:.2f}s")
    assert ok


# 6 ---------------------------------------------------------------------------

Z = bn.RationalPolynomial.x()


def test_criterion_6_bernoulli_exact(acceptance):
    def body():
        forms = (bn.b_partial_poly(2) == F(1, 12) * (Z - 3) * (Z - 4)
                 and bn.b_partial_poly(4) == F(-1, 720) * (Z - 3) * (Z - 5) * (Z - 6) * (Z + 8)
                 and bn.b_partial_poly(6) == F(1, 30240) * (Z - 3) * (Z - 5) * (Z - 7) * (Z - 8) * (Z * Z + 8 * Z + 36))
        # zero set read off the factored forms: 3, 5, ..., n+1 and n+2
        zeros = all(bn.b_partial_poly(n)(F(r)) == 0 for n in range(2, 41, 2) for r in bn.trivial_zeros(n))
        g = bn.g_factor(2) == 1 and bn.g_factor(4) == Z + 8 and bn.g_factor(6) == Z * Z + 8 * Z + 36
        divides = all(bn.g_factor(n) is not None for n in range(2, 41, 2))
        return forms, zeros, g, divides

    (forms, zeros, g, divides), dt = timed(body)
    literal_bad = [n for n in range(2, 41, 2)
                   if any(bn.b_partial_poly(n)(F(r)) != 0 for r in list(range(3, n, 2)) + [n])]
    ok = forms and zeros and g and divides and dt < 10
    acceptance(6, ok, f"factored forms {forms}, zeros {{3,5,..,n+1,n+2}} for even n<=40 {zeros}, "
                      f"g_2/g_4/g_6 {g}, {dt:.2f}s; literal set {{3,..,n-1,n}} fails for n = "
                      f"{literal_bad[0]}..{literal_bad[-1]} (b_n(n) = b_n != 0)")
    assert ok


@pytest.mark.xfail(strict=True, reason="literal zero set {3,5,...,n-1,n} is off by an index shift: b_n(n) = b_n != 0")
def test_criterion_6_literal_zero_set():
    for n in range(2, 41, 2):
        for r in list(range(3, n, 2)) + [n]:
            assert bn.b_partial_poly(n)(F(r)) == 0


# 7 ---------------------------------------------------------------------------


def test_criterion_7_stieltjes_zero_sums(acceptance):
    oracle = [float(mpmath.stieltjes(k)) for k in range(3)]

    def body():
        g = zs.stieltjes_set(2, 10**6)
        gerr = max(abs(g[k] - oracle[k]) for k in range(3))
        diffs = [abs(zs.z_sum_from_zeros(n).total - zs.z_closed_form(n, g)) for n in (1, 2, 3)]
        closed = [zs.z_closed_form(n, g) for n in (1, 2, 3)]
        back = zs.gammas_from_z(closed)
        rt = max(abs(back[k] - g[k]) for k in range(3))
        rep = zs.sign_discrepancy_report(closed[1], g[0], oracle[1])
        return gerr, diffs, rt, rep

    (gerr, diffs, rt, rep), dt = timed(body)
    ok = gerr < 1e-7 and max(diffs) < 1e-3 and rt < 1e-12 and rep.metadata["selected"] == "consistent" and dt < 60
    signs = {r["variant"]: r["abs_err_vs_oracle"] for r in rep.records()}
    acceptance(7, ok, f"gamma_0..2 err {gerr:.1e}, |Z(n) zeros - closed| {max(diffs):.1e}, round trip {rt:.1e}, "
                      f"gamma_1 sign: +pi^2/8 err {signs['consistent']:.1e} vs printed -pi^2/8 err "
                      f"{signs['as-printed']:.2f}, {dt:.2f}s")
    assert ok


# 8 ---------------------------------------------------------------------------


def test_criterion_8_zero_scan(acceptance):
    def body():
        coarse = zc.scan_zeros(10, 50, 0.05)
        fine = zc.scan_zeros(10, 50, 0.005)
        return coarse, fine

    (coarse, fine), dt = timed(body)
    diff = max(abs(a - b) for a, b in zip(coarse[:10], fine[:10]))
    first = abs(coarse[0] - 14.134725)
    ok = len(coarse) >= 10 and len(fine) >= 10 and diff < 1e-4 and first < 1e-4 and dt < 120
    acceptance(8, ok, f"first 10 vs 10x finer scan {diff:.1e}, first ordinate err {first:.1e}, {dt:.2f}s")
    assert ok


# 9 ---------------------------------------------------------------------------


def test_criterion_9_elliptic(acceptance):
    curves = el.bundled_curves()
    ladder = [100, 1000, 10000]

    def body():
        el._trace_cache.clear()
        table = sieve_to_count(2 * 10**4)
        agree = hasse = True
        for E in curves.values():
            for p in (int(q) for q in table.primes if q <= 997):
                if p >= 5 and E.good_reduction(p):
                    agree &= el.count_points_enumerate(E, p) == el.count_points_character(E, p)
                d = el.count_points(E, p)
                if d.good_reduction:
                    hasse &= abs(d.a_p) <= 2 * math.sqrt(p)
        splice = 0.0
        for E in curves.values():
            for z in (1.0, 2.0, 0.5 + 3j):
                lhs = el.l_partial(E, z, 2000, table)
                rhs = el.l_partial(E, z, 300, table) * el.l_range_product(E, z, 300, 2000, table)
                splice = max(splice, abs(lhs - rhs) / abs(lhs))
        probes = {k: el.vanishing_probe(curves[k], ladder, table) for k in ("11a1-rank0", "37a1-rank1")}
        # recomputation from scratch, on 4 threads
        el._trace_cache.clear()
        _parallel.set_threads(4)
        try:
            again = {k: el.vanishing_probe(curves[k], ladder, table) for k in probes}
        finally:
            _parallel.set_threads(1)
        same = all(probes[k].rows == again[k].rows for k in probes)
        return agree, hasse, splice, probes, same

    (agree, hasse, splice, probes, same), dt = timed(body)
    ok = agree and hasse and splice < 1e-12 and same and dt < 120
    slopes = ", ".join(f"{k} slope vs log log n {probes[k].metadata['slope_log_log_n']:.2f}" for k in probes)
    acceptance(9, ok, f"counts agree {agree}, Hasse {hasse}, splice {splice:.1e}, probe bit-identical {same}; "
                      f"{slopes}; {dt:.2f}s")
    assert ok


# 10 --------------------------------------------------------------------------


def test_criterion_10_character_identity(acceptance):
    def body():
        reports = [ci.verify_identity(p) for p in (7, 11, 19, 23, 31)]
        sizes = all(ci.triple_set_size(p) == len(ci.enumerate_triples(p))
                    for p in range(3, 51) if all(p % d for d in range(2, p)))
        return reports, sizes

    (reports, sizes), dt = timed(body)
    worst = max(r.abs_diff for r in reports)
    literal = max(r.abs_diff_literal for r in reports)
    ok = worst < 1e-8 and sizes and all(r.triple_count == (r.p - 1) * (r.p - 2) for r in reports) and dt < 10
    acceptance(10, ok, f"|LHS - RHS| <= {worst:.1e} with sqrt(-p) = i sqrt(p); |S| = (p-1)(p-2) for p <= 50 {sizes}; "
                       f"{dt:.2f}s; real-sqrt(p) reading misses by up to {literal:.1f}")
    assert ok


@pytest.mark.xfail(strict=True, reason="LHS is purely imaginary; the identity needs sqrt(-p), not a real sqrt(p)")
def test_criterion_10_real_root_reading():
    for p in (7, 11, 19, 23, 31):
        r = ci.verify_identity(p)
        assert r.abs_diff_literal < 1e-8
        assert abs(r.lhs.imag) < 1e-9


# 11 --------------------------------------------------------------------------

CLI_COMMANDS = [
    ["zeta", "--z", "0.5", "--method", "eta"],
    ["fn-ratio", "--z", "0.5+14.134725i", "--ladder", "100,1000,10000", "--format", "csv"],
    ["identity45", "--p", "7"],
    ["zeta", "--z", "0.5+14.134725i", "--method", "euler", "--ladder", "100,1000,10000", "--format", "json"],
    ["window-sum", "--z", "0.5+14.134725i", "--ladder", "100,1000,10000", "--format", "csv"],
    ["prime-zeta", "--z", "0.7", "--method", "regularized", "--ladder", "1000,10000", "--format", "csv"],
    ["probe-rank", "--curve", "37a1-rank1", "--ladder", "100,1000", "--format", "csv"],
    ["zsum", "--format", "json"],
    ["report-special", "--format", "csv"],
]


def test_criterion_11_cli_determinism(acceptance):
    def run(argv):
        res = subprocess.run([sys.executable, "-m", "zreg.cli", *argv], capture_output=True, check=False)
        return res.returncode, res.stdout

    bad = []
    for argv in CLI_COMMANDS:
        c1, o1 = run(argv + ["--threads", "1"])
        c4, o4 = run(argv + ["--threads", "4"])
        if c1 != 0 or c4 != 0 or o1 != o4 or not o1:
            bad.append(argv[0])
    ok = not bad
    acceptance(11, ok, f"{len(CLI_COMMANDS)} commands byte-identical under --threads 1 and 4"
                       + (f"; differing: {bad}" if bad else ""))
    assert ok
