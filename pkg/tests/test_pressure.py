"""Pressure sums and crossing exponents against independent oracles."""

import math
from fractions import Fraction as F

import mpmath as mp
import pytest

from cfdim.errors import DomainError, InvariantViolation, ResourceError
from cfdim.pressure import (
    EXACT,
    CurvePoint,
    PressureProblem,
    extrapolate_sB,
    pressure_sum,
    sB_curve,
    solve_s,
)


def brute_force_sum(alphabet, B, n, rho):
    """Direct enumeration oracle, independent of the DFS implementation."""
    import itertools
    total = F(0) if rho == int(rho) else 0.0
    acc = []
    for word in itertools.product(alphabet, repeat=n):
        p_prev, q_prev, p, q = 1, 0, 0, 1
        for a in word:
            interleaved = (1, a)
            for t in interleaved:
                p_prev, p = p, t * p + p_prev
                q_prev, q = q, t * q + q_prev
        acc.append((B ** (2 * n) * q * q))
    return sum(float(b) ** (-rho) for b in acc)


# --------------------------------------------------------------------------
# pressure_sum
# --------------------------------------------------------------------------

def test_sum_single_word():
    p = PressureProblem((1,), F(2), 1)
    assert pressure_sum(p, 1.0).value == pytest.approx(1 / 16, abs=1e-15)


def test_sum_two_words():
    p = PressureProblem((1, 2), F(2), 1)
    assert pressure_sum(p, 1.0).value == pytest.approx(13 / 144, abs=1e-15)


def test_sum_rho_zero_counts_words():
    for alpha, n in ((2, 1), (3, 2), (4, 3)):
        p = PressureProblem.with_alpha(alpha, F(2), n)
        assert pressure_sum(p, 0.0).value == alpha**n


@pytest.mark.parametrize("alpha,B,n,rho", [
    (3, F(2), 2, 0.7), (2, F(3, 2), 3, 0.4), (4, F(5), 1, 0.9)])
def test_sum_matches_brute_force(alpha, B, n, rho):
    p = PressureProblem.with_alpha(alpha, B, n)
    got = pressure_sum(p, rho)
    want = brute_force_sum(range(1, alpha + 1), B, n, rho)
    assert got.value == pytest.approx(want, rel=1e-12)


def test_sum_strictly_decreasing_in_rho():
    p = PressureProblem.with_alpha(3, F(2), 2)
    vals = [pressure_sum(p, 0.1 * i).value for i in range(10)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_sum_deterministic_across_threads():
    p = PressureProblem.with_alpha(4, F(2), 4)
    a = pressure_sum(p, 0.37, threads=1).value
    b = pressure_sum(p, 0.37, threads=4).value
    assert a == b    # bit-identical by fixed reduction order


def test_budget_cap():
    p = PressureProblem.with_alpha(4, F(2), 4)
    with pytest.raises(ResourceError) as e:
        pressure_sum(p, 0.5, budget=100)
    assert "100" in str(e.value)


def test_rejects_bad_problems():
    with pytest.raises(DomainError):
        PressureProblem((), F(2), 1)
    with pytest.raises(DomainError):
        PressureProblem((1, 2), F(1), 1)
    with pytest.raises(DomainError):
        PressureProblem((1, 2), F(2), 0)
    with pytest.raises(DomainError):
        PressureProblem.with_alpha(2, F(2), 1, "bogus")


# --------------------------------------------------------------------------
# exact mode
# --------------------------------------------------------------------------

def test_exact_mode_rho_zero_exact():
    p = PressureProblem.with_alpha(3, F(2), 2, EXACT)
    r = pressure_sum(p, F(0))
    assert r.lo == 9 == r.hi


def test_exact_mode_encloses_true_value():
    p = PressureProblem.with_alpha(2, F(2), 1, EXACT)
    r = pressure_sum(p, F(1, 2))
    assert r.lo <= F(1, 4) + F(1, 6) <= r.hi
    assert r.hi - r.lo < F(1, 10**30)


@pytest.mark.parametrize("rho", [F(1, 2), F(1, 4), F(3, 8), F(5, 16)])
def test_exact_and_float_agree(rho):
    pe = PressureProblem.with_alpha(3, F(2), 2, EXACT)
    pf = PressureProblem.with_alpha(3, F(2), 2)
    re = pressure_sum(pe, rho)
    rf = pressure_sum(pf, float(rho))
    assert float(re.lo) - rf.error_bound <= rf.value <= float(re.hi) + rf.error_bound


def test_exact_mode_rejects_non_dyadic():
    p = PressureProblem.with_alpha(2, F(2), 1, EXACT)
    with pytest.raises(DomainError):
        pressure_sum(p, F(1, 3))


# --------------------------------------------------------------------------
# solve_s
# --------------------------------------------------------------------------

def test_solve_single_letter_exact_zero():
    for n in (1, 2, 5):
        sol = solve_s(PressureProblem.with_alpha(1, F(2), n), 1e-10)
        assert sol.s_value == 0.0 and sol.residual == 0.0


def test_solve_matches_high_precision_oracle():
    # root of 16^-r + 36^-r = 1 via mpmath at 40 digits
    mp.mp.dps = 40
    oracle = mp.findroot(lambda r: mp.mpf(16)**(-r) + mp.mpf(36)**(-r) - 1,
                         mp.mpf("0.22"))
    sol = solve_s(PressureProblem.with_alpha(2, F(2), 1), 1e-12)
    assert abs(sol.s_value - float(oracle)) < 1e-9
    assert sol.residual <= 1e-9
    assert sol.bracket[0] <= sol.s_value <= sol.bracket[1]


def test_solve_decreasing_in_B():
    s2 = solve_s(PressureProblem.with_alpha(2, F(2), 1), 1e-10).s_value
    s4 = solve_s(PressureProblem.with_alpha(2, F(4), 1), 1e-10).s_value
    assert s4 < s2


def test_solve_residual_target_met_across_grid():
    for B in (F(3, 2), F(2), F(10)):
        for alpha in (2, 3):
            for n in (1, 2, 3):
                sol = solve_s(PressureProblem.with_alpha(alpha, B, n), 1e-10)
                assert sol.residual <= 1e-9


def test_solve_exact_mode_certified():
    mp.mp.dps = 40
    oracle = float(mp.findroot(
        lambda r: mp.mpf(16)**(-r) + mp.mpf(36)**(-r) - 1, mp.mpf("0.22")))
    sol = solve_s(PressureProblem.with_alpha(2, F(2), 1, EXACT), 1e-6)
    assert sol.mode == EXACT
    assert abs(sol.s_value - oracle) < 1e-6
    assert sol.bracket[0] <= oracle <= sol.bracket[1]


# --------------------------------------------------------------------------
# monotonicity / subadditivity battery (small slice; the full grid runs in
# the acceptance suite)
# --------------------------------------------------------------------------

def solve_grid(Bs, alphas, ns, tol=1e-10):
    return {(B, a, n): solve_s(PressureProblem.with_alpha(a, B, n), tol).s_value
            for B in Bs for a in alphas for n in ns}


def test_monotone_in_alpha_and_B():
    vals = solve_grid((F(2), F(4)), (1, 2, 3), (1, 2))
    slack = 1e-8
    for B in (F(2), F(4)):
        for n in (1, 2):
            assert vals[(B, 1, n)] <= vals[(B, 2, n)] + slack <= vals[(B, 3, n)] + 2 * slack
    for a in (1, 2, 3):
        for n in (1, 2):
            assert vals[(F(4), a, n)] <= vals[(F(2), a, n)] + slack


def test_subadditivity_relations():
    vals = solve_grid((F(2),), (3,), (1, 2, 3, 4))
    slack = 1e-8
    assert vals[(F(2), 3, 2)] <= vals[(F(2), 3, 1)] + slack
    assert vals[(F(2), 3, 4)] <= vals[(F(2), 3, 2)] + slack
    for n, k in ((1, 2), (2, 2), (1, 3)):
        lhs = vals[(F(2), 3, n + k)]
        assert lhs <= max(vals[(F(2), 3, n)], vals[(F(2), 3, k)]) + slack


def test_f_product_bounds():
    p = {n: PressureProblem.with_alpha(3, F(2), n) for n in (1, 2, 3, 4)}
    for rho in (0.3, 0.6, 0.9):
        f = {n: pressure_sum(p[n], rho).value for n in p}
        for n, k in ((1, 1), (1, 2), (2, 2), (1, 3)):
            assert 0.25 * f[n] * f[k] * (1 - 1e-12) <= f[n + k]
            assert f[n + k] <= f[n] * f[k] * (1 + 1e-12)


# --------------------------------------------------------------------------
# extrapolation and curve
# --------------------------------------------------------------------------

def test_extrapolate_alpha_one_zero_spread():
    r = extrapolate_sB(F(2), 1, (1, 2, 3), 1e-10)
    assert r.estimate == 0.0 and r.uncertainty == 0.0


def test_extrapolate_structure():
    r = extrapolate_sB(F(2), 3, (1, 2, 3, 4), 1e-10)
    assert r.violations == () and r.lower_bound_structure_ok
    assert r.estimate == min(d.s for d in r.per_depth)
    by_n = {d.n: d.s for d in r.per_depth}
    assert by_n[2] <= by_n[1] + 1e-8 and by_n[4] <= by_n[2] + 1e-8


def test_extrapolate_rejects_bad_schedule():
    with pytest.raises(DomainError):
        extrapolate_sB(F(2), 2, (2, 2, 3), 1e-10)


def test_extrapolate_budget():
    with pytest.raises(ResourceError):
        extrapolate_sB(F(2), 4, (1, 14), 1e-10, budget=10**6)


def test_curve_strictly_decreasing():
    pts = sB_curve([F(2), F(4), F(8)], 2, 2, 1e-10)
    assert pts[0].s > pts[1].s > pts[2].s


def test_curve_duplicate_B_identical():
    pts = sB_curve([F(2), F(2)], 2, 2, 1e-10)
    assert pts[0].s == pts[1].s


def test_curve_continuity_spot():
    pts = sB_curve([F(11, 10), F(11, 10) + F(1, 10**6)], 2, 2, 1e-10)
    assert abs(pts[1].s - pts[0].s) < 1e-3
