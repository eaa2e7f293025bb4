"""One-command verification battery.

Each check re-derives its expected values independently of the code path it
exercises (brute-force enumeration, high-precision root finding, endpoint
arithmetic) and reports a single pass/fail line. ``run_all`` executes the
full battery in order; the CLI's verify-suite and the acceptance test module
both call into here.

Check 5 (large-base trend) is known to fail by design of its premise: at a
fixed alphabet cutoff the crossing exponents drain to 0 as the base grows,
so their distance to 1/2 increases; only the unrestricted alphabet
approaches 1/2. The check is kept as stated rather than weakened; see its
docstring.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction as F

import mpmath

from . import cf_core, decompose, dimension, geometry, pressure

__all__ = ["CheckResult", "run_all", "ALL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    check_id: int
    name: str
    passed: bool
    detail: str
    elapsed: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check_id:02d} {self.name}: {self.detail} ({self.elapsed:.2f}s)"


def _timed(check_id, name, fn):
    t0 = time.perf_counter()
    passed, detail = fn()
    return CheckResult(check_id, name, passed, detail, time.perf_counter() - t0)


# --------------------------------------------------------------------------

def check_01_special_decompositions() -> CheckResult:
    """The four closed-form specials reproduce exactly."""

    def run():
        cases = [
            (F(3, 2), "sum", "[0;1,1]", "[0;1]"),
            (F(2), "sum", "[0;1]", "[0;1]"),
            (F(1, 2), "product", "[0;1,1]", "[0;1]"),
            (F(1), "product", "[0;1]", "[0;1]"),
        ]
        for x, op, first, second in cases:
            r = (decompose.sum_decompose(x) if op == "sum"
                 else decompose.product_decompose(x))
            if r.status != decompose.TERMINATED:
                return False, f"{x} ({op}) did not terminate exactly"
            if (str(r.first), str(r.second)) != (first, second):
                return False, f"{x} ({op}) gave {r.first} , {r.second}"
            rep = decompose.verify_decomposition(r, x, op)
            if not (rep.ok and rep.residual == 0):
                return False, f"{x} ({op}) residual {rep.residual}"
        return True, "4 closed-form specials exact"

    return _timed(1, "special decompositions", run)


def check_02_greedy_feasibility() -> CheckResult:
    """500 random rationals per construction: no infeasibility, odd-order
    quotients all 1, brackets contain x with non-increasing widths."""

    def run():
        rng = random.Random(20240)
        checked = 0
        for op in ("sum", "product"):
            runner = (decompose.sum_decompose if op == "sum"
                      else decompose.product_decompose)
            count = 0
            while count < 500:
                q = rng.randrange(2, 10**6)
                if op == "sum":
                    p = rng.randrange(-((-3 * q) // 2), 2 * q)
                    x = F(p, q)
                    if not F(3, 2) <= x < 2:
                        continue
                else:
                    p = rng.randrange((q + 1) // 2, q)
                    x = rng.randrange(0, 6) + F(p, q)
                    frac = x - (x.numerator // x.denominator)
                    if x <= 0 or not F(1, 2) <= frac < 1:
                        continue
                count += 1
                r = runner(x, 32)
                for seq in (r.first, r.second):
                    qs = seq.to_cf().quotients
                    if any(qs[i] != 1 for i in range(0, len(qs), 2)):
                        return False, f"odd-order quotient != 1 for x={x} ({op})"
                lo = hi = None
                prev_width = None
                for s in r.step_log:
                    lo = s.low if lo is None else max(lo, s.low)
                    hi = s.high if hi is None else min(hi, s.high)
                    if not lo <= x < hi:
                        return False, f"bracket misses x={x} ({op})"
                    if prev_width is not None and hi - lo > prev_width:
                        return False, f"bracket widened for x={x} ({op})"
                    prev_width = hi - lo
                if r.status == decompose.TERMINATED:
                    got = (r.first.value() + r.second.value() if op == "sum"
                           else r.first.value() * r.second.value())
                    if got != x:
                        return False, f"reconstruction failed for x={x} ({op})"
                checked += 1
        return True, f"{checked} random decompositions feasible and bracketed"

    return _timed(2, "greedy feasibility", run)


def check_03_pressure_solver() -> CheckResult:
    """Crossing at alpha=2, n=1, B=2 vs a 40-digit oracle; residuals <= 1e-9;
    one-letter alphabets give exactly 0."""

    def run():
        mpmath.mp.dps = 40
        oracle = float(mpmath.findroot(
            lambda r: mpmath.mpf(16)**(-r) + mpmath.mpf(36)**(-r) - 1,
            mpmath.mpf("0.22")))
        sol = pressure.solve_s(
            pressure.PressureProblem.with_alpha(2, F(2), 1), 1e-12)
        if abs(sol.s_value - oracle) > 1e-9:
            return False, f"oracle gap {abs(sol.s_value - oracle):.2e}"
        if sol.residual > 1e-9:
            return False, f"residual {sol.residual:.2e}"
        for alpha, B, n in ((2, F(2), 2), (3, F(3, 2), 1), (4, F(10), 2)):
            s = pressure.solve_s(
                pressure.PressureProblem.with_alpha(alpha, B, n), 1e-11)
            if s.residual > 1e-9:
                return False, f"residual {s.residual:.2e} at alpha={alpha}"
        for n in (1, 3):
            z = pressure.solve_s(
                pressure.PressureProblem.with_alpha(1, F(2), n), 1e-10)
            if z.s_value != 0.0 or z.residual != 0.0:
                return False, "one-letter alphabet crossing not exactly 0"
        return True, f"oracle gap {abs(sol.s_value - oracle):.1e}, residuals <= 1e-9"

    return _timed(3, "pressure solver correctness", run)


def check_04_monotonicity_suite() -> CheckResult:
    """Crossings over B x alpha x n: monotone in alpha and B, subadditive in
    depth; quarter/product bounds on the sums at three exponents."""

    def run():
        Bs = (F(3, 2), F(2), F(4), F(10))
        alphas = (1, 2, 3, 4)
        ns = (1, 2, 3, 4)
        tol = 1e-10
        slack = 4 * tol + 1e-12
        vals = {}
        for B, a, n in itertools.product(Bs, alphas, ns):
            sol = pressure.solve_s(
                pressure.PressureProblem.with_alpha(a, B, n), tol)
            if a > 1 and sol.residual > 1e-9:
                return False, f"residual {sol.residual:.2e} at {(B, a, n)}"
            vals[(B, a, n)] = sol.s_value
        for B, a, n in itertools.product(Bs, alphas, ns):
            if a < 4 and vals[(B, a, n)] > vals[(B, a + 1, n)] + slack:
                return False, f"not monotone in alpha at {(B, a, n)}"
        for i in range(len(Bs) - 1):
            for a, n in itertools.product(alphas, ns):
                if vals[(Bs[i + 1], a, n)] > vals[(Bs[i], a, n)] + slack:
                    return False, f"not monotone in B at {(Bs[i], a, n)}"
        for B, a in itertools.product(Bs, alphas):
            for n in (1, 2):
                if vals[(B, a, 2 * n)] > vals[(B, a, n)] + slack:
                    return False, f"doubling relation fails at {(B, a, n)}"
            for n, k in itertools.product(ns, ns):
                if n + k <= 4 and vals[(B, a, n + k)] > \
                        max(vals[(B, a, n)], vals[(B, a, k)]) + slack:
                    return False, f"subadditivity fails at {(B, a, n, k)}"
        for B, a in itertools.product(Bs, (2, 3, 4)):
            probs = {n: pressure.PressureProblem.with_alpha(a, B, n) for n in ns}
            for rho in (0.3, 0.6, 0.9):
                f = {n: pressure.pressure_sum(probs[n], rho).value for n in ns}
                for n, k in itertools.product((1, 2, 3), repeat=2):
                    if n + k > 4:
                        continue
                    prod = f[n] * f[k]
                    if not (0.25 * prod * (1 - 1e-12) <= f[n + k]
                            <= prod * (1 + 1e-12)):
                        return False, f"sum bounds fail at {(B, a, rho, n, k)}"
        return True, f"{len(vals)} crossings, zero violations"

    return _timed(4, "monotonicity and subadditivity", run)


def check_05_large_base_trend() -> CheckResult:
    """As stated: at alpha=20, n=3, the crossings for B in {10, 100, 1000}
    should close in on 1/2, final distance within 0.1.

    This cannot hold at a fixed alphabet cutoff: the cutoff removes the
    divergence that pins the unrestricted crossing above 1/2, so the values
    decay toward 0 and the distance to 1/2 grows with B. The check runs as
    stated and is expected to fail; it documents the finite-alphabet
    behavior rather than being weakened to match it.
    """

    def run():
        dists = []
        values = []
        for B in (F(10), F(100), F(1000)):
            sol = pressure.solve_s(
                pressure.PressureProblem.with_alpha(20, B, 3), 1e-10)
            values.append(sol.s_value)
            dists.append(abs(sol.s_value - 0.5))
        decreasing = all(b < a for a, b in zip(dists, dists[1:]))
        final_ok = dists[-1] <= 0.1
        detail = ("values " + ", ".join(f"{v:.4f}" for v in values)
                  + "; |s - 1/2| " + ", ".join(f"{d:.4f}" for d in dists))
        return decreasing and final_ok, detail

    return _timed(5, "large-base trend toward 1/2", run)


def check_06_geometry_exactness() -> CheckResult:
    """Depth <= 3 scan over (B, alpha, indices) in {2,3} x {2,3} x
    {(1,3), (1,4)}: lengths and gaps exact, gap floors hold."""

    def run():
        words = 0
        for B, alpha, indices in itertools.product(
                (F(2), F(3)), (2, 3), ((1, 3), (1, 4))):
            sched = geometry.Schedule(indices, B, alpha)
            for n in (1, 2, 3):
                scheduled_children = sched.is_scheduled(n + 1)
                by_prefix = {}
                for w in geometry.enumerate_Dn(sched, n, budget=2**22):
                    by_prefix.setdefault(w.word[:-1], []).append(w)
                for group in by_prefix.values():
                    group.sort(key=lambda w: w.word[-1])
                    Js = [geometry.fundamental_interval(w) for w in group]
                    reports = [geometry.gaps(w) for w in group]
                    for w, J in zip(group, Js):
                        if J.length != geometry.closed_form_length(w):
                            return False, f"length mismatch at {w.word}"
                    for (Ja, ga), (Jb, gb) in zip(zip(Js, reports),
                                                  zip(Js[1:], reports[1:])):
                        diff = Jb.left - Ja.right
                        if ga.g_right != diff or gb.g_left != diff:
                            return False, f"gap mismatch near {gb.word.word}"
                    for w, J, g in zip(group, Js, reports):
                        floor = (2 * J.length if scheduled_children
                                 else F(2, alpha) * J.length)
                        if g.g_min is None or g.g_min < floor:
                            return False, f"gap floor fails at {w.word}"
                        words += 1
        return True, f"{words} words exact (lengths, gaps, floors)"

    return _timed(6, "interval geometry exactness", run)


def check_07_measure() -> CheckResult:
    """Level-1 mass exactly 1; child sums within 1e-12 relative to depth 3;
    the mass-vs-length exponent inequality with its exact constant."""

    def run():
        for indices in ((1, 3), (1, 4)):
            sched = geometry.Schedule(indices, F(2), 2)
            table = {
                m: pressure.solve_s(
                    pressure.PressureProblem.with_alpha(2, F(2), m),
                    1e-14, residual_target=1e-13).s_value
                for m in (1, 2)}
            level1 = [geometry.measure_mu(w, table)
                      for w in geometry.enumerate_Dn(sched, 1)]
            if sum(n.mu_exact for n in level1) != 1:
                return False, f"level-1 mass not exactly 1 for {indices}"
            for n in (1, 2):
                for w in geometry.enumerate_Dn(sched, n):
                    parent = geometry.measure_mu(w, table)
                    total = math.fsum(geometry.measure_mu(c, table).mu
                                      for c in geometry.children(w))
                    if abs(total - parent.mu) > 1e-12 * parent.mu:
                        return False, (f"child sum off by "
                                       f"{abs(total - parent.mu) / parent.mu:.2e} "
                                       f"at {w.word}")
            est = pressure.extrapolate_sB(F(2), 2, (1, 2, 3), 1e-12)
            params = geometry.EstimationParams.from_schedule(sched, est.estimate,
                                                             0.05)
            for n in (1, 2, 3):
                for w in geometry.enumerate_Dn(sched, n):
                    node = geometry.measure_mu(w, table)
                    J = geometry.fundamental_interval(w)
                    if not geometry.holder_exponent_ok(node, J.length, params):
                        return False, f"exponent inequality fails at {w.word}"
        return True, "mass exact at level 1, consistent to depth 3, exponent ok"

    return _timed(7, "mass distribution", run)


def check_08_luczak() -> CheckResult:
    """S(4,2) = 12 and the count bound over m <= 200, k <= 5."""

    def run():
        exact, bound = geometry.luczak_count(4, 2)
        if exact != 12:
            return False, f"S(4,2) = {exact}"
        if not math.isclose(bound, 4 * (2 + math.log(4))):
            return False, f"bound {bound}"
        for m in range(1, 201):
            for k in range(1, 6):
                exact, bound = geometry.luczak_count(m, k)
                if exact > bound:
                    return False, f"bound violated at m={m}, k={k}"
        return True, "S(4,2)=12; bound holds for m<=200, k<=5"

    return _timed(8, "sequence-count bound", run)


def check_09_nested_ratio() -> CheckResult:
    """R_8 at b=c=2 within 1e-3 of 0.2; monotone approach on the grid."""

    def run():
        r8 = geometry.nested_Ek_ratio(2.0, 2.0, 8)
        if abs(r8.ratio - 0.2) > 1e-3:
            return False, f"|R_8 - 0.2| = {abs(r8.ratio - 0.2):.2e}"
        for b, c in itertools.product((1.5, 2.0, 3.0), repeat=2):
            target = 1 / (1 + b * b)
            errs = [abs(geometry.nested_Ek_ratio(b, c, k).ratio - target)
                    for k in range(3, 9)]
            if not all(e2 < e1 for e1, e2 in zip(errs, errs[1:])):
                return False, f"approach not monotone at (b, c) = ({b}, {c})"
        return True, f"|R_8 - 0.2| = {abs(r8.ratio - 0.2):.1e}; 9 grids monotone"

    return _timed(9, "nested-ratio convergence", run)


def check_10_classifier() -> CheckResult:
    """All five growth cases are hit with their dimension forms."""

    def run():
        got = {}
        specs = [
            dimension.PhiSpec.power(2),
            dimension.PhiSpec.exponential(3),
            dimension.PhiSpec.expression(lambda n: float(n * n), log_values=True),
            dimension.PhiSpec.double_exponential(2, 5),
            dimension.PhiSpec.expression(
                lambda n: math.exp(n * n) if n * n < 700 else math.inf,
                log_values=True),
        ]
        for spec in specs:
            g = dimension.classify_phi(spec, alpha=6, depths=(1, 2), tol=1e-7)
            got[g.case_tag] = g
        expected = {
            dimension.CASE_B_EQ_1, dimension.CASE_B_FINITE,
            dimension.CASE_B_INF_B_EQ_1, dimension.CASE_B_INF_B_FINITE,
            dimension.CASE_B_INF_B_INF}
        if set(got) != expected:
            return False, f"cases hit: {sorted(got)}"
        checks = [
            got[dimension.CASE_B_EQ_1].dimension.kind == "interval"
            and got[dimension.CASE_B_EQ_1].dimension.upper is None,
            got[dimension.CASE_B_FINITE].dimension.kind == "s_B"
            and 0 < got[dimension.CASE_B_FINITE].dimension.value < 1,
            got[dimension.CASE_B_INF_B_EQ_1].dimension.value == 0.5,
            abs(got[dimension.CASE_B_INF_B_FINITE].dimension.value - 0.2) < 1e-12,
            got[dimension.CASE_B_INF_B_INF].dimension.value == 0.0,
        ]
        if not all(checks):
            return False, f"dimension forms wrong: {checks}"
        return True, "five cases hit with correct dimension forms"

    return _timed(10, "growth classifier", run)


def check_11_oracle_equivalence() -> CheckResult:
    """Comparison agrees with evaluation; expansion and evaluation invert
    each other on their canonical domains (exhaustive small words)."""

    def run():
        pool = [cf_core.CFExpansion(0)]
        for n in range(1, 7):
            for w in itertools.product(range(1, 5), repeat=n):
                e = cf_core.CFExpansion(0, w)
                if e.canonical:
                    pool.append(e)
        for e in pool:
            if cf_core.expand(cf_core.evaluate(e)) != e:
                return False, f"expand(evaluate) misses {e}"
        for q in range(1, 80):
            for p in range(0, q + 1):
                x = F(p, q)
                if cf_core.evaluate(cf_core.expand(x)) != x:
                    return False, f"evaluate(expand) misses {x}"
        short = [e for e in pool if len(e.quotients) <= 5]
        vals = [cf_core.evaluate(e) for e in short]
        for i, a in enumerate(short):
            for j in range(i + 1, len(short)):
                want = -1 if vals[i] < vals[j] else (1 if vals[i] > vals[j] else 0)
                if cf_core.compare(a, short[j]) != want:
                    return False, f"compare disagrees on {a}, {short[j]}"
        rng = random.Random(11)
        for _ in range(4000):
            wa = tuple(rng.randrange(1, 5) for _ in range(rng.randrange(1, 7)))
            wb = tuple(rng.randrange(1, 5) for _ in range(rng.randrange(1, 7)))
            a, b = cf_core.CFExpansion(0, wa), cf_core.CFExpansion(0, wb)
            va, vb = cf_core.evaluate(a), cf_core.evaluate(b)
            want = -1 if va < vb else (1 if va > vb else 0)
            if cf_core.compare(a, b) != want:
                return False, f"compare disagrees on {wa}, {wb}"
        return True, (f"{len(pool)} canonical words invert; "
                      f"{len(short)}^2/2 pairs + 4000 random pairs ordered")

    return _timed(11, "comparison and inversion oracles", run)


ALL_CHECKS = [
    check_01_special_decompositions,
    check_02_greedy_feasibility,
    check_03_pressure_solver,
    check_04_monotonicity_suite,
    check_05_large_base_trend,
    check_06_geometry_exactness,
    check_07_measure,
    check_08_luczak,
    check_09_nested_ratio,
    check_10_classifier,
    check_11_oracle_equivalence,
]


def run_all() -> list[CheckResult]:
    return [fn() for fn in ALL_CHECKS]
