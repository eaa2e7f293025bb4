"""Finite pressure sums and their unit-crossing exponents.

For an alphabet A of admissible even-order quotients, base B > 1 and depth n,
the pressure sum is

    f(rho) = sum over (a2, a4, ..., a2n) in A^n of (B^(2n) q^2)^(-rho),

with q the denominator of [0; 1, a2, 1, a4, ..., 1, a2n]. f is strictly
decreasing with f(0) = |A|^n and f(1) <= 1, so the crossing

    s = inf { rho >= 0 : f(rho) <= 1 }

lies in [0, 1] and is found by bisection. The crossings are non-decreasing
in the alphabet, non-increasing in B, and subadditive in depth, which is
what the extrapolation below exploits: every finite-depth value upper-bounds
the depth limit, so the running minimum is the honest estimate.

Two summation modes: compensated floats (Neumaier, deterministic reduction
order, reported error bound) and certified rational enclosures for dyadic
exponents rho = m / 2^j, where roots come from integer-square-root bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, InvariantViolation, ResourceError

__all__ = [
    "PressureProblem",
    "PressureSumResult",
    "PressureSolution",
    "ExtrapolationResult",
    "CurvePoint",
    "pressure_sum",
    "solve_s",
    "extrapolate_sB",
    "sB_curve",
    "DEFAULT_LEAF_BUDGET",
]

EXACT = "exact_rational"
FLOAT = "compensated_float"

DEFAULT_LEAF_BUDGET = 2**26
DEFAULT_RESIDUAL_TARGET = 1e-9
_MAX_ITERATIONS = 220
_EXACT_PREC = 128           # dyadic grid bits for interval rounding
_MAX_DYADIC_DEPTH = 48      # exact-mode bisection depth cap


@dataclass(frozen=True)
class PressureProblem:
    """Alphabet, base, depth, and summation mode for one pressure sum."""

    alphabet: tuple[int, ...]
    B: Fraction
    n: int
    summation_mode: str = FLOAT

    def __post_init__(self):
        if not self.alphabet or any(a < 1 for a in self.alphabet):
            raise DomainError("alphabet must be non-empty positive integers")
        if sorted(set(self.alphabet)) != list(self.alphabet):
            raise DomainError("alphabet must be strictly increasing and duplicate-free")
        if self.B <= 1:
            raise DomainError(f"base must satisfy B > 1, got {self.B}")
        if self.n < 1:
            raise DomainError("depth n must be >= 1")
        if self.summation_mode not in (EXACT, FLOAT):
            raise DomainError(f"unknown summation mode {self.summation_mode!r}")

    @classmethod
    def with_alpha(cls, alpha: int, B: Fraction, n: int,
                   summation_mode: str = FLOAT) -> "PressureProblem":
        if alpha < 1:
            raise DomainError("alphabet bound must be >= 1")
        return cls(tuple(range(1, alpha + 1)), Fraction(B), n, summation_mode)

    @property
    def leaves(self) -> int:
        return len(self.alphabet) ** self.n


@dataclass(frozen=True)
class PressureSumResult:
    value: float
    error_bound: float
    leaves: int
    lo: Fraction | None = None    # certified enclosure (exact mode only)
    hi: Fraction | None = None


@dataclass(frozen=True)
class PressureSolution:
    s_value: float
    residual: float
    iterations: int
    bracket: tuple[float, float]
    tolerance: float
    mode: str = FLOAT
    leaves: int = 0


class _Neumaier:
    """Compensated accumulator; adds in call order, so reductions are
    reproducible whenever the term order is."""

    __slots__ = ("s", "c")

    def __init__(self):
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def total(self) -> float:
        return self.s + self.c


def _check_budget(problem: PressureProblem, budget: int) -> int:
    leaves = problem.leaves
    if leaves > budget:
        raise ResourceError(
            f"enumeration needs {leaves} leaves, over the budget of {budget}; "
            "raise the budget explicitly to proceed")
    return leaves


# --------------------------------------------------------------------------
# float mode
# --------------------------------------------------------------------------

def _float_partition(alphabet: Sequence[int], n: int, rho: float,
                     log_scale: float, first: int) -> float:
    """Sum of the subtree rooted at first symbol, in lexicographic order."""
    acc = _Neumaier()

    def rec(level: int, q_prev: int, q: int) -> None:
        q_odd = q + q_prev
        if level == n:
            for a in alphabet:
                q_even = a * q_odd + q
                acc.add(math.exp(-rho * (log_scale + 2.0 * math.log(q_even))))
            return
        for a in alphabet:
            rec(level + 1, q_odd, a * q_odd + q)

    q_odd0 = 1  # q1 of the leading odd-order 1
    q0 = first * q_odd0 + 1
    if n == 1:
        acc.add(math.exp(-rho * (log_scale + 2.0 * math.log(q0))))
    else:
        rec(2, q_odd0, q0)
    return acc.total


def _pressure_sum_float(problem: PressureProblem, rho: float, budget: int,
                        threads: int) -> PressureSumResult:
    leaves = _check_budget(problem, budget)
    log_scale = 2.0 * problem.n * (math.log(problem.B.numerator)
                                   - math.log(problem.B.denominator))
    args = [(problem.alphabet, problem.n, rho, log_scale, a)
            for a in problem.alphabet]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda t: _float_partition(*t), args))
    else:
        partials = [_float_partition(*t) for t in args]
    acc = _Neumaier()
    for p in partials:       # fixed combine order: alphabet order
        acc.add(p)
    value = acc.total
    bound = 4.0 * leaves * math.ulp(max(abs(value), 1e-300))
    return PressureSumResult(value, bound, leaves)


# --------------------------------------------------------------------------
# exact mode: dyadic-exponent interval arithmetic
# --------------------------------------------------------------------------

def _round_down(x: Fraction, prec: int) -> Fraction:
    return Fraction(x.numerator * (1 << prec) // x.denominator, 1 << prec)


def _round_up(x: Fraction, prec: int) -> Fraction:
    n, d = x.numerator * (1 << prec), x.denominator
    return Fraction(-((-n) // d), 1 << prec)


def _iv_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction],
            prec: int) -> tuple[Fraction, Fraction]:
    # operands are non-negative intervals
    return _round_down(a[0] * b[0], prec), _round_up(a[1] * b[1], prec)


def _iv_sqrt(a: tuple[Fraction, Fraction], prec: int) -> tuple[Fraction, Fraction]:
    scale = 1 << prec
    lo_int = math.isqrt(a[0].numerator * scale * scale // a[0].denominator)
    hi_int = math.isqrt(a[1].numerator * scale * scale // a[1].denominator) + 1
    return Fraction(lo_int, scale), Fraction(hi_int, scale)


def _dyadic_parts(rho: Fraction) -> tuple[int, int]:
    """(numerator m, exponent j) with rho = m / 2^j, or DomainError."""
    d = rho.denominator
    j = d.bit_length() - 1
    if rho < 0 or (1 << j) != d:
        raise DomainError(
            f"exact mode needs a dyadic exponent m/2^j in [0, 1], got {rho}")
    return rho.numerator, j


def _term_enclosure(base: Fraction, m: int, j: int,
                    prec: int) -> tuple[Fraction, Fraction]:
    """Certified enclosure of base^(-m/2^j) for base > 1."""
    if m == 0:
        return Fraction(1), Fraction(1)
    inv = 1 / base
    root: tuple[Fraction, Fraction] = (inv, inv)
    for _ in range(j):
        root = _iv_sqrt(root, prec)
    out: tuple[Fraction, Fraction] = (Fraction(1), Fraction(1))
    # binary exponentiation with outward rounding at every multiply
    bits = bin(m)[2:]
    for bit in bits:
        out = _iv_mul(out, out, prec)
        if bit == "1":
            out = _iv_mul(out, root, prec)
    return out


def _pressure_sum_exact(problem: PressureProblem, rho: Fraction, budget: int,
                        prec: int = _EXACT_PREC) -> PressureSumResult:
    leaves = _check_budget(problem, budget)
    m, j = _dyadic_parts(Fraction(rho))
    scale = problem.B ** (2 * problem.n)
    lo_sum = Fraction(0)
    hi_sum = Fraction(0)

    def rec(level: int, q_prev: int, q: int) -> None:
        nonlocal lo_sum, hi_sum
        q_odd = q + q_prev
        for a in problem.alphabet:
            q_even = a * q_odd + q
            if level == problem.n:
                lo, hi = _term_enclosure(scale * q_even * q_even, m, j, prec)
                lo_sum += lo
                hi_sum += hi
            else:
                rec(level + 1, q_odd, q_even)

    rec(1, 0, 1)
    mid = (lo_sum + hi_sum) / 2
    return PressureSumResult(float(mid), float(hi_sum - lo_sum) / 2 + math.ulp(float(mid)),
                             leaves, lo_sum, hi_sum)


def pressure_sum(problem: PressureProblem, rho: float | Fraction,
                 budget: int = DEFAULT_LEAF_BUDGET, threads: int = 1,
                 prec: int = _EXACT_PREC) -> PressureSumResult:
    """Evaluate the pressure sum at exponent rho >= 0.

    Float mode enumerates A^n depth-first carrying the convergent pair, with
    a Neumaier accumulator per first-symbol partition and a fixed combine
    order, so the result does not depend on the thread count. Exact mode
    returns a certified rational enclosure (dyadic rho only).
    """
    if rho < 0:
        raise DomainError("rho must be >= 0")
    if problem.summation_mode == EXACT:
        return _pressure_sum_exact(problem, Fraction(rho), budget, prec)
    return _pressure_sum_float(problem, float(rho), budget, threads)


# --------------------------------------------------------------------------
# crossing solver
# --------------------------------------------------------------------------

def solve_s(problem: PressureProblem, tol: float,
            residual_target: float | None = DEFAULT_RESIDUAL_TARGET,
            budget: int = DEFAULT_LEAF_BUDGET, threads: int = 1) -> PressureSolution:
    """Bisection for s = inf { rho : f(rho) <= 1 } on the bracket [0, 1].

    A one-letter alphabet gives s = 0 exactly (f(0) = 1). Otherwise f(0) > 1
    and f(1) <= 1, and bisection runs until the bracket is within ``tol``
    and, when ``residual_target`` is set, |f(s) - 1| is within it too.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    leaves = problem.leaves
    if len(problem.alphabet) == 1:
        return PressureSolution(0.0, 0.0, 0, (0.0, 0.0), tol,
                                problem.summation_mode, leaves)

    if problem.summation_mode == EXACT:
        return _solve_exact(problem, tol, residual_target, budget)

    def f(rho: float) -> float:
        return pressure_sum(problem, rho, budget, threads).value

    if f(1.0) > 1.0:
        # cannot happen mathematically (f(1) <= 1); guard float pathologies
        return PressureSolution(1.0, abs(f(1.0) - 1.0), 1, (1.0, 1.0), tol,
                                FLOAT, leaves)
    lo, hi = 0.0, 1.0
    iterations = 0
    while hi - lo > tol and iterations < _MAX_ITERATIONS:
        mid = 0.5 * (lo + hi)
        iterations += 1
        if f(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    s = 0.5 * (lo + hi)
    residual = abs(f(s) - 1.0)
    while (residual_target is not None and residual > residual_target
           and iterations < _MAX_ITERATIONS and hi > lo):
        if f(s) > 1.0:
            lo = s
        else:
            hi = s
        s = 0.5 * (lo + hi)
        residual = abs(f(s) - 1.0)
        iterations += 1
    return PressureSolution(s, residual, iterations, (lo, hi), tol,
                            FLOAT, leaves)


def _solve_exact(problem: PressureProblem, tol: float,
                 residual_target: float | None, budget: int) -> PressureSolution:
    """Certified bisection over dyadic midpoints.

    Sign decisions compare the enclosure of f against 1, doubling the
    rounding precision when the enclosure straddles it. Depth is capped so
    exponent numerators stay machine-scale.
    """
    lo = Fraction(0)
    hi = Fraction(1)
    iterations = 0
    last: PressureSumResult | None = None
    while float(hi - lo) > tol and (hi - lo) > Fraction(1, 1 << _MAX_DYADIC_DEPTH):
        mid = (lo + hi) / 2
        iterations += 1
        prec = _EXACT_PREC
        while True:
            r = pressure_sum(problem, mid, budget, prec=prec)
            if r.hi < 1:
                hi = mid
                break
            if r.lo > 1:
                lo = mid
                break
            if prec >= 1024:
                hi = mid     # crossing within enclosure width; infimum side
                break
            prec *= 2
        last = r
    s = (lo + hi) / 2
    final = pressure_sum(problem, s, budget)  # float rendering of the residual
    residual = abs(final.value - 1.0)
    return PressureSolution(float(s), residual, iterations,
                            (float(lo), float(hi)), tol, EXACT,
                            problem.leaves)


# --------------------------------------------------------------------------
# depth and base trends
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DepthEstimate:
    n: int
    s: float
    residual: float


@dataclass(frozen=True)
class ExtrapolationResult:
    """Depth-schedule estimates for the limiting exponent.

    Every finite-depth crossing upper-bounds the depth limit, so ``estimate``
    is the minimum over the schedule and ``uncertainty`` the spread between
    the two deepest runs. ``violations`` lists any observed breaks of the
    subadditivity relations (expected empty).
    """

    estimate: float
    uncertainty: float
    per_depth: tuple[DepthEstimate, ...]
    violations: tuple[str, ...] = ()

    @property
    def lower_bound_structure_ok(self) -> bool:
        return not self.violations


def extrapolate_sB(B: Fraction, alpha: int, depth_schedule: Sequence[int],
                   tol: float, budget: int = DEFAULT_LEAF_BUDGET,
                   threads: int = 1, mode: str = FLOAT) -> ExtrapolationResult:
    """Run the crossing solver along an increasing depth schedule."""
    schedule = list(depth_schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError("depth schedule must be non-empty and increasing")
    per = []
    for n in schedule:
        prob = PressureProblem.with_alpha(alpha, Fraction(B), n, mode)
        sol = solve_s(prob, tol, budget=budget, threads=threads)
        per.append(DepthEstimate(n, sol.s_value, sol.residual))
    values = {d.n: d.s for d in per}
    estimate = min(d.s for d in per)
    uncertainty = abs(per[-1].s - per[-2].s) if len(per) >= 2 else 0.0
    slack = 4 * tol + 1e-12
    violations = []
    for n in schedule:
        for k in schedule:
            if n + k in values and values[n + k] > max(values[n], values[k]) + slack:
                violations.append(
                    f"s({n + k}) = {values[n + k]:.6g} exceeds "
                    f"max(s({n}), s({k})) = {max(values[n], values[k]):.6g}")
        for r in range(2, 9):
            if r * n in values and values[r * n] > values[n] + slack:
                violations.append(
                    f"s({r * n}) = {values[r * n]:.6g} exceeds s({n}) = {values[n]:.6g}")
    for d in per:
        if d.s < estimate - slack:
            violations.append(f"depth {d.n} below the running minimum")
    return ExtrapolationResult(estimate, uncertainty, tuple(per),
                               tuple(violations))


@dataclass(frozen=True)
class CurvePoint:
    B: Fraction
    s: float
    residual: float
    diff_from_prev: float = math.nan


def sB_curve(B_grid: Iterable[Fraction], alpha: int, n: int, tol: float,
             budget: int = DEFAULT_LEAF_BUDGET, threads: int = 1) -> list[CurvePoint]:
    """Crossing exponent along a base grid; non-increasing in B.

    A rise beyond solver slack between consecutive grid points with
    increasing B raises InvariantViolation (the crossing is decreasing in
    the base).
    """
    points: list[CurvePoint] = []
    slack = 4 * tol + 1e-12
    for B in B_grid:
        B = Fraction(B)
        prob = PressureProblem.with_alpha(alpha, B, n)
        sol = solve_s(prob, tol, budget=budget, threads=threads)
        if points:
            prev = points[-1]
            diff = sol.s_value - prev.s
            if B > prev.B and diff > slack:
                raise InvariantViolation(
                    f"s rose by {diff:.3g} from B={prev.B} to B={B}")
            if B == prev.B and sol.s_value != prev.s:
                raise InvariantViolation("identical grid points disagreed")
            points.append(CurvePoint(B, sol.s_value, sol.residual, diff))
        else:
            points.append(CurvePoint(B, sol.s_value, sol.residual))
    return points
