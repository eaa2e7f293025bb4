"""Greedy sum/product decompositions into continued fractions whose
odd-order partial quotients are all 1.

Every real in Z + [1/2, 1] splits as a sum, and every positive real there as
a product, of two continued fractions of the shape [a0; 1, a2, 1, a4, ...].
For exact rational inputs the greedy selection below either hits an equality
(finite decomposition) or runs to a step cap, in which case the result
carries an exact enclosing bracket built from the step inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from . import cf_core
from .cf_core import CFExpansion, ConvergentTable, format_rational
from .errors import DomainError, InfeasibleSelection, InvariantViolation

__all__ = [
    "EvenRestrictedSeq",
    "StepBound",
    "DecompositionResult",
    "VerificationReport",
    "select_even_quotient",
    "sum_decompose",
    "product_decompose",
    "verify_decomposition",
    "result_to_json",
]

Op = Literal["sum", "product"]

TERMINATED = "terminated_exactly"
TRUNCATED = "truncated"

DEFAULT_K_MAX = 32


@dataclass(frozen=True)
class EvenRestrictedSeq:
    """[a0; 1, a2, 1, a4, ...]: only the even-order quotients are stored.

    A finite sequence either stops at its last even-order quotient or carries
    one more odd-order 1 (``trailing_one``), e.g. a0=0, even=(), trailing
    gives [0;1] and a0=0, even=(1,), trailing gives [0;1,1,1].
    """

    integer_part: int
    even_quotients: tuple[int, ...] = ()
    trailing_one: bool = False

    def __post_init__(self):
        for e in self.even_quotients:
            if e < 1:
                raise DomainError(f"even-order quotients must be >= 1, got {e}")

    def to_cf(self) -> CFExpansion:
        qs: list[int] = []
        for e in self.even_quotients:
            qs.extend((1, e))
        if self.trailing_one:
            qs.append(1)
        return CFExpansion(self.integer_part, tuple(qs))

    def value(self) -> Fraction:
        return cf_core.evaluate(self.to_cf())

    def __str__(self) -> str:
        return str(self.to_cf())


@dataclass(frozen=True)
class StepBound:
    """One half-step inequality: low <= x < high, exact rationals."""

    step: int
    side: Literal["a", "b"]
    low: Fraction
    high: Fraction


@dataclass(frozen=True)
class DecompositionResult:
    x: Fraction
    op: Op
    first: EvenRestrictedSeq
    second: EvenRestrictedSeq
    status: str
    steps: int
    bracket: tuple[Fraction, Fraction]
    step_log: tuple[StepBound, ...]

    @property
    def width(self) -> Fraction:
        return self.bracket[1] - self.bracket[0]


class _Side:
    """Incremental convergent state of one component.

    Tracks (p_{2k-1}, q_{2k-1}, p_{2k}, q_{2k}) of the even-ended word
    [a0; 1, e1, ..., 1, ek]; with no quotients yet this is the order-0 state
    (1, 0, a0, 1).
    """

    __slots__ = ("a0", "evens", "p_prev", "q_prev", "p", "q")

    def __init__(self, a0: int):
        self.a0 = a0
        self.evens: list[int] = []
        self.p_prev, self.q_prev = 1, 0
        self.p, self.q = a0, 1

    def value_even(self) -> Fraction:
        return Fraction(self.p, self.q)

    def value_trailing(self) -> Fraction:
        """Value with one more odd-order 1 appended."""
        return Fraction(self.p + self.p_prev, self.q + self.q_prev)

    def select(self, target: Fraction) -> int:
        """The unique c with [word,1,c] <= target < [word,1,c+1].

        Inverts the Moebius map c -> (c p_odd + p)/(c q_odd + q) exactly and
        corrects by at most one step.
        """
        p_odd, q_odd = self.p + self.p_prev, self.q + self.q_prev
        sup = Fraction(p_odd, q_odd)
        floor_val = Fraction(p_odd + self.p, q_odd + self.q)   # c = 1
        if target < floor_val:
            raise InfeasibleSelection(
                f"target {target} below [word,1,1] = {floor_val}", "below_lower")
        if target >= sup:
            raise InfeasibleSelection(
                f"target {target} not below [word,1] = {sup}", "at_or_above_upper")
        c = (target * self.q - self.p) // (p_odd - target * q_odd)
        c = int(c)
        # one-step neighbor correction (exact arithmetic should never need it)
        while Fraction(c * p_odd + self.p, c * q_odd + self.q) > target:
            c -= 1
        while Fraction((c + 1) * p_odd + self.p, (c + 1) * q_odd + self.q) <= target:
            c += 1
        if c < 1:
            raise InfeasibleSelection(f"selected c={c} < 1", "below_lower")
        return c

    def append(self, c: int) -> None:
        p_odd, q_odd = self.p + self.p_prev, self.q + self.q_prev
        self.p, self.p_prev = c * p_odd + self.p, p_odd
        self.q, self.q_prev = c * q_odd + self.q, q_odd
        self.evens.append(c)

    def seq(self, integer_part: int | None = None, trailing: bool = False) -> EvenRestrictedSeq:
        a0 = self.a0 if integer_part is None else integer_part
        return EvenRestrictedSeq(a0, tuple(self.evens), trailing)


def select_even_quotient(target: Fraction, prefix: ConvergentTable, k: int = 0) -> int:
    """Public selection step on an explicit convergent table.

    ``prefix`` holds the convergents of the odd-ended word [a0; ..., 1]; its
    last two rows drive the inversion. ``k`` is informational.
    """
    side = _Side(0)
    _, p_odd, q_odd = prefix.rows[-1]
    _, p_even, q_even = prefix.rows[-2]
    # the odd-ended word ends in quotient 1, so p_odd = p_even + p_{below}
    side.p, side.q = p_even, q_even
    side.p_prev, side.q_prev = p_odd - p_even, q_odd - q_even
    return side.select(target)


def _combine(op: Op, u: Fraction, v: Fraction) -> Fraction:
    return u + v if op == "sum" else u * v


def _greedy(x: Fraction, op: Op, a0: int, k_max: int) -> DecompositionResult:
    """Alternate the two selection conditions until equality or the step cap.

    For sums ``x`` is already reduced to [3/2, 2); for products ``x`` is the
    original value with a0 = [x] and b0 = 0.
    """
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    a, b = _Side(a0), _Side(0)
    log: list[StepBound] = []
    lo: Fraction | None = None
    hi: Fraction | None = None

    def record(step: int, side: str, low: Fraction, high: Fraction):
        nonlocal lo, hi
        log.append(StepBound(step, side, low, high))
        lo = low if lo is None else max(lo, low)
        hi = high if hi is None else min(hi, high)

    def finish(first: EvenRestrictedSeq, second: EvenRestrictedSeq,
               status: str) -> DecompositionResult:
        bracket = (x, x) if status == TERMINATED else (lo, hi)
        return DecompositionResult(x, op, first, second, status,
                                   len(a.evens) + len(b.evens), bracket, tuple(log))

    for k in range(1, k_max + 1):
        target = x - b.value_trailing() if op == "sum" else x / b.value_trailing()
        c = a.select(target)
        a.append(c)
        record(k, "a",
               _combine(op, a.value_even(), b.value_trailing()),
               _combine(op, a.value_trailing(), b.value_trailing()))
        if a.value_even() == target:
            return finish(a.seq(), b.seq(trailing=True), TERMINATED)

        target = x - a.value_trailing() if op == "sum" else x / a.value_trailing()
        d = b.select(target)
        b.append(d)
        record(k, "b",
               _combine(op, a.value_trailing(), b.value_even()),
               _combine(op, a.value_trailing(), b.value_trailing()))
        if b.value_even() == target:
            return finish(a.seq(trailing=True), b.seq(), TERMINATED)

    return finish(a.seq(), b.seq(), TRUNCATED)


def sum_decompose(x: Fraction, k_max: int = DEFAULT_K_MAX) -> DecompositionResult:
    """Decompose x in Z + [1/2, 1] as a sum of two even-restricted fractions.

    The integer shift m puts x - m in [3/2, 2]; the endpoint x - m = 2 uses
    the closed form [m;1] + [0;1]. The shift is folded into the first
    component's integer part.
    """
    x = Fraction(x)
    fl = x.numerator // x.denominator
    frac = x - fl
    if frac == 0:
        m = fl - 2
        return DecompositionResult(
            x, "sum",
            EvenRestrictedSeq(m, (), True), EvenRestrictedSeq(0, (), True),
            TERMINATED, 0, (x, x), ())
    if frac < Fraction(1, 2):
        raise DomainError(f"{x} is not in Z + [1/2, 1]")
    m = fl - 1
    result = _greedy(x - m, "sum", 0, k_max)
    first = EvenRestrictedSeq(m, result.first.even_quotients, result.first.trailing_one)
    blo, bhi = result.bracket
    return DecompositionResult(
        x, "sum", first, result.second, result.status, result.steps,
        (blo + m, bhi + m),
        tuple(StepBound(s.step, s.side, s.low + m, s.high + m) for s in result.step_log))


def product_decompose(x: Fraction, k_max: int = DEFAULT_K_MAX) -> DecompositionResult:
    """Decompose positive x in Z + [1/2, 1] as a product.

    Positive integers use the closed form [x-1;1] * [0;1]; otherwise the
    greedy runs with a0 = [x], b0 = 0.
    """
    x = Fraction(x)
    if x <= 0:
        raise DomainError(f"product decomposition needs x > 0, got {x}")
    fl = x.numerator // x.denominator
    frac = x - fl
    if frac == 0:
        return DecompositionResult(
            x, "product",
            EvenRestrictedSeq(fl - 1, (), True), EvenRestrictedSeq(0, (), True),
            TERMINATED, 0, (x, x), ())
    if frac < Fraction(1, 2):
        raise DomainError(f"{x} is not in Z + [1/2, 1]")
    return _greedy(x, "product", fl, k_max)


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    steps_checked: int
    residual: Fraction
    exact: bool
    failures: tuple[tuple[int, str, str], ...] = ()


def verify_decomposition(result: DecompositionResult, x: Fraction,
                         op: Op) -> VerificationReport:
    """Independently replay a decomposition's inequality chain.

    Re-evaluates both component prefixes at every step, checks that each
    recorded half-step bracket contains x, and checks exact reconstruction
    for terminated results. Any violated bracket is reported with its step.
    """
    x = Fraction(x)
    failures: list[tuple[int, str, str]] = []
    first, second = result.first, result.second

    if op == "sum":
        shift = first.integer_part
        x_run = x - shift
        a = _Side(0)
    else:
        x_run = x
        a = _Side(first.integer_part)
    b = _Side(0)

    ka, kb = len(first.even_quotients), len(second.even_quotients)
    if result.status == TERMINATED and not (ka == kb or ka == kb + 1):
        failures.append((0, "-", f"inconsistent step counts a={ka} b={kb}"))

    steps_checked = 0
    for k in range(1, max(ka, kb) + 1):
        if k <= ka:
            a.append(first.even_quotients[k - 1])
            low = _combine(op, a.value_even(), b.value_trailing())
            high = _combine(op, a.value_trailing(), b.value_trailing())
            if not low <= x_run < high:
                failures.append((k, "a", f"x not in [{low}, {high})"))
            steps_checked += 1
        if k <= kb:
            b.append(second.even_quotients[k - 1])
            low = _combine(op, a.value_trailing(), b.value_even())
            high = _combine(op, a.value_trailing(), b.value_trailing())
            if not low <= x_run < high:
                failures.append((k, "b", f"x not in [{low}, {high})"))
            steps_checked += 1

    if result.status == TERMINATED:
        got = _combine(op, first.value(), second.value())
        if got != x:
            failures.append((steps_checked, "-", f"reconstruction {got} != {x}"))
        residual = Fraction(0)
        exact = got == x
    else:
        lo, hi = result.bracket
        if not (lo <= x < hi):
            failures.append((steps_checked, "-", f"bracket [{lo}, {hi}) misses x"))
        residual = hi - lo
        exact = False

    return VerificationReport(not failures, steps_checked, residual, exact,
                              tuple(failures))


def result_to_json(result: DecompositionResult) -> dict:
    """The decomposition wire format (rationals as exact strings)."""

    def seq(s: EvenRestrictedSeq) -> dict:
        return {
            "a0": s.integer_part,
            "even": list(s.even_quotients),
            "trailing_one": s.trailing_one,
            "cf": str(s),
            "value": format_rational(s.value()),
        }

    return {
        "x": format_rational(result.x),
        "op": result.op,
        "status": result.status,
        "first": seq(result.first),
        "second": seq(result.second),
        "bracket": [format_rational(result.bracket[0]),
                    format_rational(result.bracket[1])],
        "width": format_rational(result.width),
        "steps": result.steps,
    }
