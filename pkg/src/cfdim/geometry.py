"""Interval geometry of even-restricted continued fractions with scheduled
large quotients.

A ``Schedule`` fixes a base B > 1, an alphabet bound alpha >= 2, and a sparse
increasing index set {n_k}. Admissible words put their even-order quotient at
a scheduled position j into [floor(B^(2j))+1, 2 floor(B^(2j))] and elsewhere
into [1, alpha]. On top of this sit the fundamental intervals (closed unions
of admissible child cylinders), the exact gap formulas between same-order
neighbors, the natural mass distribution on the nested intervals, and the
counting/covering quantities used for the doubly-exponential growth sets.

Everything interval-valued is exact rational arithmetic; only the measure
(whose definition involves irrational exponents) lives in floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import mpmath

from .cf_core import word_convergents
from .errors import (
    ConfigurationError,
    DomainError,
    InvariantViolation,
    ResourceError,
)

__all__ = [
    "Schedule",
    "AdmissibleWord",
    "FundamentalInterval",
    "GapReport",
    "MeasureNode",
    "EstimationParams",
    "CoverWeights",
    "NestedRatio",
    "enumerate_Dn",
    "count_Dn",
    "children",
    "fundamental_interval",
    "basic_interval",
    "closed_form_length",
    "gaps",
    "measure_mu",
    "holder_exponent_ok",
    "luczak_count",
    "luczak_bound",
    "cover_weight_Ebc",
    "nested_Ek_ratio",
]

_MEASURE_BUDGET = 2**20
_EXACT_COUNT_BIT_LIMIT = 10**4


# --------------------------------------------------------------------------
# schedules and admissible words
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """Scheduled positions {n_k} with base B and free-position bound alpha.

    ``indices`` lists the scheduled positions in increasing order; positions
    past the last index count as free. The gap sequence is m_1 = n_1 - 1 and
    m_k = n_k - n_{k-1} - 1.
    """

    indices: tuple[int, ...]
    B: Fraction
    alpha: int

    def __post_init__(self):
        if any(j < 1 for j in self.indices) or \
                any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise DomainError("indices must be strictly increasing positive integers")
        if self.B <= 1:
            raise DomainError(f"base must satisfy B > 1, got {self.B}")
        if self.alpha < 2:
            raise DomainError("alpha must be >= 2 (single-letter free positions "
                              "degenerate the interval construction)")

    @property
    def gaps_m(self) -> tuple[int, ...]:
        out = []
        prev = 0
        for j in self.indices:
            out.append(j - prev - 1)
            prev = j
        return tuple(out)

    def scheduled_bound(self, j: int) -> int:
        """floor(B^(2j)), computed exactly."""
        p = self.B ** (2 * j)
        return p.numerator // p.denominator

    def is_scheduled(self, j: int) -> bool:
        return j in self.indices

    def position_range(self, j: int) -> tuple[int, int]:
        """Admissible quotient range at position j."""
        if j < 1:
            raise DomainError("positions are 1-based")
        if self.is_scheduled(j):
            beta = self.scheduled_bound(j)
            return beta + 1, 2 * beta
        return 1, self.alpha


@dataclass(frozen=True)
class AdmissibleWord:
    """(sigma_2, ..., sigma_2n) with every entry in its position's range."""

    word: tuple[int, ...]
    schedule: Schedule

    def __post_init__(self):
        if not self.word:
            raise DomainError("admissible words are non-empty")
        for j, sigma in enumerate(self.word, start=1):
            lo, hi = self.schedule.position_range(j)
            if not lo <= sigma <= hi:
                raise DomainError(
                    f"sigma at position {j} must lie in [{lo}, {hi}], got {sigma}")

    @property
    def order(self) -> int:
        return len(self.word)

    def interleaved(self) -> tuple[int, ...]:
        out = []
        for sigma in self.word:
            out.extend((1, sigma))
        return tuple(out)


def count_Dn(schedule: Schedule, n: int) -> int:
    total = 1
    for j in range(1, n + 1):
        lo, hi = schedule.position_range(j)
        total *= hi - lo + 1
    return total


def enumerate_Dn(schedule: Schedule, n: int,
                 budget: int = 2**22) -> Iterator[AdmissibleWord]:
    """All admissible words of order n in lexicographic order."""
    if n < 1:
        raise DomainError("order must be >= 1")
    total = count_Dn(schedule, n)
    if total > budget:
        raise ResourceError(
            f"enumerating order {n} needs {total} words, over the budget of {budget}")
    ranges = [schedule.position_range(j) for j in range(1, n + 1)]

    def rec(prefix: tuple[int, ...], level: int) -> Iterator[AdmissibleWord]:
        lo, hi = ranges[level]
        for sigma in range(lo, hi + 1):
            w = prefix + (sigma,)
            if level == n - 1:
                yield AdmissibleWord(w, schedule)
            else:
                yield from rec(w, level + 1)

    yield from rec((), 0)


def children(w: AdmissibleWord) -> Iterator[AdmissibleWord]:
    lo, hi = w.schedule.position_range(w.order + 1)
    for sigma in range(lo, hi + 1):
        yield AdmissibleWord(w.word + (sigma,), w.schedule)


# --------------------------------------------------------------------------
# fundamental intervals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalInterval:
    word: AdmissibleWord
    left: Fraction
    right: Fraction
    kind: str = "fundamental"
    length: Fraction = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "length", self.right - self.left)


def _value(word: Sequence[int]) -> Fraction:
    _, _, p, q = word_convergents(word)
    return Fraction(p, q)


def fundamental_interval(w: AdmissibleWord) -> FundamentalInterval:
    """Closure of the union of the admissible next-level cylinders.

    Consecutive child cylinders share endpoints (mediant adjacency), so the
    union closes up to [ [word,1,lo], [word,1,hi+1] ] with (lo, hi) the
    child range.
    """
    lo, hi = w.schedule.position_range(w.order + 1)
    base = w.interleaved()
    left = _value(base + (1, lo))
    right = _value(base + (1, hi + 1))
    return FundamentalInterval(w, left, right)


def basic_interval(w: AdmissibleWord) -> FundamentalInterval:
    """The order-n cylinder of the interleaved word, as a closed interval."""
    base = w.interleaved()
    p_prev, q_prev, p, q = word_convergents(base)
    ends = sorted((Fraction(p, q), Fraction(p + p_prev, q + q_prev)))
    return FundamentalInterval(w, ends[0], ends[1], kind="basic")


def closed_form_length(w: AdmissibleWord) -> Fraction:
    """Exact fundamental-interval length from the two closed forms.

    With q = q_2n, q' = q_{2n-1} and q'' = q_{2n+1} = q + q', a free child
    range of size alpha gives alpha / ((q''+q)((alpha+1)q''+q)); a scheduled
    child range with beta = floor(B^(2(n+1))) gives
    beta / (((beta+1)q''+q)((2 beta+1)q''+q)).
    """
    _, q_prev, _, q = word_convergents(w.interleaved())
    q_odd = q + q_prev
    sched = w.schedule
    if sched.is_scheduled(w.order + 1):
        beta = sched.scheduled_bound(w.order + 1)
        return Fraction(beta,
                        ((beta + 1) * q_odd + q) * ((2 * beta + 1) * q_odd + q))
    alpha = sched.alpha
    return Fraction(alpha, (q_odd + q) * ((alpha + 1) * q_odd + q))


# --------------------------------------------------------------------------
# gaps between adjacent fundamental intervals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GapReport:
    """Distances to the closest same-order fundamental intervals.

    A side is None when the word sits on its position's range boundary (no
    sibling there); the matching ``*_bound`` then carries the substitute
    lower bound for the distance to anything beyond the parent, when the
    word is deep enough for that bound to be defined.
    """

    word: AdmissibleWord
    g_left: Fraction | None
    g_right: Fraction | None
    g_left_bound: Fraction | None = None
    g_right_bound: Fraction | None = None

    @property
    def g_min(self) -> Fraction | None:
        present = [g for g in (self.g_left, self.g_right) if g is not None]
        return min(present) if present else None


def gaps(w: AdmissibleWord) -> GapReport:
    """Closed-form sibling gaps, split by the children's range type.

    Free children (alpha range): numerator alpha + 4. Scheduled children
    (beta = floor(B^(2(n+1)))): numerator 2 beta^2 + 5 beta + 4. Boundary
    words get one-sided reports with substitute bounds.
    """
    sched = w.schedule
    n = w.order
    _, q_prev, _, q = word_convergents(w.interleaved())
    q_odd = q + q_prev
    lo_n, hi_n = sched.position_range(n)
    sigma = w.word[-1]

    if sched.is_scheduled(n + 1):
        beta = sched.scheduled_bound(n + 1)
        num = 2 * beta * beta + 5 * beta + 4
        g_left = Fraction(num, ((beta + 2) * q + (beta + 1) * q_prev)
                          * ((2 * beta + 2) * q - q_prev)) if sigma > lo_n else None
        g_right = Fraction(num, ((beta + 2) * q + (2 * beta + 3) * q_prev)
                           * ((2 * beta + 1) * q_odd + q)) if sigma < hi_n else None
    else:
        alpha = sched.alpha
        num = alpha + 4
        g_left = Fraction(num, (2 * q + q_prev)
                          * ((alpha + 2) * q - q_prev)) if sigma > lo_n else None
        g_right = Fraction(num, (2 * q + 3 * q_prev)
                           * ((alpha + 1) * q_odd + q)) if sigma < hi_n else None

    left_bound = right_bound = None
    if g_left is None:
        # distance from the parent's left structure: [parent,1,1] - [parent]
        parent = AdmissibleWord(w.word[:-1], sched).interleaved() if n > 1 else ()
        left_bound = _value(parent + (1, 1)) - _value(parent)
    if g_right is None and n > 1:
        # parent's right neighbor: [gp, sigma'+1, 1, 1] - [gp, sigma', 1]
        gp = AdmissibleWord(w.word[:-2], sched).interleaved() if n > 2 else ()
        sigma_parent = w.word[-2]
        right_bound = (_value(gp + (1, sigma_parent + 1, 1, 1))
                       - _value(gp + (1, sigma_parent, 1)))
    return GapReport(w, g_left, g_right, left_bound, right_bound)


# --------------------------------------------------------------------------
# the mass distribution
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureNode:
    """Mass of one fundamental interval plus the exponents it consumed.

    ``mu_exact`` is set at the first scheduled level, where the mass is the
    exact rational 1/floor(B^2); deeper masses involve irrational exponents
    and live in ``mu`` (double precision, factors combined in log space).
    """

    word: AdmissibleWord
    mu: float
    exponents_used: Mapping[int, float]
    mu_exact: Fraction | None = None


def _log_B(schedule: Schedule) -> float:
    return math.log(schedule.B.numerator) - math.log(schedule.B.denominator)


def _segment_log_q(word: Sequence[int]) -> float:
    seg = []
    for sigma in word:
        seg.extend((1, sigma))
    _, _, _, q = word_convergents(seg)
    return math.log(q)


def _mu_log_scheduled(word: Sequence[int], schedule: Schedule, levels: int,
                      s_table: Mapping[int, float]) -> tuple[float, dict[int, float]]:
    """log of the level-n_k mass product over the first ``levels`` indices."""
    ln_B = _log_B(schedule)
    used: dict[int, float] = {}
    terms = []
    prev = 0
    for j_idx in range(levels):
        n_j = schedule.indices[j_idx]
        m_j = n_j - prev - 1
        terms.append(-math.log(schedule.scheduled_bound(n_j)))
        if m_j > 0:
            if m_j not in s_table:
                raise ConfigurationError(
                    f"missing exponent for segment length {m_j}; supply "
                    f"s_table[{m_j}]")
            s = s_table[m_j]
            used[m_j] = s
            log_q = _segment_log_q(word[prev:n_j - 1])
            terms.append(-s * (2 * m_j * ln_B + 2 * log_q))
        prev = n_j
    return math.fsum(terms), used


def measure_mu(w: AdmissibleWord, s_table: Mapping[int, float],
               budget: int = _MEASURE_BUDGET) -> MeasureNode:
    """Mass of the fundamental interval J(word).

    At scheduled orders the mass is the telescoping product over completed
    segments; one step before a scheduled order the next scheduled factor's
    count divides back out; mid-segment orders sum the completed-segment
    masses over all free tails (direct enumeration, budget-capped).
    """
    sched = w.schedule
    if not sched.indices or sched.indices[0] != 1:
        raise ConfigurationError("the mass distribution needs position 1 scheduled")
    n = w.order
    indices = sched.indices

    if n in indices:
        k = indices.index(n) + 1
        log_mu, used = _mu_log_scheduled(w.word, sched, k, s_table)
        exact = Fraction(1, sched.scheduled_bound(1)) if k == 1 else None
        return MeasureNode(w, math.exp(log_mu), used, exact)

    if n + 1 in indices:
        k = indices.index(n + 1) + 1
        beta_k = sched.scheduled_bound(indices[k - 1])
        log_mu, used = _mu_log_scheduled(w.word, sched, k, s_table)
        return MeasureNode(w, math.exp(log_mu + math.log(beta_k)), used)

    later = [j for j in indices if j > n]
    if not later:
        raise ConfigurationError(
            f"order {n} lies past the last scheduled index {indices[-1]}; "
            "extend the schedule")
    n_k = later[0]
    k = indices.index(n_k) + 1
    beta_k = sched.scheduled_bound(n_k)
    tail = n_k - 1 - n
    total = sched.alpha ** tail
    if total > budget:
        raise ResourceError(
            f"mid-segment mass needs {total} tail words, over the budget of {budget}")
    masses = []
    used_all: dict[int, float] = {}

    def rec(word: tuple[int, ...], remaining: int) -> None:
        if remaining == 0:
            log_mu, used = _mu_log_scheduled(word, sched, k, s_table)
            used_all.update(used)
            masses.append(math.exp(log_mu + math.log(beta_k)))
            return
        for sigma in range(1, sched.alpha + 1):
            rec(word + (sigma,), remaining - 1)

    rec(w.word, tail)
    return MeasureNode(w, math.fsum(masses), used_all)


@dataclass(frozen=True)
class EstimationParams:
    """Exponent and constant for the mass-vs-length comparison.

    t = s_alpha - 2 epsilon must stay positive; the constant is the exact
    product over the first k0 scheduled levels of B^(2(n_1+...+n_j)) alpha^(n_j).
    """

    epsilon: float
    s_alpha: float
    k0: int
    c_I: Fraction
    t: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.epsilon < 0.25:
            raise DomainError("epsilon must lie in (0, 1/4)")
        object.__setattr__(self, "t", self.s_alpha - 2 * self.epsilon)
        if self.t <= 0:
            raise DomainError(
                f"s_alpha - 2 epsilon = {self.t} must be positive; shrink epsilon")

    @classmethod
    def from_schedule(cls, schedule: Schedule, s_alpha: float, epsilon: float,
                      k0: int | None = None) -> "EstimationParams":
        if k0 is None:
            k0 = len(schedule.indices)
        if k0 < 1 or k0 > len(schedule.indices):
            raise DomainError("k0 must pick a prefix of the scheduled indices")
        c = Fraction(1)
        running = 0
        for j in range(k0):
            n_j = schedule.indices[j]
            running += n_j
            c *= schedule.B ** (2 * running) * schedule.alpha**n_j
        return cls(epsilon, s_alpha, k0, c)


def holder_exponent_ok(node: MeasureNode, length: Fraction,
                       params: EstimationParams) -> bool:
    """mu <= c_I * length^(t - epsilon), compared in log space."""
    if node.mu == 0:
        return True
    log_len = math.log(length.numerator) - math.log(length.denominator)
    log_c = math.log(params.c_I.numerator) - math.log(params.c_I.denominator)
    return math.log(node.mu) <= log_c + (params.t - params.epsilon) * log_len


# --------------------------------------------------------------------------
# sequence counting and cover weights
# --------------------------------------------------------------------------

def luczak_count(m: int, k: int) -> tuple[int, float]:
    """Exact number of sequences of length <= k with product <= m, plus the
    m (2 + log m)^(k-1) bound. The count recurses on floor quotients, never
    materializing sequences."""
    if m < 1 or k < 1:
        raise DomainError("m and k must be >= 1")
    if m > 10**7 or k > 30:
        raise ResourceError(f"count for m={m}, k={k} is past the supported scale")

    @lru_cache(maxsize=None)
    def total(m_left: int, depth: int) -> int:
        if depth == 0 or m_left == 0:
            return 0
        # group a by equal floor(m_left / a)
        out = m_left          # each first element contributes the bare sequence
        a = 1
        while a <= m_left:
            quot = m_left // a
            a_hi = m_left // quot
            out += (a_hi - a + 1) * total(quot, depth - 1)
            a = a_hi + 1
        return out

    exact = total(m, k)
    bound = luczak_bound(m, k)
    if exact > bound:
        raise InvariantViolation(
            f"count {exact} exceeded the bound {bound} for m={m}, k={k}")
    return exact, bound


def luczak_bound(m: int, k: int) -> float:
    return m * (2 + math.log(m)) ** (k - 1)


@dataclass(frozen=True)
class CoverWeights:
    """Partial sums of the two covering series, with last-term magnitudes."""

    ball_family_total: float      # sum of 2q (2 q^(-2(1+d^2)))^exponent
    ball_family_last: float
    ball_family_terms: int
    block_family_total: float     # dyadic blocks weighted by the count bound
    block_family_last: float
    block_family_blocks: int


def cover_weight_Ebc(m_low: int, m_high: int, d: float, c: float,
                     exponent: float, budget: int = 10**6) -> CoverWeights:
    """Evaluate both covering series over denominators in [m_low, m_high].

    The fine family sums 2q (2 q^(-2(1+d^2)))^exponent directly; the coarse
    family walks the dyadic blocks inside the range, each weighted by the
    sequence-count bound at k = floor(log_d(3 log_c m) / 2) and the block's
    maximal interval length. Converges only for exponent > 1/(1+d^2).
    """
    if d <= 1 or c <= 1:
        raise DomainError("d and c must exceed 1")
    if m_low < 1 or m_high < m_low:
        raise DomainError("need 1 <= m_low <= m_high")
    if exponent <= 1 / (1 + d * d):
        raise DomainError(
            f"exponent {exponent} must exceed 1/(1+d^2) = {1 / (1 + d * d):.6g}; "
            "the series diverges at or below it")
    if m_high - m_low + 1 > budget:
        raise ResourceError(
            f"{m_high - m_low + 1} direct terms exceed the budget of {budget}")

    power = -2 * (1 + d * d)
    ball_terms = [2 * q * (2 * q**power) ** exponent
                  for q in range(m_low, m_high + 1)]
    ball_total = math.fsum(ball_terms)

    block_terms = []
    i_lo = max(1, (m_low - 1).bit_length() + 1)
    i_hi = m_high.bit_length() - 1
    for i in range(i_lo, i_hi + 1):
        m_i = 2**i
        log_c_m = math.log(m_i) / math.log(c)
        k_i = max(1, int(math.floor(
            0.5 * math.log(max(3 * log_c_m, 1.0)) / math.log(d))))
        count = luczak_bound(m_i, k_i)
        length = 2.0 ** (1 - (i - 1) * (1 + d * d))
        block_terms.append(count * length**exponent)
    return CoverWeights(
        ball_total, ball_terms[-1], len(ball_terms),
        math.fsum(block_terms), block_terms[-1] if block_terms else 0.0,
        len(block_terms))


# --------------------------------------------------------------------------
# nested-interval dimension ratios
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NestedRatio:
    """One level of nested-intersection dimension evidence.

    ``ratio`` consolidates the level counts and the gap lower bound
    eps_k >= 1 / (3 * 2^(6k) * c^(2 b^2 (b^(2k)-1)/(b^2-1))) into

        (k log 2 + (b^(2k) - b^2) log c)
        / ((b^(2k+2) + b^(2k) - 2 b^2) log c + (b^2-1)(log 3 + 6k log 2)),

    which increases to 1/(1+b^2) strictly from below. ``ratio_counted``
    recomputes log(m_1...m_{k-1}) / (-log(m_k eps_k)) from per-level interval
    counts, exact integer counts while c^(b^(2j)) fits in the bit limit and
    the 2 c^(b^(2j)) log-space surrogate past it; counting noise lets it
    land within ~1e-6 on either side of the limit at fast-growing b.
    """

    k: int
    ratio: float
    target: float            # 1 / (1 + b^2)
    ratio_counted: float
    exact_count_levels: int  # levels whose interval count was exact


def _level_log_count(b: float, c: float, j: int) -> tuple[float, bool]:
    """log of the number of integers in [c^(b^(2j)), 3 c^(b^(2j))]."""
    X = b ** (2 * j)
    bits = X * math.log2(c)
    if bits <= _EXACT_COUNT_BIT_LIMIT:
        with mpmath.workprec(int(bits) + 60):
            cX = mpmath.power(c, X)
            m = int(mpmath.floor(3 * cX)) - int(mpmath.ceil(cX)) + 1
        return math.log(m), True
    return X * math.log(c) + math.log(2), False


def nested_Ek_ratio(b: float, c: float, k: int) -> NestedRatio:
    """R_k = log(m_1 ... m_{k-1}) / (-log(m_k eps_k)) in log space."""
    if b <= 1 or c <= 1:
        raise DomainError("b and c must exceed 1")
    if k < 1:
        raise DomainError("k must be >= 1")
    ln2, ln3, lnc = math.log(2), math.log(3), math.log(c)
    b2, b2k = b * b, b ** (2 * k)
    numerator = k * ln2 + (b2k - b2) * lnc
    denominator = ((b ** (2 * k + 2) + b2k - 2 * b2) * lnc
                   + (b2 - 1) * (ln3 + 6 * k * ln2))

    logs = []
    exact_levels = 0
    for j in range(1, k + 1):
        log_m, was_exact = _level_log_count(b, c, j)
        logs.append(log_m)
        exact_levels += was_exact
    neg_log_eps = ln3 + 6 * k * ln2 + (2 * b2 * (b2k - 1) / (b2 - 1)) * lnc
    counted = math.fsum(logs[:-1]) / (neg_log_eps - logs[-1])
    return NestedRatio(k, numerator / denominator, 1 / (1 + b2),
                       counted, exact_levels)
