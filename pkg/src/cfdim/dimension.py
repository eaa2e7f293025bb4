"""Top-level dimension evaluation and the growth-rate classifier.

For even-restricted continued fractions (odd-order quotients all 1) whose
even-order quotients exceed a threshold infinitely often, the Hausdorff
dimension is controlled by two growth exponents of the threshold phi:

    log B = liminf log(phi(n)) / 2n,
    log b = liminf log(log(phi(n))) / 2n    (when B is infinite).

Exponential thresholds (finite B > 1) have dimension equal to the pressure
crossing limit for that base; doubly exponential thresholds give the closed
form 1/(1+b^2); the b = 1 edge gives 1/2 and b = infinity gives 0. For B = 1
only a bracket is known: at least the B -> 1+ crossing limit, at most the
dimension of the full even-restricted set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConfigurationError, DomainError
from .geometry import NestedRatio, nested_Ek_ratio
from .pressure import DEFAULT_LEAF_BUDGET, ExtrapolationResult, extrapolate_sB

__all__ = [
    "CASE_B_EQ_1",
    "CASE_B_FINITE",
    "CASE_B_INF_B_EQ_1",
    "CASE_B_INF_B_FINITE",
    "CASE_B_INF_B_INF",
    "PhiSpec",
    "DimensionReport",
    "GrowthClass",
    "DimFResult",
    "DimEbcResult",
    "dim_F",
    "dim_Ebc",
    "classify_phi",
]

CASE_B_EQ_1 = "B_eq_1"
CASE_B_FINITE = "B_finite"
CASE_B_INF_B_EQ_1 = "B_inf_b_eq_1"
CASE_B_INF_B_FINITE = "B_inf_b_finite"
CASE_B_INF_B_INF = "B_inf_b_inf"

# heuristic growth-reading thresholds for sampled thresholds; a tail slope
# past the cut reads as infinite growth, and B = 1 tolerance shrinks with
# the horizon like the decay of log(n^p)/2n
_LOG_INF_CUT = 8.0
_MIN_HORIZON = 16

UPPER_ENDPOINT_LABEL = ("dimension of the full even-restricted set "
                        "(upper endpoint not computed)")


# --------------------------------------------------------------------------
# phi specifications
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiSpec:
    """A positive threshold function phi(n), parametric or sampled.

    Parametric families carry their growth exponents symbolically; tables
    and expressions are read off a finite horizon and flagged heuristic.
    Expression/table values may be given directly or as natural logs
    (``log_values``), which keeps fast-growing thresholds representable;
    +inf log values are legal and read as unbounded growth.
    """

    family: str
    p: float | None = None
    B0: float | None = None
    b0: float | None = None
    c0: float | None = None
    samples: tuple[float, ...] | None = None
    evaluator: Callable[[int], float] | None = None
    log_values: bool = False
    horizon: int = 64

    @classmethod
    def power(cls, p: float, horizon: int = 64) -> "PhiSpec":
        if p <= 0:
            raise DomainError("power thresholds need p > 0")
        return cls("power", p=p, horizon=horizon)

    @classmethod
    def exponential(cls, B0: float, horizon: int = 64) -> "PhiSpec":
        if B0 <= 0:
            raise DomainError("exponential thresholds need B0 > 0")
        return cls("exponential", B0=B0, horizon=horizon)

    @classmethod
    def double_exponential(cls, b0: float, c0: float, horizon: int = 64) -> "PhiSpec":
        if c0 <= 1 or b0 <= 0:
            raise DomainError("double-exponential thresholds need c0 > 1 and b0 > 0")
        return cls("double_exponential", b0=b0, c0=c0, horizon=horizon)

    @classmethod
    def table(cls, samples: Sequence[float], log_values: bool = False) -> "PhiSpec":
        return cls("table", samples=tuple(float(v) for v in samples),
                   log_values=log_values, horizon=len(samples))

    @classmethod
    def expression(cls, evaluator: Callable[[int], float],
                   log_values: bool = False, horizon: int = 64) -> "PhiSpec":
        return cls("expression", evaluator=evaluator, log_values=log_values,
                   horizon=horizon)

    @property
    def parametric(self) -> bool:
        return self.family in ("power", "exponential", "double_exponential")

    def log_phi_samples(self) -> list[float]:
        """ln(phi(n)) for n = 1..horizon; entries may be +inf."""
        if self.family == "table":
            raw = list(self.samples)
        elif self.family == "expression":
            raw = [self.evaluator(n) for n in range(1, self.horizon + 1)]
        else:
            raise ConfigurationError("parametric families are not sampled")
        out = []
        for n, v in enumerate(raw, start=1):
            if self.log_values:
                out.append(float(v))
                continue
            if v <= 0:
                raise DomainError(f"phi({n}) = {v} is not positive")
            out.append(math.log(v) if math.isfinite(v) else math.inf)
        return out


# --------------------------------------------------------------------------
# dimension of the exponential-growth set
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DimFResult:
    """Dimension estimate for exponential even-order growth at base B.

    The estimate is the pressure crossing limit approximated from below in
    depth; finite alphabets truncate it from below, so ``in_half_to_one``
    reports whether the value already sits in the infinite-alphabet band
    [1/2 - uncertainty, 1].
    """

    B: Fraction
    alpha: int
    estimate: float
    uncertainty: float
    trend: ExtrapolationResult
    in_half_to_one: bool = field(init=False)

    def __post_init__(self):
        ok = 0.5 - self.uncertainty <= self.estimate <= 1.0
        object.__setattr__(self, "in_half_to_one", ok)


def dim_F(B: Fraction, alpha: int, depths: Sequence[int] = (1, 2, 3, 4),
          tol: float = 1e-8, budget: int = DEFAULT_LEAF_BUDGET,
          threads: int = 1) -> DimFResult:
    """Estimate the dimension of the base-B exponential growth set.

    alpha = 1 collapses the alphabet and returns 0 (a statement about the
    degenerate truncation, not about the full set).
    """
    B = Fraction(B)
    if B <= 1:
        raise DomainError("base must exceed 1")
    trend = extrapolate_sB(B, alpha, depths, tol, budget=budget, threads=threads)
    return DimFResult(B, alpha, trend.estimate, trend.uncertainty, trend)


@dataclass(frozen=True)
class DimEbcResult:
    value: float                     # 1 / (1 + b^2), exact in b
    evidence: tuple[NestedRatio, ...]
    converged: bool                  # |R_kmax - value| <= 0.01


def dim_Ebc(b: float, c: float, k_max: int = 8) -> DimEbcResult:
    """Closed-form dimension 1/(1+b^2) with nested-ratio evidence R_1..R_kmax."""
    if b <= 1 or c <= 1:
        raise DomainError("b and c must exceed 1")
    evidence = tuple(nested_Ek_ratio(b, c, k) for k in range(1, k_max + 1))
    value = 1 / (1 + b * b)
    return DimEbcResult(value, evidence,
                        abs(evidence[-1].ratio - value) <= 0.01)


# --------------------------------------------------------------------------
# the five-case classifier
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DimensionReport:
    kind: str                       # "value" | "s_B" | "interval"
    value: float | None = None
    uncertainty: float | None = None
    lower: float | None = None
    upper: float | None = None
    upper_label: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class GrowthClass:
    case_tag: str
    B_estimate: float               # may be math.inf
    b_estimate: float | None        # set only when B is infinite
    dimension: DimensionReport
    heuristic: bool
    series_check: dict | None = None


def _tail_min(values: Sequence[float]) -> float:
    tail = values[len(values) // 2:]
    return min(tail)


def _heuristic_exponents(spec: PhiSpec) -> tuple[float, float | None, dict]:
    """(B, b, series report) read from sampled thresholds.

    liminf proxies are tail-half minima of log(phi)/2n (and of the doubled
    log when B reads as infinite). B = 1 is accepted within 4 log(N)/N and
    b = 1 within 2 log(N)/N, the decay scale of the canonical edge cases.
    """
    logs = spec.log_phi_samples()
    N = len(logs)
    if N < _MIN_HORIZON:
        raise ConfigurationError(
            f"horizon {N} is too short for growth reading; need >= {_MIN_HORIZON}")
    slopes = [lp / (2 * n) for n, lp in enumerate(logs, start=1)]
    B_log = _tail_min(slopes)
    inv_partial = math.fsum(math.exp(-lp) if lp != math.inf else 0.0 for lp in logs)
    last = math.exp(-logs[-1]) if logs[-1] != math.inf else 0.0
    series = {"inv_phi_partial_sum": inv_partial, "inv_phi_last_term": last,
              "horizon": N}

    if B_log >= _LOG_INF_CUT:
        ll = [math.log(lp) / (2 * n) if lp > 0 and lp != math.inf else math.inf
              for n, lp in enumerate(logs, start=1)]
        b_log = _tail_min(ll)
        if b_log >= _LOG_INF_CUT:
            return math.inf, math.inf, series
        if b_log <= 2 * math.log(N) / N:
            return math.inf, 1.0, series
        return math.inf, math.exp(b_log), series
    if B_log <= 4 * math.log(N) / N:
        return 1.0, None, series
    return math.exp(B_log), None, series


def _parametric_exponents(spec: PhiSpec) -> tuple[float, float | None]:
    if spec.family == "power":
        return 1.0, None
    if spec.family == "exponential":
        # log phi / 2n = log B0 identically
        return (spec.B0, None) if spec.B0 > 1 else (1.0, None)
    # double exponential: log log phi / 2n -> log b0 when b0 > 1
    if spec.b0 > 1:
        return math.inf, spec.b0
    return 1.0, None     # constant-like threshold: log phi / 2n -> 0


def classify_phi(spec: PhiSpec, alpha: int = 8,
                 depths: Sequence[int] = (1, 2, 3), tol: float = 1e-8,
                 budget: int = DEFAULT_LEAF_BUDGET) -> GrowthClass:
    """Classify a threshold into the five growth cases and fill its dimension.

    Parametric families resolve their exponents symbolically; tables and
    expressions use the flagged heuristic reading. The convergence of
    sum 1/phi(n) is reported for sampled specs, never enforced.
    """
    if spec.parametric:
        B, b = _parametric_exponents(spec)
        series = None
        heuristic = False
    else:
        B, b, series = _heuristic_exponents(spec)
        heuristic = True

    if B == math.inf:
        if b == 1.0:
            case = CASE_B_INF_B_EQ_1
            dim = DimensionReport("value", value=0.5)
        elif b == math.inf:
            case = CASE_B_INF_B_INF
            dim = DimensionReport("value", value=0.0)
        else:
            case = CASE_B_INF_B_FINITE
            dim = DimensionReport("value", value=1 / (1 + b * b))
    elif B > 1:
        case = CASE_B_FINITE
        r = dim_F(Fraction(B).limit_denominator(10**12), alpha, depths, tol,
                  budget=budget)
        dim = DimensionReport("s_B", value=r.estimate, uncertainty=r.uncertainty,
                              note=f"pressure crossing estimate at alpha={alpha}")
        b = None
    else:
        case = CASE_B_EQ_1
        lower = dim_F(Fraction(1) + Fraction(1, 10**4), alpha, depths, tol,
                      budget=budget)
        dim = DimensionReport(
            "interval", lower=lower.estimate, upper=None,
            upper_label=UPPER_ENDPOINT_LABEL,
            note="lower endpoint is the crossing estimate just above base 1 "
                 f"(alpha={alpha}), not the exact limit")
        b = None
    return GrowthClass(case, B, b, dim, heuristic, series)
