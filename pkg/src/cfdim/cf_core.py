"""Exact continued-fraction arithmetic.

Rationals are plain ``fractions.Fraction`` values (always reduced, positive
denominator); this module adds the canonical "p/q" serialization, expansions
via the Gauss map, convergent tables, value comparison by the
first-disagreement parity rule, and order-n cylinder intervals.

All types are immutable values; everything here is safe to share across
threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import DomainError

__all__ = [
    "parse_rational",
    "format_rational",
    "CFExpansion",
    "ConvergentTable",
    "Cylinder",
    "quotient_stream",
    "expand",
    "convergents",
    "evaluate",
    "canonicalize",
    "compare",
    "cylinder",
    "word_convergents",
    "parse_cf",
]


# --------------------------------------------------------------------------
# Rational serialization
# --------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a terminating decimal into an exact Fraction.

    Decimal strings are read as exact terminating decimals ("1.5" -> 3/2),
    never as binary floats.
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Serialize exactly; integers render bare, everything else as "p/q"."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# Expansions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CFExpansion:
    """A continued fraction [a0; a1, a2, ...] with positive partial quotients.

    ``truncated`` marks an expansion cut off by a term cap, in which case the
    stored quotients are a strict prefix of the full expansion.
    """

    integer_part: int
    quotients: tuple[int, ...] = ()
    truncated: bool = False

    def __post_init__(self):
        for a in self.quotients:
            if a < 1:
                raise DomainError(f"partial quotients must be >= 1, got {a}")

    @property
    def canonical(self) -> bool:
        """True when this is the unique canonical finite form.

        Canonical finite expansions never end with quotient 1 (the trailing 1
        folds into its predecessor), so every rational has exactly one
        canonical expansion.
        """
        if self.truncated:
            return False
        return not self.quotients or self.quotients[-1] >= 2

    def __len__(self) -> int:
        return len(self.quotients)

    def __str__(self) -> str:
        body = ",".join(str(a) for a in self.quotients)
        return f"[{self.integer_part};{body}]"


def parse_cf(text: str) -> CFExpansion:
    """Inverse of ``str(CFExpansion)``: parse "[a0;a1,a2,...]"."""
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")) or ";" not in t:
        raise DomainError(f"not a continued fraction display: {text!r}")
    head, _, tail = t[1:-1].partition(";")
    try:
        a0 = int(head)
        qs = tuple(int(p) for p in tail.split(",")) if tail else ()
    except ValueError as exc:
        raise DomainError(f"not a continued fraction display: {text!r}") from exc
    return CFExpansion(a0, qs)


def quotient_stream(x: Fraction) -> Iterator[int]:
    """Pull interface for the partial quotients of x - [x] under the Gauss map.

    Terminates for every rational; each pulled quotient is >= 1.
    """
    frac = x - (x.numerator // x.denominator)
    while frac:
        frac = 1 / frac
        a = frac.numerator // frac.denominator
        yield a
        frac -= a


def expand(x: Fraction, max_terms: int | None = None) -> CFExpansion:
    """Canonical continued-fraction expansion of a rational.

    The Gauss iteration on a rational always terminates with final quotient
    >= 2 (except for integers, which have no quotients), so the result is
    canonical unless ``max_terms`` cut it short, which sets ``truncated``.
    """
    if max_terms is not None and max_terms < 0:
        raise DomainError("max_terms must be >= 0")
    a0 = x.numerator // x.denominator
    qs: list[int] = []
    truncated = False
    for a in quotient_stream(x):
        if max_terms is not None and len(qs) >= max_terms:
            truncated = True
            break
        qs.append(a)
    return CFExpansion(a0, tuple(qs), truncated=truncated)


def evaluate(cf: CFExpansion) -> Fraction:
    """Exact value of a finite expansion (bottom-up fold)."""
    v = Fraction(0)
    for a in reversed(cf.quotients):
        v = 1 / (a + v)
    return cf.integer_part + v


def canonicalize(cf: CFExpansion) -> CFExpansion:
    """Fold a trailing quotient 1 into its predecessor; idempotent.

    [..., a, 1] -> [..., a+1], and the lone [a0;1] -> [a0+1;]. Value is
    preserved exactly.
    """
    if cf.truncated:
        raise DomainError("cannot canonicalize a truncated expansion")
    if cf.quotients and cf.quotients[-1] == 1:
        if len(cf.quotients) == 1:
            return CFExpansion(cf.integer_part + 1)
        qs = cf.quotients[:-2] + (cf.quotients[-2] + 1,)
        return CFExpansion(cf.integer_part, qs)
    return cf


def compare(a: CFExpansion, b: CFExpansion) -> int:
    """Order two finite expansions by value: -1, 0, or 1.

    Uses the first-disagreement parity rule (entries at even index order
    normally, odd index in reverse; a proper prefix is larger exactly when
    its length is odd, counting a0 as index 0).
    """
    a = canonicalize(a)
    b = canonicalize(b)
    sa = (a.integer_part,) + a.quotients
    sb = (b.integer_part,) + b.quotients
    for n, (x, y) in enumerate(zip(sa, sb)):
        if x != y:
            less = (x < y) if n % 2 == 0 else (x > y)
            return -1 if less else 1
    if len(sa) == len(sb):
        return 0
    # shorter is a proper prefix; its last index is len-1
    n = min(len(sa), len(sb)) - 1
    prefix_is_a = len(sa) < len(sb)
    prefix_less = n % 2 == 0
    if prefix_is_a:
        return -1 if prefix_less else 1
    return 1 if prefix_less else -1


# --------------------------------------------------------------------------
# Convergents
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergentTable:
    """Rows (k, p_k, q_k) of the standard two-term recurrence.

    Includes the seed row k = -1 with (p, q) = (1, 0); row k = 0 is
    (a0, 1). Satisfies p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1) for all k >= 0.
    """

    rows: tuple[tuple[int, int, int], ...]

    def p(self, k: int) -> int:
        return self.rows[k + 1][1]

    def q(self, k: int) -> int:
        return self.rows[k + 1][2]

    @property
    def order(self) -> int:
        """Largest k present."""
        return self.rows[-1][0]

    def value(self, k: int | None = None) -> Fraction:
        if k is None:
            k = self.order
        return Fraction(self.p(k), self.q(k))


def convergents(cf: CFExpansion, upto: int) -> ConvergentTable:
    """Convergent table of ``cf`` through index ``upto`` (0 <= upto <= len)."""
    if upto < 0:
        raise DomainError("upto must be >= 0")
    if upto > len(cf.quotients):
        raise IndexError(
            f"upto={upto} exceeds the expansion's {len(cf.quotients)} quotients"
        )
    rows = [(-1, 1, 0), (0, cf.integer_part, 1)]
    p_prev, q_prev = 1, 0
    p, q = cf.integer_part, 1
    for k in range(1, upto + 1):
        a = cf.quotients[k - 1]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        rows.append((k, p, q))
    return ConvergentTable(tuple(rows))


def word_convergents(word: Iterable[int], a0: int = 0) -> tuple[int, int, int, int]:
    """(p_{n-1}, q_{n-1}, p_n, q_n) for [a0; word] without building a table."""
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    for a in word:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p_prev, q_prev, p, q


# --------------------------------------------------------------------------
# Cylinders
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Cylinder:
    """The interval of points whose expansion starts with ``word``.

    Endpoints are p_n/q_n and the mediant (p_n+p_{n-1})/(q_n+q_{n-1}); the
    closed side is the p_n/q_n side, so for even n the interval is
    [p/q, mediant) and for odd n it is (mediant, p/q]. ``length`` equals
    1/(q_n (q_n + q_{n-1})) exactly.
    """

    word: tuple[int, ...]
    left: Fraction
    right: Fraction
    length: Fraction = field(init=False)
    left_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "length", self.right - self.left)


def cylinder(word: Sequence[int]) -> Cylinder:
    if not word:
        raise DomainError("cylinder word must be non-empty")
    w = tuple(word)
    p_prev, q_prev, p, q = word_convergents(w)
    endpoint = Fraction(p, q)
    mediant = Fraction(p + p_prev, q + q_prev)
    if len(w) % 2 == 0:
        return Cylinder(w, endpoint, mediant, left_closed=True)
    return Cylinder(w, mediant, endpoint, left_closed=False)
