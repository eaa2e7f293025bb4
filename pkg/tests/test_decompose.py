"""Greedy sum/product decompositions: worked cases, verification, properties."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfdim import cf_core
from cfdim.cf_core import CFExpansion, convergents
from cfdim.decompose import (
    TERMINATED,
    TRUNCATED,
    EvenRestrictedSeq,
    DecompositionResult,
    product_decompose,
    result_to_json,
    select_even_quotient,
    sum_decompose,
    verify_decomposition,
)
from cfdim.errors import DomainError, InfeasibleSelection


def combine(op, u, v):
    return u + v if op == "sum" else u * v


# --------------------------------------------------------------------------
# selection
# --------------------------------------------------------------------------

def prefix_table(*word):
    e = CFExpansion(0, word)
    return convergents(e, len(word))


def test_select_examples():
    t = prefix_table(1)            # [0;1]
    assert select_even_quotient(F(3, 4), t) == 3     # exact hit
    assert select_even_quotient(F(3, 5), t) == 1     # 1/2 <= 3/5 < 2/3
    assert select_even_quotient(F(14, 15), t) == 14  # exact hit


def test_select_infeasible_sides():
    t = prefix_table(1)
    with pytest.raises(InfeasibleSelection) as e:
        select_even_quotient(F(1, 3), t)             # below [0;1,1] = 1/2
    assert e.value.side == "below_lower"
    with pytest.raises(InfeasibleSelection) as e:
        select_even_quotient(F(1), t)                # not below [0;1] = 1
    assert e.value.side == "at_or_above_upper"


@given(st.integers(1, 10**6), st.integers(2, 10**6))
def test_select_bracket_property(p, q):
    # any target strictly inside [1/2, 1) picks the unique bracketing c
    target = F(1, 2) + F(p % q, 2 * q)
    if target >= 1:
        target = F(2 * q - 1, 2 * q)
    t = prefix_table(1)
    c = select_even_quotient(target, t)
    assert cf_core.evaluate(CFExpansion(0, (1, c))) <= target
    assert target < cf_core.evaluate(CFExpansion(0, (1, c, 1)))


# --------------------------------------------------------------------------
# worked decompositions
# --------------------------------------------------------------------------

def test_sum_specials():
    r = sum_decompose(F(3, 2))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[0;1,1]", "[0;1]")
    r = sum_decompose(F(2))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[0;1]", "[0;1]")


def test_product_specials():
    r = product_decompose(F(1, 2))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[0;1,1]", "[0;1]")
    r = product_decompose(F(1))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[0;1]", "[0;1]")


def test_sum_8_5():
    r = sum_decompose(F(8, 5))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[0;1,1,1]", "[0;1,14]")
    assert r.first.value() + r.second.value() == F(8, 5)
    assert r.first.value() == F(2, 3) and r.second.value() == F(14, 15)


def test_product_5_2_terminates_at_first_equality():
    # [2;1,1] = 5/2 exactly, so the construction stops at its first step
    # rather than continuing to ([2;1,1,1], [0;1,15])
    r = product_decompose(F(5, 2))
    assert r.status == TERMINATED
    assert (str(r.first), str(r.second)) == ("[2;1,1]", "[0;1]")
    assert r.first.value() * r.second.value() == F(5, 2)


def test_sum_integer_shift():
    r = sum_decompose(F(27, 10))      # = 1 + 17/10
    assert r.first.integer_part == 1
    assert r.first.value() + r.second.value() == F(27, 10)
    r = sum_decompose(F(-3, 2))       # negatives allowed for sums
    assert r.first.value() + r.second.value() == F(-3, 2)
    r = sum_decompose(F(5))
    assert (str(r.first), str(r.second)) == ("[3;1]", "[0;1]")


def test_product_integer_closed_form():
    r = product_decompose(F(7))
    assert (str(r.first), str(r.second)) == ("[6;1]", "[0;1]")
    assert r.first.value() * r.second.value() == 7


def test_domain_errors():
    with pytest.raises(DomainError):
        sum_decompose(F(13, 10))      # fractional part 0.3 < 1/2
    with pytest.raises(DomainError):
        product_decompose(F(1, 4))
    with pytest.raises(DomainError):
        product_decompose(F(-3, 2))   # products need x > 0


def test_odd_order_quotients_all_one():
    for r in (sum_decompose(F(8, 5)), product_decompose(F(5, 2)),
              sum_decompose(F(169284739, 10**8), k_max=3)):
        for seq in (r.first, r.second):
            qs = seq.to_cf().quotients
            assert all(qs[i] == 1 for i in range(0, len(qs), 2))


def test_truncated_bracket():
    x = F(169284739, 10**8)
    r = sum_decompose(x, k_max=2)
    assert r.status == TRUNCATED
    lo, hi = r.bracket
    assert lo <= x < hi and r.width > 0
    # deeper runs never widen the bracket
    r2 = sum_decompose(x, k_max=4)
    assert r2.width <= r.width


# --------------------------------------------------------------------------
# verification
# --------------------------------------------------------------------------

def test_verify_pass_exact():
    r = sum_decompose(F(3, 2), 10)
    rep = verify_decomposition(r, F(3, 2), "sum")
    assert rep.ok and rep.exact and rep.residual == 0

    r = sum_decompose(F(8, 5), 10)
    rep = verify_decomposition(r, F(8, 5), "sum")
    assert rep.ok and rep.residual == 0


def test_verify_truncated():
    x = F(169284739, 10**8)
    r = sum_decompose(x, k_max=2)
    rep = verify_decomposition(r, x, "sum")
    assert rep.ok and not rep.exact and rep.residual == r.width


def test_verify_detects_tampering():
    r = sum_decompose(F(8, 5))
    bumped = EvenRestrictedSeq(r.second.integer_part,
                               (r.second.even_quotients[0] + 1,),
                               r.second.trailing_one)
    tampered = DecompositionResult(r.x, r.op, r.first, bumped, r.status,
                                   r.steps, r.bracket, r.step_log)
    rep = verify_decomposition(tampered, F(8, 5), "sum")
    assert not rep.ok
    assert rep.failures[0][0] == 1    # fails at step 1


# --------------------------------------------------------------------------
# randomized feasibility and bracket geometry
# --------------------------------------------------------------------------

def random_sum_inputs(count, seed=20240):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randrange(2, 10**6)
        p = rng.randrange((3 * q) // 2 + 1, 2 * q)
        x = F(p, q)
        if F(3, 2) <= x < 2:
            out.append(x)
    return out


def random_product_inputs(count, seed=20241):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        q = rng.randrange(2, 10**6)
        p = rng.randrange((q + 1) // 2, q)
        x = rng.randrange(0, 6) + F(p, q)
        if x > 0 and F(1, 2) <= x - (x.numerator // x.denominator) < 1:
            out.append(x)
    return out


def check_bracket_geometry(r, x):
    lo = hi = None
    widths = []
    full_step_width = {}
    for s in r.step_log:
        lo = s.low if lo is None else max(lo, s.low)
        hi = s.high if hi is None else min(hi, s.high)
        assert lo <= x < hi
        widths.append(hi - lo)
        if s.side == "b":
            full_step_width[s.step] = hi - lo
    assert all(b <= a for a, b in zip(widths, widths[1:]))
    # width after k full steps is at most the cylinder length of the first
    # component's even-restricted prefix
    evens = r.first.even_quotients
    for k, w in full_step_width.items():
        word = []
        for e in evens[:k]:
            word.extend((1, e))
        _, qp, _, qq = cf_core.word_convergents(word)
        assert w <= F(1, qq * (qq + qp))
    # geometric shrink: each full step multiplies the width by <= 2/3
    ks = sorted(full_step_width)
    for k1, k2 in zip(ks, ks[1:]):
        if full_step_width[k1] > 0:
            assert full_step_width[k2] <= F(2, 3) * full_step_width[k1]


@pytest.mark.parametrize("op", ["sum", "product"])
def test_random_rationals_feasible_and_bracketed(op):
    xs = random_sum_inputs(150) if op == "sum" else random_product_inputs(150)
    run = sum_decompose if op == "sum" else product_decompose
    for x in xs:
        r = run(x, 32)    # InfeasibleSelection would escape as a failure
        for seq in (r.first, r.second):
            qs = seq.to_cf().quotients
            assert all(qs[i] == 1 for i in range(0, len(qs), 2))
        if r.status == TERMINATED:
            assert combine(op, r.first.value(), r.second.value()) == x
        check_bracket_geometry(r, x)
        assert verify_decomposition(r, x, op).ok


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 10**6), st.data())
def test_sum_random_property(q, data):
    p = data.draw(st.integers(-((-3 * q) // 2), 2 * q - 1))
    x = F(p, q)
    r = sum_decompose(x, 32)
    if r.status == TERMINATED:
        assert r.first.value() + r.second.value() == x
    else:
        assert r.bracket[0] <= x < r.bracket[1]


def test_json_shape():
    j = result_to_json(sum_decompose(F(3, 2)))
    assert j["x"] == "3/2" and j["op"] == "sum"
    assert j["status"] == "terminated_exactly"
    assert j["first"] == {"a0": 0, "even": [1], "trailing_one": False,
                          "cf": "[0;1,1]", "value": "1/2"}
    assert j["second"]["cf"] == "[0;1]"
    assert j["bracket"] == ["3/2", "3/2"] and j["steps"] == 1
