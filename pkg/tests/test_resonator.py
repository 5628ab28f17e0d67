"""Resonator sets, weighted sums, partition bound.

The oracle here is deliberately naive: enumerate the divisor-closed set
as exact integers with ``Fraction`` arithmetic and evaluate the sums
literally, with no multiplicity collapse and no Euler products.
"""

import itertools
import math
from fractions import Fraction

import pytest

from rzeta.precision import HIGH
from rzeta.resonator import (
    FactoredElement,
    ResonatorSpec,
    S_brute,
    S_jet,
    S_nested,
    enumerate_M,
    layer_product,
    layer_sum,
    layer_sum_brute,
    max_element,
    partition_lower_bound,
    proposition_report,
    resonator_cardinality,
    riemann_lower_prefix,
    riemann_sum_bracket,
    s_over_cardinality_jet,
    weight_w,
    yang_factor,
)


# ---------------------------------------------------------------- oracle --

def oracle_primes(x):
    return [p for p in range(2, int(x) + 1) if all(p % d for d in range(2, p))]


def oracle_M(x, b):
    """All divisors of prod p^(b-1) as exact ints."""
    vals = [1]
    for p in oracle_primes(x):
        vals = [v * p**e for v in vals for e in range(b)]
    return sorted(vals)


def oracle_S(x, b, ell):
    """Literal double sum over m and k|m, exact k, float log powers."""
    total = Fraction(0) if ell == 0 else 0.0
    for m in oracle_M(x, b):
        for k in range(1, m + 1):
            if m % k == 0:
                if ell == 0:
                    total += Fraction(1, k)
                else:
                    total += math.log(k) ** ell / k
    return total


def oracle_layer(x, b, J, i):
    """sum over k in M_i of w(k)/k, exact rational."""
    primes = oracle_primes(x)
    thr = x ** (i / J)
    total = Fraction(0)
    for exps in itertools.product(range(b), repeat=len(primes)):
        if any(e > 0 and p > thr for p, e in zip(primes, exps)):
            continue
        k = math.prod(p**e for p, e in zip(primes, exps))
        w = math.prod(b - e for e in exps)
        total += Fraction(w, k)
    return total


# ----------------------------------------------------------------- tests --

def test_cardinality():
    assert resonator_cardinality(ResonatorSpec(3, 2)) == 4
    assert resonator_cardinality(ResonatorSpec(10, 3)) == 81
    assert resonator_cardinality(ResonatorSpec(2, 5)) == 5


def test_max_element():
    assert max_element(ResonatorSpec(3, 2)) == 6
    assert max_element(ResonatorSpec(3, 3)) == 36
    assert max_element(ResonatorSpec(10, 2)) == 210


def test_enumerate_small_sets():
    spec = ResonatorSpec(3, 2)
    vals = sorted(e.value() for e in enumerate_M(spec))
    assert vals == [1, 2, 3, 6]
    assert [e.value() for e in enumerate_M(ResonatorSpec(3, 1))] == [1]
    vals5 = sorted(e.value() for e in enumerate_M(ResonatorSpec(5, 2)))
    assert vals5 == [1, 2, 3, 5, 6, 10, 15, 30]  # divisors of 30
    assert vals5 == oracle_M(5, 2)


def test_enumerate_cap_refusal():
    with pytest.raises(ValueError, match="cap"):
        enumerate_M(ResonatorSpec(30, 4), cap=1000)


def test_element_log_roundtrip():
    spec = ResonatorSpec(13, 3)
    for e in enumerate_M(spec):
        v = e.value()
        assert e.log_value() == pytest.approx(math.log(v), rel=1e-12, abs=1e-12)


def test_weights():
    spec = ResonatorSpec(3, 2)
    elems = {e.value(): e for e in enumerate_M(spec)}
    assert weight_w(elems[1], spec) == 4
    assert weight_w(elems[6], spec) == 1
    spec3 = ResonatorSpec(3, 3)
    elems3 = {e.value(): e for e in enumerate_M(spec3)}
    assert weight_w(elems3[4], spec3) == 3  # (3-2) * 3
    with pytest.raises(ValueError):
        weight_w(FactoredElement((2, 3), (2, 0)), spec)


def test_weight_counts_multiples():
    # w(k) really counts members of M divisible by k
    spec = ResonatorSpec(5, 3)
    elems = enumerate_M(spec)
    values = [e.value() for e in elems]
    for e in elems:
        k = e.value()
        assert weight_w(e, spec) == sum(1 for m in values if m % k == 0)


def test_S_small_values():
    spec = ResonatorSpec(3, 2)
    assert S_brute(spec, 0) == pytest.approx(35 / 6, rel=1e-14)
    assert S_nested(spec, 0) == pytest.approx(float(oracle_S(3, 2, 0)), rel=1e-14)
    expected1 = math.log(2) + (2 / 3) * math.log(3) + (1 / 6) * math.log(6)
    assert S_brute(spec, 1) == pytest.approx(expected1, rel=1e-13)
    assert S_nested(spec, 1) == pytest.approx(expected1, rel=1e-13)
    assert S_jet(spec, 0) == pytest.approx(35 / 6, rel=1e-13)
    assert S_jet(spec, 1) == pytest.approx(expected1, rel=1e-13)


def test_S_trivial_resonator():
    for x in (2, 5, 17):
        spec = ResonatorSpec(x, 1)
        assert S_brute(spec, 0) == 1.0
        assert S_jet(spec, 0) == pytest.approx(1.0, rel=1e-15)
        for ell in (1, 2, 3):
            assert S_brute(spec, ell) == 0.0
            assert abs(S_jet(spec, ell)) < 1e-15


def test_S_routes_agree_spot():
    spec = ResonatorSpec(13, 3)
    for ell in (0, 2, 4):
        sb = S_brute(spec, ell)
        assert S_jet(spec, ell) == pytest.approx(sb, rel=1e-10)
        assert S_nested(spec, ell) == pytest.approx(sb, rel=1e-10)


def test_S_brute_high_precision_agrees():
    import mpmath

    spec = ResonatorSpec(7, 2)
    for ell in (0, 1, 3):
        hi = S_brute(spec, ell, prec=HIGH)
        assert float(hi) == pytest.approx(S_brute(spec, ell), rel=1e-12)
        hj = S_jet(spec, ell, prec=HIGH)
        with mpmath.workdps(50):
            assert abs(hi - hj) <= abs(hi) * mpmath.mpf(10) ** -40 + mpmath.mpf(10) ** -40


def test_layer_sums():
    spec = ResonatorSpec(3, 2, J=2)
    assert layer_sum(spec, 0) == pytest.approx(4.0, rel=1e-15)
    assert layer_sum(spec, 1) == pytest.approx(4.0, rel=1e-15)  # x^(1/2) < 2
    assert layer_sum(spec, 2) == pytest.approx(35 / 6, rel=1e-14)
    spec1 = ResonatorSpec(3, 2, J=1)
    assert layer_sum(spec1, 1) == pytest.approx(35 / 6, rel=1e-14)
    with pytest.raises(ValueError):
        layer_sum(spec, 3)


def test_layer_identity_exact_oracle():
    for x, b, J in [(3, 2, 2), (10, 2, 3), (12, 3, 2), (6, 4, 5)]:
        spec = ResonatorSpec(x, b, J)
        for i in range(J + 1):
            exact = oracle_layer(x, b, J, i)
            assert layer_sum(spec, i) == pytest.approx(float(exact), rel=1e-12)
            assert layer_sum_brute(spec, i) == pytest.approx(
                float(exact), rel=1e-12
            )


def test_boundary_prime_included():
    # x=4, J=2: x^(1/2) = 2 exactly, so p=2 belongs to layer 1
    spec = ResonatorSpec(4, 2, J=2)
    assert spec.layer_primes(1) == (2,)
    assert layer_sum(spec, 1) == pytest.approx(
        float(oracle_layer(4, 2, 2, 1)), rel=1e-13
    )


def test_partition_bound_values():
    spec = ResonatorSpec(3, 2, J=1)
    assert partition_lower_bound(spec, 0) == pytest.approx(11 / 6, rel=1e-13)
    for spec_any in (ResonatorSpec(10, 3, J=1), ResonatorSpec(5, 2, J=1)):
        for ell in (1, 2, 5):
            assert partition_lower_bound(spec_any, ell) == 0.0
    spec22 = ResonatorSpec(3, 2, J=2)
    expected = math.log(3) * 0.5 * (35 / 6 - 4)
    assert partition_lower_bound(spec22, 1) == pytest.approx(expected, rel=1e-13)
    assert partition_lower_bound(spec22, 1) <= S_brute(spec22, 1)


def test_partition_below_S_with_strictness():
    for x, b, J in [(3, 2, 2), (10, 3, 2), (13, 2, 4), (30, 2, 5)]:
        spec = ResonatorSpec(x, b, J)
        for ell in range(4):
            lo = partition_lower_bound(spec, ell)
            s = S_jet(spec, ell)
            assert lo <= s + abs(s) * 1e-12
            if ell >= 1 and J >= 2 and b >= 2 and x >= 3:
                assert lo < s


def test_partition_monotone_in_J_reported():
    # empirical observation on this grid; reported, not asserted by theory
    vals = [
        partition_lower_bound(ResonatorSpec(100, 50, J), 1) for J in (1, 2, 4, 8)
    ]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_riemann_bracket():
    assert riemann_sum_bracket(0, 5) == pytest.approx((1.0, 1.0, 1.2))
    assert riemann_sum_bracket(1, 2) == pytest.approx((0.25, 0.5, 0.75))
    lo, integral, up = riemann_sum_bracket(2, 4)
    assert lo == pytest.approx(7 / 32, rel=1e-15)
    assert integral == pytest.approx(1 / 3, rel=1e-15)
    assert up == pytest.approx(7 / 32 + 0.25, rel=1e-14)


def test_riemann_prefix_matches_scalar():
    for ell in (0, 1, 3, 17, 50):
        pref = riemann_lower_prefix(ell, 1000)
        for J in (1, 2, 7, 100, 999, 1000):
            assert pref[J - 1] == pytest.approx(
                riemann_sum_bracket(ell, J).lower, rel=1e-12, abs=1e-15
            )


def test_yang_factor():
    assert yang_factor(1) == 2.0
    assert yang_factor(2) == pytest.approx(2.25, rel=1e-15)
    assert yang_factor(10) == pytest.approx(1.1**10, rel=1e-12)
    with pytest.raises(ValueError):
        yang_factor(0)


def test_yang_factor_increasing_below_e():
    ells = [1, 2, 3, 5, 10, 100, 10**4, 10**6 - 1, 10**6]
    vals = [yang_factor(e) for e in ells]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < math.e


def test_proposition_small():
    rep = proposition_report(ResonatorSpec(3, 2, J=1), 0)
    assert rep.S_over_M == pytest.approx(35 / 24, rel=1e-12)
    assert rep.target == pytest.approx(1.9567, rel=1e-4)
    assert rep.ratio == pytest.approx(0.745, abs=0.002)
    assert rep.partition_bound_over_M == pytest.approx(11 / 24, rel=1e-12)


def test_proposition_trivial_b1():
    for x in (3, 10, 100):
        rep = proposition_report(ResonatorSpec(x, 1, J=1), 0)
        assert rep.S_over_M == pytest.approx(1.0, rel=1e-14)


def test_proposition_scales_without_overflow():
    # The x=10^4, b=10^3 regime: |M| is astronomically large, the
    # normalized report must still come out finite and close to 1.
    rep = proposition_report(ResonatorSpec(10**4, 10**3, J=3), 0)
    assert rep.ratio >= 0.9
    assert rep.error_budget < 1.5
    assert rep.partition_bound_over_M <= rep.S_over_M


def test_S_jet_overflow_guard():
    with pytest.raises(OverflowError, match="b\\^pi"):
        S_jet(ResonatorSpec(10**4, 10**3), 0)
    v = S_jet(ResonatorSpec(10**4, 10**3), 0, prec=HIGH)
    assert v > 0


def test_spec_validation():
    with pytest.raises(ValueError):
        ResonatorSpec(1.5, 2)
    with pytest.raises(ValueError):
        ResonatorSpec(3, 0)
    with pytest.raises(ValueError):
        ResonatorSpec(3, 2, 0)
