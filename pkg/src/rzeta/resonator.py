"""Divisor-closed resonator sets and their weighted reciprocal sums.

The resonator is built from the integer P = prod_{p<=x} p^(b-1); the set
M of its divisors is divisor-closed, has exactly b^pi(x) elements, and
every k in M appears as a divisor of w(k) = prod_{p<=x} (b - v_p(k))
members of M.  The central quantity is

    S(x; l) = sum_{m in M} sum_{k|m} (log k)^l / k
            = sum_{k in M} w(k) (log k)^l / k,

computed here by three independent routes: the literal nested double sum
(:func:`S_nested`, oracle), the collapsed weighted sum over enumerated
elements (:func:`S_brute`), and the l-th derivative of the Euler product
via jets (:func:`S_jet`), which is the only route that scales to
x = 10^4, b = 10^3.

Layer decompositions M_0 = {1} <= M_1 <= ... <= M_J = M (by prime
smoothness thresholds x^(j/J)) give the partition lower bound

    S(x; l) >= (log x)^l sum_j ((j-1)/J)^l [L(j) - L(j-1)],

with L(i) = sum_{k in M_i} w(k)/k admitting the exact product form
b^pi(x) * prod_{p <= x^(i/J)} sum_v (1 - v/b) p^(-v).

Convention: the k=1 term contributes (log 1)^0 = 1 to S(x; 0).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from .jets import derivative_from_jet, jet_product, local_factor_jet
from .precision import DOUBLE, Precision, constants, real, rlog

ENUMERATION_CAP = 10**6


@functools.lru_cache(maxsize=64)
def _primes_upto(limit: int) -> tuple[int, ...]:
    from .primes import sieve_primes

    if limit < 2:
        return ()
    return sieve_primes(limit).primes


@dataclass(frozen=True)
class ResonatorSpec:
    """Parameters (x, b, J): smoothness bound, exponent bound + 1, layers."""

    x: float
    b: int
    J: int = 1

    def __post_init__(self):
        if self.x < 2:
            raise ValueError(f"x must be >= 2, got {self.x}")
        if self.b < 1:
            raise ValueError(f"b must be >= 1, got {self.b}")
        if self.J < 1:
            raise ValueError(f"J must be >= 1, got {self.J}")

    @property
    def primes(self) -> tuple[int, ...]:
        return _primes_upto(int(math.floor(self.x)))

    def layer_primes(self, i: int) -> tuple[int, ...]:
        """Primes p <= x^(i/J); boundary primes are included."""
        if not 0 <= i <= self.J:
            raise ValueError(f"layer index {i} outside [0, {self.J}]")
        if i == self.J:
            return self.primes
        threshold = self.x ** (i / self.J)
        return tuple(p for p in self.primes if p <= threshold)


@dataclass(frozen=True)
class FactoredElement:
    """An element of M as its exponent vector over the generating
    ResonatorSpec's primes."""

    primes: tuple[int, ...]
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.primes) != len(self.exponents):
            raise ValueError("primes and exponents must have equal length")

    def value(self) -> int:
        v = 1
        for p, e in zip(self.primes, self.exponents):
            v *= p**e
        return v

    def log_value(self, prec: Precision = DOUBLE):
        with prec.context():
            return sum(
                (e * rlog(p, prec) for p, e in zip(self.primes, self.exponents)),
                start=real(0, prec),
            )


def resonator_cardinality(spec: ResonatorSpec) -> int:
    """|M| = b^pi(x), exact."""
    return spec.b ** len(spec.primes)


def max_element(spec: ResonatorSpec) -> int:
    """The largest element of M (every member divides it), exact."""
    v = 1
    for p in spec.primes:
        v *= p ** (spec.b - 1)
    return v


def enumerate_M(
    spec: ResonatorSpec, cap: int = ENUMERATION_CAP
) -> list[FactoredElement]:
    """All elements of M, each exactly once, in lexicographic exponent
    order (first prime slowest).  Refuses when b^pi(x) exceeds ``cap``."""
    size = resonator_cardinality(spec)
    if size > cap:
        raise ValueError(
            f"|M| = {size} exceeds enumeration cap {cap}; "
            "raise cap explicitly if this is intentional"
        )
    primes = spec.primes
    return [
        FactoredElement(primes, exps)
        for exps in itertools.product(range(spec.b), repeat=len(primes))
    ]


def weight_w(k: FactoredElement, spec: ResonatorSpec) -> int:
    """Multiplicity of k in M: #{m in M : k | m} = prod_p (b - v_p(k))."""
    if len(k.primes) != len(spec.primes) or k.primes != spec.primes:
        raise ValueError("element does not belong to this spec's prime set")
    w = 1
    for e in k.exponents:
        if e >= spec.b:
            raise ValueError(f"exponent {e} >= b={spec.b}: not an element of M")
        w *= spec.b - e
    return w


def _element_arrays(spec: ResonatorSpec, cap: int):
    """Vectorized enumeration: float arrays (k, log k, w) over all of M.

    Same lexicographic order as :func:`enumerate_M`.  Elements whose value
    exceeds the double range come out as inf; their reciprocal terms are
    below double resolution of any total here, so they sum as 0.
    """
    size = resonator_cardinality(spec)
    if size > cap:
        raise ValueError(
            f"|M| = {size} exceeds enumeration cap {cap}; "
            "raise cap explicitly if this is intentional"
        )
    k = np.array([1.0])
    logk = np.array([0.0])
    w = np.array([1.0])
    b = spec.b
    for p in spec.primes:
        with np.errstate(over="ignore"):
            pw = np.power(float(p), np.arange(b, dtype=np.float64))
            k = (k[:, None] * pw[None, :]).ravel()
        logpw = np.arange(b) * math.log(p)
        logk = (logk[:, None] + logpw[None, :]).ravel()
        wfac = (b - np.arange(b)).astype(np.float64)
        w = (w[:, None] * wfac[None, :]).ravel()
    return k, logk, w


def _iter_elements_exact(spec: ResonatorSpec, cap: int, prec: Precision):
    """(k exact int, w exact int, log k) triples in descending-k order,
    for the high-precision summation contract."""
    elems = enumerate_M(spec, cap)
    triples = [
        (e.value(), weight_w(e, spec), e) for e in elems
    ]
    triples.sort(key=lambda t: t[0], reverse=True)
    for kv, wv, e in triples:
        yield kv, wv, e.log_value(prec)


def S_brute(
    spec: ResonatorSpec,
    ell: int,
    cap: int = ENUMERATION_CAP,
    prec: Precision = DOUBLE,
) -> float:
    """S(x; l) as the collapsed sum over enumerated M: sum w(k)(log k)^l / k."""
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if prec.is_double:
        k, logk, w = _element_arrays(spec, cap)
        with np.errstate(invalid="ignore"):
            terms = w * logk**ell / k
        return float(np.sum(terms))
    with mpmath.workdps(prec.digits):
        acc = mpmath.mpf(0)
        for kv, wv, logkv in _iter_elements_exact(spec, cap, prec):
            acc += wv * logkv**ell / kv
        return acc


def S_nested(spec: ResonatorSpec, ell: int, cap: int = ENUMERATION_CAP) -> float:
    """S(x; l) as the literal double sum over m in M and divisors k | m.

    Oracle route: makes no use of the multiplicity collapse, so it checks
    both S_brute and S_jet.  Cost sum_m d(m); small specs only.
    """
    elems = enumerate_M(spec, cap)
    terms = []
    for m in elems:
        for exps in itertools.product(*(range(e + 1) for e in m.exponents)):
            k = FactoredElement(m.primes, exps)
            logk = k.log_value()
            terms.append(logk**ell / k.value())
    return math.fsum(terms)


def _normalized_local_jets(spec: ResonatorSpec, order: int, prec: Precision):
    """Local factor jets scaled by 1/b, so c_0 stays O(1) per prime."""
    binv = real(1, prec) / spec.b
    return [
        local_factor_jet(p, spec.b, order, prec).scale(binv)
        for p in spec.primes
    ]


def s_over_cardinality_jet(
    spec: ResonatorSpec, ell: int, prec: Precision = DOUBLE
):
    """S(x; l) / |M| via the l-th derivative of the normalized Euler
    product; overflow-safe at any scale the jet route can reach."""
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    with prec.context():
        jets = _normalized_local_jets(spec, ell, prec)
        prod = jet_product(jets, center=real(1, prec), order=ell, prec=prec)
        return (-1) ** ell * derivative_from_jet(prod, ell)


def S_jet(spec: ResonatorSpec, ell: int, prec: Precision = DOUBLE):
    """S(x; l) = (-1)^l F^(l)(1) with F the Euler product of local factors.

    In double mode the value overflows for specs where b^pi(x) exceeds
    the double range; use high precision or the normalized ratio then.
    """
    s_norm = s_over_cardinality_jet(spec, ell, prec)
    size = resonator_cardinality(spec)
    if prec.is_double:
        try:
            return float(size) * s_norm
        except OverflowError:
            raise OverflowError(
                f"|M| = b^pi(x) = {spec.b}^{len(spec.primes)} exceeds the "
                "double range; use a high-precision mode or "
                "s_over_cardinality_jet"
            ) from None
    with prec.context():
        return real(size, prec) * s_norm


def layer_product(spec: ResonatorSpec, i: int, prec: Precision = DOUBLE):
    """prod_{p <= x^(i/J)} sum_{v=0}^{b-1} (1 - v/b) p^(-v): the layer sum
    normalized by |M|.  Equals 1 at i=0."""
    with prec.context():
        tiny = (
            1e-25 if prec.is_double else mpmath.mpf(10) ** (-prec.digits - 9)
        )
        acc = real(1, prec)
        b = spec.b
        for p in spec.layer_primes(i):
            pv = real(1, prec)
            terms = []
            for v in range(b):
                terms.append((1 - real(v, prec) / b) * pv)
                pv = pv / p
                if pv < tiny:
                    break
            acc = acc * (math.fsum(terms) if prec.is_double else sum(terms))
        return acc


def layer_sum(spec: ResonatorSpec, i: int, prec: Precision = DOUBLE):
    """sum_{k in M_i} w(k)/k by the exact product form b^pi(x) * prod(...)."""
    size = resonator_cardinality(spec)
    prod = layer_product(spec, i, prec)
    if prec.is_double:
        return float(size) * prod
    with prec.context():
        return real(size, prec) * prod


def layer_sum_brute(
    spec: ResonatorSpec,
    i: int,
    cap: int = ENUMERATION_CAP,
    prec: Precision = DOUBLE,
) -> float:
    """sum_{k in M_i} w(k)/k by enumeration of M_i (oracle for layer_sum).

    The weight w is taken with respect to the full spec, so the layer sum
    factors as b^(#primes beyond the threshold) times a sum over the
    prefix set.
    """
    prefix = spec.layer_primes(i)
    rest = len(spec.primes) - len(prefix)
    if not prefix:
        # M_i = {1}: the only term is w(1)/1 = |M|.
        return (
            float(resonator_cardinality(spec))
            if prec.is_double
            else real(resonator_cardinality(spec), prec)
        )
    sub = ResonatorSpec(float(prefix[-1]), spec.b, spec.J)
    assert sub.primes == prefix
    if prec.is_double:
        k, _, w = _element_arrays(sub, cap)
        return float(spec.b**rest) * float(np.sum(w / k))
    with mpmath.workdps(prec.digits):
        acc = mpmath.mpf(0)
        for kv, wv, _ in _iter_elements_exact(sub, cap, prec):
            acc += mpmath.mpf(wv) / kv
        return real(spec.b**rest, prec) * acc


def partition_over_cardinality(
    spec: ResonatorSpec, ell: int, prec: Precision = DOUBLE
):
    """Partition lower bound for S(x; l), divided by |M| (overflow-safe)."""
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    layers = [layer_product(spec, i, prec) for i in range(spec.J + 1)]
    with prec.context():
        logx = rlog(spec.x, prec)
        J = spec.J
        total = real(0, prec)
        for j in range(1, J + 1):
            frac = real(j - 1, prec) / J
            total += frac**ell * (layers[j] - layers[j - 1])
        return logx**ell * total


def partition_lower_bound(
    spec: ResonatorSpec, ell: int, prec: Precision = DOUBLE
):
    """(log x)^l sum_j ((j-1)/J)^l [L(j) - L(j-1)]; always <= S(x; l)."""
    norm = partition_over_cardinality(spec, ell, prec)
    size = resonator_cardinality(spec)
    if prec.is_double:
        return float(size) * norm
    with prec.context():
        return real(size, prec) * norm


class RiemannBracket(NamedTuple):
    lower: float
    integral: float
    upper: float


def riemann_sum_bracket(ell: int, J: int) -> RiemannBracket:
    """Left Riemann sum of u^l on [0,1] with J panels, bracketing 1/(l+1)."""
    if ell < 0 or J < 1:
        raise ValueError(f"need ell >= 0 and J >= 1, got ell={ell}, J={J}")
    j = np.arange(J, dtype=np.float64)
    lower = float(np.sum((j / J) ** ell)) / J
    return RiemannBracket(lower, 1.0 / (ell + 1), lower + 1.0 / J)


def riemann_lower_prefix(ell: int, J_max: int) -> np.ndarray:
    """Vectorized left Riemann sums: entry J-1 holds the J-panel sum.

    Prefix-sum route used by the bulk bracket sweep; agrees with
    :func:`riemann_sum_bracket` pointwise.
    """
    if ell < 0 or J_max < 1:
        raise ValueError(f"need ell >= 0 and J_max >= 1, got {ell}, {J_max}")
    j = np.arange(J_max, dtype=np.float64)
    powers = j**ell
    csum = np.cumsum(powers)
    J = np.arange(1, J_max + 1, dtype=np.float64)
    return csum / J ** (ell + 1)


def yang_factor(ell: int) -> float:
    """(1 + 1/l)^l: the constant-improvement factor; undefined at l=0."""
    if ell < 1:
        raise ValueError(f"factor undefined for ell={ell}; needs ell >= 1")
    return math.exp(ell * math.log1p(1.0 / ell))


@dataclass(frozen=True)
class PropositionReport:
    """Normalized sum vs its asymptotic target, with the error budget."""

    S_over_M: float
    target: float
    ratio: float
    error_budget: float
    partition_bound_over_M: float

    def to_dict(self) -> dict:
        return {
            "S_over_M": float(self.S_over_M),
            "target": float(self.target),
            "ratio": float(self.ratio),
            "error_budget": float(self.error_budget),
            "partition_bound_over_M": float(self.partition_bound_over_M),
        }


def proposition_report(
    spec: ResonatorSpec, ell: int, prec: Precision = DOUBLE
) -> PropositionReport:
    """Compare S(x; l)/|M| against (e^gamma/(l+1)) (log x)^(l+1).

    The error budget 1/J + J log_2(x)/b + J^2/log x is the finite-scale
    size of the neglected terms; the ratio approaches 1 from below as the
    budget shrinks.
    """
    s_over = s_over_cardinality_jet(spec, ell, prec)
    part = partition_over_cardinality(spec, ell, prec)
    with prec.context():
        c = constants(prec)
        logx = rlog(spec.x, prec)
        target = c.exp_gamma / (ell + 1) * logx ** (ell + 1)
        loglogx = rlog(logx, prec)
        budget = (
            real(1, prec) / spec.J
            + spec.J * loglogx / spec.b
            + real(spec.J, prec) ** 2 / logx
        )
        return PropositionReport(
            S_over_M=s_over,
            target=target,
            ratio=s_over / target,
            error_budget=budget,
            partition_bound_over_M=part,
        )
