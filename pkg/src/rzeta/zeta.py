"""Zeta derivatives on the 1-line, two independent ways.

The fast route is the truncated Dirichlet polynomial

    P(t) = sum_{n <= T} (log n)^l / n^(1+it),

which approximates (-1)^l zeta^(l)(1+it) with error O((log log T)^l) for
T <= t <= 2T and l up to (log T)/(log log T).  The oracle route is
Euler-Maclaurin evaluation of zeta itself plus Cauchy-circle
differentiation (trapezoid on a circle around s0, exponentially accurate
for analytic integrands, with a mandatory two-grid agreement check).
:func:`approx_error_probe` measures the gap between the two on seeded
pseudo-random heights and reports its ratio to the predicted size.

The probe's sampler is a fixed 64-bit linear congruential generator
(Knuth's MMIX constants), so identical seeds give identical heights on
any platform; see :class:`LinearGenerator`.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import bernoulli

from .errors import AccuracyError

MAX_DERIVATIVE_ORDER = 8

_EM_REFUSAL_BOUND = 1e-8


class RangeAdvisory(UserWarning):
    """Evaluation outside the range where the polynomial is known to
    approximate the zeta derivative (advisory only)."""


@dataclass(frozen=True)
class EvalPoint:
    """A height t, derivative order, and polynomial cutoff T."""

    t: float
    ell: int
    cutoff: float
    max_order: int = MAX_DERIVATIVE_ORDER

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise ValueError(f"t must be finite, got {self.t}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if not 0 <= self.ell <= self.max_order:
            raise ValueError(
                f"ell={self.ell} outside [0, {self.max_order}]"
            )

    def warn_if_off_range(self):
        T = self.cutoff
        if T > 3:
            ell_max = math.log(T) / math.log(math.log(T))
            if self.ell > ell_max:
                warnings.warn(
                    f"ell={self.ell} exceeds the approximation range "
                    f"(log T)/(log_2 T) = {ell_max:.2f}",
                    RangeAdvisory,
                    stacklevel=3,
                )
        if not T <= abs(self.t) <= 2 * T and self.t != 0:
            warnings.warn(
                f"t={self.t} outside [T, 2T] = [{T}, {2 * T}]",
                RangeAdvisory,
                stacklevel=3,
            )


def dirichlet_poly(point: EvalPoint, check_range: bool = False) -> complex:
    """sum_{n <= T} (log n)^l n^(-1) exp(-i t log n), ascending n, fsum."""
    if check_range:
        point.warn_if_off_range()
    n = np.arange(1, int(math.floor(point.cutoff)) + 1, dtype=np.float64)
    logn = np.log(n)
    w = logn**point.ell / n
    vals = w * np.exp(-1j * point.t * logn)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


# ------------------------------------------------------- Euler-Maclaurin --

def _em_cut_for(im_s: float) -> int:
    return max(64, int(math.ceil(0.35 * abs(im_s))) + 32)


def _em_tail_terms(s: np.ndarray, cut: int, em_order: int):
    """Boundary + Bernoulli corrections and the first-omitted-term bound.

    Returns (tail_values, error_estimates) for an array of s.
    """
    N = float(cut)
    logN = math.log(N)
    npow = np.exp(-s * logN)  # N^(-s)
    tail = npow * N / (s - 1.0) + 0.5 * npow
    bern = bernoulli(2 * em_order + 2)
    rising = s.copy()  # (s)_1 = s
    nshift = npow / N  # N^(-s-1)
    term = np.zeros_like(s)
    for r in range(1, em_order + 1):
        coef = bern[2 * r] / math.factorial(2 * r)
        term = coef * rising * nshift
        tail = tail + term
        # extend rising factorial (s)_{2r-1} -> (s)_{2r+1}, N^(-s-2r+1) shift
        rising = rising * (s + 2 * r - 1) * (s + 2 * r)
        nshift = nshift / (N * N)
    next_coef = abs(bern[2 * em_order + 2]) / math.factorial(2 * em_order + 2)
    sigma = s.real
    ratio = np.abs(s + 2 * em_order + 1) / (sigma + 2 * em_order + 1)
    err = next_coef * np.abs(rising) * np.abs(nshift) * ratio
    return tail, err


def zeta_em_array(
    s: np.ndarray, em_order: int = 12, cut: int | None = None
) -> np.ndarray:
    """Vectorized Euler-Maclaurin zeta for Re(s) > 0, s != 1."""
    s = np.asarray(s, dtype=np.complex128)
    if np.any(s.real <= 0):
        raise ValueError("Euler-Maclaurin route needs Re(s) > 0")
    if np.any(s == 1):
        raise ValueError("zeta has a pole at s = 1")
    if em_order < 1:
        raise ValueError(f"em_order must be >= 1, got {em_order}")
    if cut is None:
        cut = _em_cut_for(float(np.max(np.abs(s.imag)))) + 2 * em_order
    if cut < 2:
        raise ValueError(f"cut must be >= 2, got {cut}")

    chunk = max(1, 4_000_000 // max(1, s.size))
    n_all = np.arange(1, cut, dtype=np.float64)
    logn = np.log(n_all)
    flat = s.ravel()
    res = np.zeros_like(flat)
    for start in range(0, n_all.size, chunk):
        ln = logn[start : start + chunk]
        res += np.exp(-np.multiply.outer(flat, ln)).sum(axis=1)
    tail, err = _em_tail_terms(flat, cut, em_order)
    if np.any(err > _EM_REFUSAL_BOUND):
        raise AccuracyError(
            f"Euler-Maclaurin error estimate {float(np.max(err)):.3e} exceeds "
            f"{_EM_REFUSAL_BOUND}; raise cut or em_order"
        )
    return (res + tail).reshape(s.shape)


def zeta_em(s: complex, em_order: int = 12, cut: int | None = None) -> complex:
    """zeta(s) by Euler-Maclaurin summation with an internal error bound."""
    return complex(zeta_em_array(np.array([s]), em_order, cut)[0])


# ------------------------------------------------------- Cauchy circles --

def cauchy_derivative(
    f: Callable[[np.ndarray], np.ndarray],
    s0: complex,
    ell: int,
    radius: float = 0.25,
    nodes: int = 64,
) -> complex:
    """f^(ell)(s0) by the trapezoid rule on a circle of given radius.

    f must accept an array of complex points.  No convergence check here;
    :func:`zeta_deriv_cauchy` wraps this with the two-grid test.
    """
    if nodes < 16:
        raise ValueError(f"need at least 16 nodes, got {nodes}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    ring = s0 + radius * np.exp(1j * theta)
    vals = f(ring) * np.exp(-1j * ell * theta)
    mean = complex(math.fsum(vals.real), math.fsum(vals.imag)) / nodes
    return math.factorial(ell) / radius**ell * mean


@functools.lru_cache(maxsize=2048)
def _zeta_ring_values(
    s0r: float, s0i: float, radius: float, nodes: int
) -> tuple:
    """Cached zeta values on the circle; shared across derivative orders."""
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    ring = complex(s0r, s0i) + radius * np.exp(1j * theta)
    return tuple(zeta_em_array(ring))


def _ring_derivative(s0: complex, ell: int, radius: float, nodes: int) -> complex:
    vals = np.array(_zeta_ring_values(s0.real, s0.imag, radius, nodes))
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    terms = vals * np.exp(-1j * ell * theta)
    mean = complex(math.fsum(terms.real), math.fsum(terms.imag)) / nodes
    return math.factorial(ell) / radius**ell * mean


def zeta_deriv_cauchy(
    s0: complex,
    ell: int,
    radius: float = 0.25,
    nodes: int = 64,
) -> complex:
    """zeta^(ell)(s0) with a mandatory nodes vs 2*nodes agreement check."""
    s0 = complex(s0)
    if nodes < 16:
        raise ValueError(f"need at least 16 nodes, got {nodes}")
    if abs(s0 - 1.0) <= radius:
        raise ValueError(
            f"circle of radius {radius} around {s0} encloses the pole at 1"
        )
    if s0.real - radius <= 0:
        raise ValueError("circle dips into Re(s) <= 0, outside the oracle range")
    coarse = _ring_derivative(s0, ell, radius, nodes)
    fine = _ring_derivative(s0, ell, radius, 2 * nodes)
    if abs(fine - coarse) > 1e-8:
        raise AccuracyError(
            f"Cauchy two-grid disagreement {abs(fine - coarse):.3e} > 1e-8 "
            f"at s0={s0}, ell={ell}"
        )
    return fine


# ----------------------------------------------------------------- probe --

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1


class LinearGenerator:
    """Deterministic 64-bit LCG: state' = (6364136223846793005 * state
    + 1442695040888963407) mod 2^64; uniform deviates are the top 53 bits
    divided by 2^53.  Fixed here so every implementation of the probe
    draws identical heights from the same seed."""

    def __init__(self, seed: int):
        self.state = seed & _LCG_MASK

    def uniform(self) -> float:
        self.state = (_LCG_MULT * self.state + _LCG_INC) & _LCG_MASK
        return (self.state >> 11) / float(1 << 53)


class ProbeResult(NamedTuple):
    max_abs_error: float
    bound_ratio: float


def approx_error_probe(
    T: float, sample_count: int, ell: int, seed: int
) -> ProbeResult:
    """Max |(-1)^l zeta^(l)(1+it) - P(t)| over seeded t in [T, 2T], and
    its ratio to (log log T)^l."""
    if T < 100:
        raise ValueError(f"probe needs T >= 100, got {T}")
    if sample_count < 1:
        raise ValueError(f"sample_count must be >= 1, got {sample_count}")
    gen = LinearGenerator(seed)
    heights = [T * (1.0 + gen.uniform()) for _ in range(sample_count)]
    sign = (-1) ** ell
    worst = 0.0
    for t in heights:
        poly = dirichlet_poly(EvalPoint(t, ell, T))
        oracle = zeta_deriv_cauchy(1 + 1j * t, ell)
        worst = max(worst, abs(sign * oracle - poly))
    denom = math.log(math.log(T)) ** ell
    return ProbeResult(worst, worst / denom)
