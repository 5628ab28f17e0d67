"""Precision contract and mathematical constants.

Every real-valued routine in the combinatorial core (primes, jets,
resonator sums) accepts a :class:`Precision`.  The default is hardware
double; a high-precision mode backed by mpmath with at least 50
significant decimal digits can be selected per run (CLI flag
``--precision`` or env var ``RZ_PRECISION``).  High-precision mode also
sidesteps double-range overflow for resonator cardinalities like
``1000**1229``.

Euler's constant is stored as a 50-digit literal, not computed at
runtime; :func:`check_constants` confirms ``exp(gamma)`` against the
stored ``e**gamma`` literal.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass

import mpmath

# 50 significant digits each; see check_constants for the consistency test.
EULER_GAMMA_STR = "0.57721566490153286060651209008240243104215933593992"
EXP_GAMMA_STR = "1.7810724179901979852365041031071795491696452143034"

EULER_GAMMA = float(EULER_GAMMA_STR)
EXP_GAMMA = float(EXP_GAMMA_STR)


@dataclass(frozen=True)
class Precision:
    """Arithmetic mode: ``digits=None`` means hardware double, otherwise
    mpmath reals with that many significant decimal digits (minimum 50)."""

    digits: int | None = None

    def __post_init__(self):
        if self.digits is not None and self.digits < 50:
            raise ValueError("high-precision mode requires at least 50 digits")

    @property
    def is_double(self) -> bool:
        return self.digits is None

    @property
    def effective_digits(self) -> int:
        return 17 if self.digits is None else self.digits

    def context(self):
        """Working-precision context: mpmath workdps, or a no-op for double.

        Any function that accumulates in high-precision mode must run its
        arithmetic inside this context; mpmath precision is dynamic.
        """
        if self.is_double:
            return contextlib.nullcontext()
        return mpmath.workdps(self.digits)


DOUBLE = Precision()
HIGH = Precision(50)


@dataclass(frozen=True)
class Constants:
    euler_gamma: object
    exp_gamma: object
    precision_digits: int


def constants(prec: Precision = DOUBLE) -> Constants:
    """Euler's constant and e**gamma at the requested precision."""
    if prec.is_double:
        return Constants(EULER_GAMMA, EXP_GAMMA, 17)
    with mpmath.workdps(prec.digits):
        return Constants(
            mpmath.mpf(EULER_GAMMA_STR), mpmath.mpf(EXP_GAMMA_STR), prec.digits
        )


def check_constants(prec: Precision = DOUBLE) -> None:
    """Self-check: exp(euler_gamma) must reproduce the exp_gamma literal.

    Raises ``AssertionError`` on drift; cheap enough to run at import of
    the CLI and in the test suite.
    """
    c = constants(prec)
    if prec.is_double:
        rel = abs(math.exp(c.euler_gamma) - c.exp_gamma) / c.exp_gamma
        assert rel < 1e-15, f"constant self-check failed: rel={rel}"
    else:
        with mpmath.workdps(prec.digits):
            rel = abs(mpmath.exp(c.euler_gamma) - c.exp_gamma) / c.exp_gamma
            assert rel < mpmath.mpf(10) ** (3 - prec.digits)


# Scalar kernels that dispatch on the precision mode.  Code written against
# these works unchanged for floats and mpmath reals.

def real(x, prec: Precision = DOUBLE):
    """Coerce x (int, float, str) to the working real type."""
    if prec.is_double:
        return float(x)
    with mpmath.workdps(prec.digits):
        return mpmath.mpf(x)


def rlog(x, prec: Precision = DOUBLE):
    if prec.is_double:
        return math.log(x)
    with mpmath.workdps(prec.digits):
        return mpmath.log(x)


def rexp(x, prec: Precision = DOUBLE):
    if prec.is_double:
        return math.exp(x)
    with mpmath.workdps(prec.digits):
        return mpmath.exp(x)


def rsum(terms, prec: Precision = DOUBLE):
    """Accurate sum: exact (fsum) in double mode, plain mpf sum otherwise.

    In high-precision mode callers are responsible for feeding terms in
    the order required by their contract (e.g. descending k for the
    resonator sums).
    """
    if prec.is_double:
        return math.fsum(terms)
    with mpmath.workdps(prec.digits):
        acc = mpmath.mpf(0)
        for t in terms:
            acc += t
        return acc
