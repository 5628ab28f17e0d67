"""Truncated Taylor ("jet") arithmetic at a real center.

A jet stores Taylor-normalized coefficients c_k = f^(k)(center)/k!, so
products are truncated Cauchy convolutions and magnitudes stay tame even
when raw derivatives grow like (log x)^l * l!.  The one consumer that
matters is the Euler product

    F(s) = prod_{p<=x} sum_{v=0}^{b-1} (b-v) * p^(-v*s)

whose l-th derivative at s=1 equals (-1)^l times the weighted divisor
sum computed combinatorially in :mod:`rzeta.resonator`; jets make that
derivative exact (up to rounding) for thousands of primes where
enumeration is hopeless.

Only products and scalar multiples are needed, so there is no general
composition or division here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .precision import DOUBLE, Precision, real, rlog


@dataclass(frozen=True)
class Jet:
    """Taylor-normalized coefficients of an analytic function at a center."""

    center: object
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a jet needs at least the order-0 coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def scale(self, factor) -> "Jet":
        return Jet(self.center, tuple(c * factor for c in self.coeffs))


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Truncated Cauchy product; centers and orders must match."""
    if a.center != b.center or a.order != b.order:
        raise ValueError(
            f"jet shape mismatch: center/order ({a.center},{a.order}) vs "
            f"({b.center},{b.order})"
        )
    L = a.order
    ca, cb = a.coeffs, b.coeffs
    double = isinstance(ca[0], float) and isinstance(cb[0], float)
    acc = math.fsum if double else sum
    out = tuple(
        acc(ca[i] * cb[k - i] for i in range(k + 1)) for k in range(L + 1)
    )
    return Jet(a.center, out)


def jet_identity(center, order: int, prec: Precision = DOUBLE) -> Jet:
    """The multiplicative identity jet (constant function 1)."""
    one = real(1, prec)
    zero = real(0, prec)
    return Jet(center, (one,) + (zero,) * order)


def jet_product(
    factors: Sequence[Jet],
    *,
    center=0.0,
    order: int | None = None,
    prec: Precision = DOUBLE,
) -> Jet:
    """Fold a sequence of jets into their product, in the given order.

    An empty sequence yields the identity jet at the supplied
    center/order (order is then required).
    """
    factors = list(factors)
    if not factors:
        if order is None:
            raise ValueError("empty jet product needs an explicit order")
        return jet_identity(center, order, prec)
    with prec.context():
        acc = factors[0]
        for f in factors[1:]:
            acc = jet_mul(acc, f)
    return acc


def local_factor_jet(
    p: int, b: int, order: int, prec: Precision = DOUBLE
) -> Jet:
    """Jet at s=1 of the local Euler factor sum_{v=0}^{b-1} (b-v) p^(-v*s).

    Each term p^(-v*s) expands with derivatives (-v log p)^k p^(-v), so
    c_k = sum_v (b-v) (-v log p)^k p^(-v) / k!.  Terms with p^(-v) below
    the working precision cannot contribute and are skipped; that keeps
    b=1000 affordable without changing any representable digit.
    """
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    with prec.context():
        logp = rlog(p, prec)
        # p^(-v) * (v log p)^order is negligible once v log p exceeds the
        # working digit budget by a wide margin.
        vmax = min(
            b - 1,
            int((prec.effective_digits + 25) * math.log(10) / math.log(p))
            + order
            + 2,
        )
        coeffs = []
        kfac = real(1, prec)
        pw = [real(p, prec) ** (-v) for v in range(vmax + 1)]
        for k in range(order + 1):
            if k > 0:
                kfac = kfac * k
            terms = [(b - v) * (-v * logp) ** k * pw[v] for v in range(vmax + 1)]
            if prec.is_double:
                coeffs.append(math.fsum(terms) / kfac)
            else:
                coeffs.append(sum(terms) / kfac)
        return Jet(real(1, prec), tuple(coeffs))


def derivative_from_jet(jet: Jet, ell: int):
    """Recover f^(ell)(center) = ell! * c_ell."""
    if ell < 0:
        raise ValueError(f"derivative order must be >= 0, got {ell}")
    if ell > jet.order:
        raise ValueError(
            f"derivative order {ell} exceeds jet order {jet.order}"
        )
    return math.factorial(ell) * jet.coeffs[ell]
