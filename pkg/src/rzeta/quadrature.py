"""Composite Gauss-Legendre quadrature with two-level refinement.

Panels are uniform, so the nodes decompose into ``order`` interleaved
uniform grids (one per Gauss offset).  Integrand callbacks therefore
receive (t0, dt, count) describing a full uniform grid rather than loose
node arrays, which lets the engine evaluate Dirichlet polynomials on
them with one FFT-gridded transform per offset.

Refinement doubles the panel count until two consecutive levels agree to
the requested relative tolerance; failure to converge raises
:class:`~rzeta.errors.AccuracyError`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyError


@dataclass(frozen=True)
class QuadratureSettings:
    """Refinement policy for the oscillatory panel integrals."""

    rel_tol: float = 1e-8
    gauss_order: int = 24
    max_level: int = 10
    max_nodes_per_level: int = 120_000_000
    # Initial panels are sized so max_frequency * panel_width stays below
    # this; the refinement loop is the actual accuracy guarantee.
    init_panel_phase: float = 18.0
    # Agreement test uses rel_tol * max(|value|, abs_scale): leave 0 for a
    # purely relative test, set ~1 when tiny values (tail transforms) are
    # acceptable at absolute accuracy.
    abs_scale: float = 0.0


def gauss_offsets(order: int):
    """Gauss-Legendre nodes and weights mapped to the unit panel [0, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return (nodes + 1.0) / 2.0, weights / 2.0


GridIntegrand = Callable[[float, float, int], np.ndarray]


def _level_value(
    f: GridIntegrand, a: float, width: float, panels: int, order: int
) -> complex:
    xi, wts = gauss_offsets(order)
    total = 0.0 + 0.0j
    for g in range(order):
        vals = f(a + xi[g] * width, width, panels)
        total += wts[g] * width * np.sum(vals)
    return complex(total)


def integrate_refine(
    f: GridIntegrand,
    a: float,
    b: float,
    init_panels: int,
    settings: QuadratureSettings = QuadratureSettings(),
) -> complex:
    """Integrate f over [a, b], doubling panels until two levels agree.

    ``f(t0, dt, count)`` must return integrand values on the uniform grid
    t0 + k*dt, k < count.
    """
    if b <= a:
        raise ValueError(f"empty integration range [{a}, {b}]")
    panels = max(1, int(init_panels))
    if panels * settings.gauss_order > settings.max_nodes_per_level:
        raise AccuracyError(
            f"initial node count {panels * settings.gauss_order} exceeds "
            f"budget {settings.max_nodes_per_level}"
        )
    prev = _level_value(f, a, (b - a) / panels, panels, settings.gauss_order)
    for _ in range(settings.max_level):
        panels *= 2
        if panels * settings.gauss_order > settings.max_nodes_per_level:
            raise AccuracyError(
                "panel refinement exceeded the node budget before reaching "
                f"rel_tol={settings.rel_tol}; last disagreement at "
                f"{panels // 2} panels"
            )
        cur = _level_value(f, a, (b - a) / panels, panels, settings.gauss_order)
        scale = max(abs(cur), settings.abs_scale, 1e-300)
        if abs(cur - prev) <= settings.rel_tol * scale:
            return cur
        prev = cur
    raise AccuracyError(
        f"quadrature failed to converge to rel_tol={settings.rel_tol} "
        f"within {settings.max_level} refinements"
    )


def initial_panels(
    a: float, b: float, max_frequency: float, settings: QuadratureSettings
) -> int:
    """Panel count so that max_frequency * width <= init_panel_phase."""
    span = b - a
    if max_frequency <= 0:
        return 4
    return max(4, int(np.ceil(span * max_frequency / settings.init_panel_phase)))
