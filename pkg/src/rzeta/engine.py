"""Resonance engine: smooth weight, moment integrals, certificate, scan.

The mechanism: for any resonator set M with max element at most sqrt(T),
the weighted moments

    M1 = integral |R(t)|^2 phi(t/T) dt,
    M2 = integral P(t) |R(t)|^2 phi(t/T) dt,

with R(t) = sum_{m in M} m^(it) and P the Dirichlet polynomial standing
in for (-1)^l zeta^(l)(1+it), certify that the sup of |P| over [T, 2T]
is at least |M2|/M1, because phi is supported there.  The diagonal terms
give M1 ~ T phihat(0) |M| and M2 ~ T phihat(0) S(x; l), so the
certificate ratio lands near S(x; l)/|M|.

The weight phi is the standard smooth partition-of-unity step: 0 off
[1,2], 1 on [5/4, 7/4], transitions psi(4(t-1)) and psi(4(2-t)) with
psi(u) = g(u)/(g(u)+g(1-u)), g(u) = exp(-1/u).  The exact symmetry
psi(u) + psi(1-u) = 1 makes phihat(0) = 3/4 exactly, which the tests pin.

Moment integrands are evaluated on the interleaved uniform grids of
composite Gauss-Legendre panels, so the Dirichlet polynomial runs
through one FFT-gridded transform per Gauss offset per level.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError
from .gridsum import UniformGridPlan, exp_sum_on_grid
from .precision import EXP_GAMMA
from .primes import iterated_log
from .quadrature import QuadratureSettings, initial_panels, integrate_refine
from .resonator import (
    FactoredElement,
    ResonatorSpec,
    enumerate_M,
    max_element,
    s_over_cardinality_jet,
)
from .zeta import _em_cut_for, _em_tail_terms

ENGINE_ELEMENT_CAP = 4096


class ParameterWarning(UserWarning):
    """Degenerate or out-of-regime parameter choices (still computable)."""


# ------------------------------------------------------------ bump weight --

def bump_phi(t):
    """The smooth weight: 0 off [1,2], 1 on [5/4,7/4], C-infinity bridges."""
    t_arr = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t_arr)
    out[(t_arr >= 1.25) & (t_arr <= 1.75)] = 1.0
    with np.errstate(over="ignore", divide="ignore"):
        rising = (t_arr > 1.0) & (t_arr < 1.25)
        s = 4.0 * (t_arr[rising] - 1.0)
        out[rising] = 1.0 / (1.0 + np.exp(1.0 / s - 1.0 / (1.0 - s)))
        falling = (t_arr > 1.75) & (t_arr < 2.0)
        s = 4.0 * (2.0 - t_arr[falling])
        out[falling] = 1.0 / (1.0 + np.exp(1.0 / s - 1.0 / (1.0 - s)))
    if np.isscalar(t) or getattr(t, "ndim", 1) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class BumpWeight:
    """The fixed weight function with its transition width and quadrature
    policy for Fourier evaluation."""

    transition_width: float = 0.25
    settings: QuadratureSettings = field(
        default_factory=lambda: QuadratureSettings(
            rel_tol=1e-10, gauss_order=24, abs_scale=1.0
        )
    )

    def __call__(self, t):
        return bump_phi(t)

    def hat(self, xi: float) -> complex:
        return bump_phi_hat(xi, self.settings)


def bump_phi_hat(
    xi: float, settings: QuadratureSettings | None = None
) -> complex:
    """phihat(xi) = integral phi(u) exp(-i xi u) du by refined panels.

    Convention: with this sign, integral (m/n)^(it) phi(t/T) dt equals
    T * phihat(T log(n/m)).
    """
    if settings is None:
        settings = QuadratureSettings(rel_tol=1e-10, gauss_order=24, abs_scale=1.0)

    def integrand(t0, dt, count):
        u = t0 + dt * np.arange(count)
        return bump_phi(u) * np.exp(-1j * xi * u)

    panels = max(16, initial_panels(1.0, 2.0, abs(xi), settings))
    return integrate_refine(integrand, 1.0, 2.0, panels, settings)


PHI_HAT_ZERO = 0.75  # exact: plateau 1/2 plus two transitions of 1/8 each


def bump_decay_constant(
    alpha: int, xi_min: float = 10.0, xi_max: float = 1e4, samples: int = 60
) -> float:
    """max |phihat(xi)| * xi^alpha over a log grid: the empirical decay
    constant for the |xi|^(-alpha) envelope."""
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    xs = np.exp(np.linspace(math.log(xi_min), math.log(xi_max), samples))
    return max(abs(bump_phi_hat(float(x))) * float(x) ** alpha for x in xs)


# --------------------------------------------------- theorem parameters --

@dataclass(frozen=True)
class TheoremParameters:
    """The asymptotic parameter choices, clamped to usable values."""

    T: float
    x: float
    b: int
    J: int


def theorem_parameters(T: float) -> TheoremParameters:
    """x = log T/(3 log_2 T), b = floor(log_2 T) (>=1), J = max(1,
    floor(log_3 T / 2)); warns when the resonator degenerates."""
    if T < 100:
        raise ValueError(f"need T >= 100, got {T}")
    logT = iterated_log(T, 1)
    log2T = iterated_log(T, 2)
    x = logT / (3.0 * log2T)
    b = max(1, math.floor(log2T))
    try:
        log3T = iterated_log(T, 3)
        J = max(1, math.floor(0.5 * log3T))
    except ValueError:
        J = 1
    if x < 2:
        warnings.warn(
            f"x = {x:.4f} < 2: no primes below x, the resonator degenerates "
            "to {1}",
            ParameterWarning,
            stacklevel=2,
        )
    else:
        peak = max_element(ResonatorSpec(x, b))
        if peak * peak > T:
            warnings.warn(
                f"max resonator element {peak} exceeds sqrt(T)",
                ParameterWarning,
                stacklevel=2,
            )
    return TheoremParameters(T=float(T), x=x, b=b, J=J)


# ------------------------------------------------------------- resonator --

def resonator_eval(elements: list[FactoredElement], t: float) -> complex:
    """R(t) = sum over elements of exp(i t log m)."""
    if not elements:
        raise ValueError("resonator needs at least one element")
    logs = np.array([e.log_value() for e in elements])
    vals = np.exp(1j * t * logs)
    return complex(math.fsum(vals.real), math.fsum(vals.imag))


def _resonator_logs(spec: ResonatorSpec) -> np.ndarray:
    elements = enumerate_M(spec, cap=ENGINE_ELEMENT_CAP)
    return np.array(sorted(e.log_value() for e in elements))


def _warn_if_peak_large(spec: ResonatorSpec, T: float):
    peak = max_element(spec)
    if peak * peak > T:
        warnings.warn(
            f"max element {peak} > sqrt(T): off-diagonal suppression is not "
            "justified at this T",
            ParameterWarning,
            stacklevel=3,
        )


# ---------------------------------------------------------------- moments --

def moment_M1(
    spec: ResonatorSpec, T: float, quad: QuadratureSettings | None = None
) -> float:
    """integral |R(t)|^2 phi(t/T) dt over [T, 2T] by refined panels."""
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    _warn_if_peak_large(spec, T)
    quad = quad or QuadratureSettings()
    logs = _resonator_logs(spec)
    ones = np.ones_like(logs)

    def integrand(t0, dt, count):
        r = exp_sum_on_grid(logs, ones, t0, dt, count)
        u = (t0 + dt * np.arange(count)) / T
        return (r.real**2 + r.imag**2) * bump_phi(u)

    nu_max = 2.0 * float(logs[-1]) if logs[-1] > 0 else 1.0
    panels = initial_panels(T, 2 * T, nu_max, quad)
    value = integrate_refine(integrand, T, 2 * T, panels, quad)
    return float(value.real)


def _dirichlet_grid_evaluator(T: float, ell: int):
    """Returns f(t0, dt, count) -> P(t) on uniform grids, with plan reuse."""
    n = np.arange(1, int(math.floor(T)) + 1, dtype=np.float64)
    logn = np.log(n)
    coeffs = logn**ell / n
    plans: dict = {}

    def evaluate(t0, dt, count):
        if logn.size * count <= 2_000_000:
            return exp_sum_on_grid(logn, coeffs, t0, dt, count)
        key = (dt, count)
        plan = plans.get(key)
        if plan is None:
            plan = UniformGridPlan(logn, dt, count)
            plans.clear()  # refinement only moves forward; drop old level
            plans[key] = plan
        return plan.run(coeffs, t0)

    return evaluate, float(logn[-1]) if logn.size else 0.0


def _cauchy_grid_evaluator(T: float, ell: int, radius: float, nodes: int):
    """Returns f(t0, dt, count) -> (-1)^l zeta^(l)(1 + i t) on uniform
    grids, via Euler-Maclaurin on a Cauchy circle collapsed into NUFFT
    coefficients plus vectorized boundary terms."""
    em_order = 12
    cut = _em_cut_for(2 * T + radius) + 2 * em_order
    n = np.arange(1, cut, dtype=np.float64)
    logn = np.log(n)
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    ring = radius * np.exp(1j * theta)  # s = 1 + ring + i t
    cauchy_w = (
        math.factorial(ell)
        / (nodes * radius**ell)
        * np.exp(-1j * ell * theta)
    )
    # Collapse the circle into per-n coefficients: sum_j w_j n^(-1-ring_j)
    coeffs = np.zeros(logn.size, dtype=np.complex128)
    for j in range(nodes):
        coeffs += cauchy_w[j] * np.exp(-(1.0 + ring[j]) * logn)
    sign = (-1) ** ell
    plans: dict = {}

    def evaluate(t0, dt, count):
        key = (dt, count)
        plan = plans.get(key)
        if plan is None and logn.size * count > 2_000_000:
            plan = UniformGridPlan(logn, dt, count)
            plans.clear()
            plans[key] = plan
        if plan is None:
            main = exp_sum_on_grid(logn, coeffs, t0, dt, count)
        else:
            main = plan.run(coeffs, t0)
        t = t0 + dt * np.arange(count)
        tail = np.zeros(count, dtype=np.complex128)
        for j in range(nodes):
            s = (1.0 + ring[j]) + 1j * t
            tail_j, err = _em_tail_terms(s, cut, em_order)
            if float(np.max(err)) > 1e-8:
                raise AccuracyError(
                    f"oracle tail bound {float(np.max(err)):.2e} > 1e-8"
                )
            tail += cauchy_w[j] * tail_j
        return sign * (main + tail)

    return evaluate, float(logn[-1]) if logn.size else 0.0


def moment_M2(
    spec: ResonatorSpec,
    T: float,
    ell: int,
    quad: QuadratureSettings | None = None,
    integrand_mode: str = "dirichlet",
) -> complex:
    """integral of the zeta-derivative stand-in times |R|^2 phi(t/T).

    ``integrand_mode="dirichlet"`` uses the truncated polynomial (the
    certificate route); ``"oracle"`` uses Euler-Maclaurin zeta on a
    Cauchy circle, fully independent of the polynomial.
    """
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    if integrand_mode not in ("dirichlet", "oracle"):
        raise ValueError(f"unknown integrand mode {integrand_mode!r}")
    _warn_if_peak_large(spec, T)
    quad = quad or QuadratureSettings()
    logs = _resonator_logs(spec)
    ones = np.ones_like(logs)
    if integrand_mode == "dirichlet":
        poly, nu_poly = _dirichlet_grid_evaluator(T, ell)
    else:
        poly, nu_poly = _cauchy_grid_evaluator(T, ell, radius=0.25, nodes=64)

    def integrand(t0, dt, count):
        p = poly(t0, dt, count)
        r = exp_sum_on_grid(logs, ones, t0, dt, count)
        u = (t0 + dt * np.arange(count)) / T
        return p * (r.real**2 + r.imag**2) * bump_phi(u)

    nu_max = nu_poly + (2.0 * float(logs[-1]) if logs[-1] > 0 else 0.0)
    panels = initial_panels(T, 2 * T, max(nu_max, 1.0), quad)
    return complex(integrate_refine(integrand, T, 2 * T, panels, quad))


# ------------------------------------------------------------ certificate --

@dataclass(frozen=True)
class Certificate:
    ratio: float
    rhs_prediction: float
    M1: float
    M2_abs: float

    def to_dict(self) -> dict:
        return {
            "ratio": self.ratio,
            "rhs_prediction": self.rhs_prediction,
            "M1": self.M1,
            "M2_abs": self.M2_abs,
        }


def certificate(
    spec: ResonatorSpec,
    T: float,
    ell: int,
    quad: QuadratureSettings | None = None,
) -> Certificate:
    """|M2|/M1 (a rigorous lower bound for the windowed sup of |P|) next
    to its diagonal prediction S(x; l)/|M|.  Requires max element <= sqrt(T).
    """
    peak = max_element(spec)
    if peak * peak > T:
        raise ValueError(
            f"max resonator element {peak} exceeds sqrt(T) = {math.sqrt(T):.1f}"
        )
    m1 = moment_M1(spec, T, quad)
    m2 = moment_M2(spec, T, ell, quad, integrand_mode="dirichlet")
    rhs = float(s_over_cardinality_jet(spec, ell))
    return Certificate(
        ratio=abs(m2) / m1, rhs_prediction=rhs, M1=m1, M2_abs=abs(m2)
    )


# ------------------------------------------------------------------- scan --

@dataclass(frozen=True)
class ScanReport:
    T: float
    ell: int
    grid_step: float
    argmax_t: float
    max_value: float
    certificate_ratio: float | None
    theoretical_constant: float
    yang_constant: float
    grid_points: int
    refined: bool

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "ell": self.ell,
            "grid_step": self.grid_step,
            "argmax_t": self.argmax_t,
            "max_value": self.max_value,
            "certificate_ratio": self.certificate_ratio,
            "theoretical_constant": self.theoretical_constant,
            "yang_constant": self.yang_constant,
            "grid_points": self.grid_points,
            "refined": self.refined,
        }


def _golden_max(f, lo, hi, iterations=40):
    """Golden-section maximization of a unimodal-ish bracket."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def scan_max(
    T: float,
    ell: int,
    grid_step: float,
    refine: bool = False,
    spec: ResonatorSpec | None = None,
    quad: QuadratureSettings | None = None,
) -> ScanReport:
    """Grid maximum of |P(t)| over [T, 2T] with optional local refinement.

    The step must satisfy grid_step <= pi/(4 log T): the polynomial's
    bandwidth is log T, and this keeps inter-sample wiggle bounded.
    Ties in the grid maximum resolve to the smallest t.
    """
    if T < 2:
        raise ValueError(f"need T >= 2, got {T}")
    step_cap = math.pi / (4.0 * math.log(T))
    if grid_step > step_cap:
        raise ValueError(
            f"grid_step {grid_step:.4g} too coarse: needs <= pi/(4 log T) = "
            f"{step_cap:.4g}"
        )
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    count = int(math.ceil(T / grid_step)) + 1
    step = T / (count - 1)

    n = np.arange(1, int(math.floor(T)) + 1, dtype=np.float64)
    logn = np.log(n)
    coeffs = logn**ell / n
    values = np.abs(exp_sum_on_grid(logn, coeffs, T, step, count))
    top = int(np.argmax(values))
    best_t = T + step * top
    best_v = float(values[top])

    refined = False
    if refine:
        refined = True

        def amplitude(t):
            return float(
                np.abs(np.sum(coeffs * np.exp(-1j * t * logn)))
            )

        order = np.argsort(values)[::-1][:10]
        for idx in order:
            center = T + step * int(idx)
            lo = max(T, center - step)
            hi = min(2 * T, center + step)
            t_star, v_star = _golden_max(amplitude, lo, hi)
            if v_star > best_v or (v_star == best_v and t_star < best_t):
                best_t, best_v = t_star, v_star

    cert = None
    if spec is not None:
        cert = certificate(spec, T, ell, quad).ratio

    log2T = iterated_log(T, 2)
    log3T = iterated_log(T, 3)
    theo = EXP_GAMMA / (ell + 1) * log2T ** (ell + 1)
    yang = (
        EXP_GAMMA
        * ell**ell
        / (ell + 1) ** (ell + 1)
        * (log2T - log3T) ** (ell + 1)
    )
    return ScanReport(
        T=float(T),
        ell=ell,
        grid_step=step,
        argmax_t=best_t,
        max_value=best_v,
        certificate_ratio=cert,
        theoretical_constant=theo,
        yang_constant=yang,
        grid_points=count,
        refined=refined,
    )


def scan_samples(T: float, ell: int, grid_step: float):
    """The (t, |P(t)|) grid that scan_max ranges over, for CSV dumps."""
    if T < 2:
        raise ValueError(f"need T >= 2, got {T}")
    step_cap = math.pi / (4.0 * math.log(T))
    if grid_step > step_cap:
        raise ValueError(
            f"grid_step {grid_step:.4g} too coarse: needs <= {step_cap:.4g}"
        )
    count = int(math.ceil(T / grid_step)) + 1
    step = T / (count - 1)
    n = np.arange(1, int(math.floor(T)) + 1, dtype=np.float64)
    logn = np.log(n)
    coeffs = logn**ell / n
    values = np.abs(exp_sum_on_grid(logn, coeffs, T, step, count))
    return T + step * np.arange(count), values
