"""Time-stepping maps for the cubic NLS equation i u_t = -Lap u + |u|^2 u.

Provides the first-order low-regularity integrator, its symmetric implicit
relative (solved by fixed-point iteration), and classical baselines (Lie and
Strang splitting, exponential Euler).  All pointwise products are evaluated
pseudo-spectrally on the collocation grid.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .spectral import (
    SpectralField,
    apply_operator,
    conjugate,
    dealias,
    forward_transform,
    inverse_transform,
    l2_norm,
    phi1,
    semigroup,
)


class Scheme(Enum):
    SYMMETRIC_LOWREG = "symmetric"
    LOWREG1 = "lowreg1"
    LIE_SPLIT = "lie"
    STRANG_SPLIT = "strang"
    EXP_EULER = "expeuler"


@dataclass(frozen=True)
class StepperConfig:
    scheme: Scheme
    tau: float
    fp_tol: float = 1e-12
    fp_max_iter: int = 50
    dealias: bool = False

    def __post_init__(self):
        if self.tau == 0:
            raise ValueError("tau must be nonzero")
        if self.fp_tol <= 0:
            raise ValueError("fp_tol must be positive")
        if self.fp_max_iter < 1:
            raise ValueError("fp_max_iter must be at least 1")


@dataclass
class StepReport:
    iterations_used: int
    final_residual: float
    wall_time: float
    residual_history: list = field(default_factory=list)


class NonConvergence(RuntimeError):
    """Fixed-point solver hit its iteration cap; the step size is too large
    for the data.  Callers should halve tau."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"fixed-point iteration did not converge in {iterations} iterations "
            f"(last residual {residual:.3e}); halve tau"
        )
        self.iterations = iterations
        self.residual = residual


def _maybe_dealias(f: SpectralField, flag: bool) -> SpectralField:
    return dealias(f) if flag else f


def nonlinearity(u: SpectralField, dealias_products: bool = False) -> SpectralField:
    """-i u^2 conj(u), evaluated pointwise in physical space."""
    w = inverse_transform(u)
    f = forward_transform(-1j * w * w * np.conj(w), u.grid)
    return _maybe_dealias(f, dealias_products)


def psi_E(v: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """Explicit nonlinear increment of the symmetric scheme.

    -i (tau/2) e^{i tau Lap} [ v^2 * phi1(-i tau Lap) conj(v) ].
    """
    g = apply_operator(conjugate(v), phi1(-1j * tau))
    w = inverse_transform(v)
    prod = forward_transform(w * w * inverse_transform(g), v.grid)
    prod = _maybe_dealias(prod, dealias_products)
    return apply_operator(prod, semigroup(tau)).scaled(-0.5j * tau)


def psi_I(z: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """Implicit nonlinear increment: -i (tau/2) [ z^2 * phi1(i tau Lap) conj(z) ]."""
    g = apply_operator(conjugate(z), phi1(1j * tau))
    w = inverse_transform(z)
    prod = forward_transform(w * w * inverse_transform(g), z.grid)
    prod = _maybe_dealias(prod, dealias_products)
    return prod.scaled(-0.5j * tau)


def step_lowreg1(u: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """One step of the first-order low-regularity integrator.

    e^{i tau Lap} [ u - i tau u^2 phi1(-2 i tau Lap) conj(u) ].
    Negative tau is allowed (reversibility experiments).
    """
    if tau == 0:
        raise ValueError("tau must be nonzero")
    g = apply_operator(conjugate(u), phi1(-2j * tau))
    w = inverse_transform(u)
    prod = forward_transform(w * w * inverse_transform(g), u.grid)
    prod = _maybe_dealias(prod, dealias_products)
    return apply_operator(u + prod.scaled(-1j * tau), semigroup(tau))


def step_symmetric(u: SpectralField, cfg: StepperConfig) -> tuple[SpectralField, StepReport]:
    """One step of the symmetric low-regularity integrator.

    Returns the fixed point of S(z) = e^{i tau Lap} u + psi_E(u) + psi_I(z),
    iterated from x0 = e^{i tau Lap} u.
    """
    if cfg.scheme is not Scheme.SYMMETRIC_LOWREG:
        raise ValueError("config does not select the symmetric scheme")
    tau = cfg.tau
    start = time.perf_counter()
    x0 = apply_operator(u, semigroup(tau))
    explicit = x0 + psi_E(u, tau, cfg.dealias)
    x = x0
    history: list[float] = []
    for it in range(1, cfg.fp_max_iter + 1):
        x_next = explicit + psi_I(x, tau, cfg.dealias)
        residual = l2_norm(x_next - x)
        history.append(residual)
        if residual <= cfg.fp_tol * max(1.0, l2_norm(x)):
            report = StepReport(it, residual, time.perf_counter() - start, history)
            return x_next, report
        x = x_next
    raise NonConvergence(cfg.fp_max_iter, history[-1])


def _nonlinear_subflow(w: np.ndarray, tau: float) -> np.ndarray:
    # Exact pointwise solution of u_t = -i |u|^2 u; |u| is conserved.
    return np.exp(-1j * tau * np.abs(w) ** 2) * w


def step_lie(u: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """Lie splitting: exact nonlinear subflow, then the free flow."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    w = _nonlinear_subflow(inverse_transform(u), tau)
    f = _maybe_dealias(forward_transform(w, u.grid), dealias_products)
    return apply_operator(f, semigroup(tau))


def step_strang(u: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """Strang splitting: half nonlinear, full free flow, half nonlinear."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    w = _nonlinear_subflow(inverse_transform(u), tau / 2)
    f = _maybe_dealias(forward_transform(w, u.grid), dealias_products)
    mid = inverse_transform(apply_operator(f, semigroup(tau)))
    out = forward_transform(_nonlinear_subflow(mid, tau / 2), u.grid)
    return _maybe_dealias(out, dealias_products)


def step_exp_euler(u: SpectralField, tau: float, dealias_products: bool = False) -> SpectralField:
    """Exponential Euler: e^{i tau Lap} u + tau phi1(i tau Lap) f(u)."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    lin = apply_operator(u, semigroup(tau))
    nl = apply_operator(nonlinearity(u, dealias_products), phi1(1j * tau))
    return lin + nl.scaled(tau)


def make_stepper(cfg: StepperConfig):
    """Bind a config to a map u -> (u_next, StepReport | None)."""
    if cfg.scheme is Scheme.SYMMETRIC_LOWREG:
        return lambda u: step_symmetric(u, cfg)
    plain = {
        Scheme.LOWREG1: step_lowreg1,
        Scheme.LIE_SPLIT: step_lie,
        Scheme.STRANG_SPLIT: step_strang,
        Scheme.EXP_EULER: step_exp_euler,
    }[cfg.scheme]
    return lambda u: (plain(u, cfg.tau, cfg.dealias), None)


@dataclass
class Trajectory:
    times: list[float]
    states: list[SpectralField]
    reports: list[StepReport | None]

    @property
    def final(self) -> SpectralField:
        return self.states[-1]

    def total_fp_iterations(self) -> int:
        return sum(r.iterations_used for r in self.reports if r is not None)


def evolve(
    u0: SpectralField,
    cfg: StepperConfig,
    n_steps: int,
    observer_stride: int = 1,
) -> Trajectory:
    """Apply the configured stepper n_steps times.

    States are recorded at t = 0, every `observer_stride` steps, and at the
    final step.  NonConvergence from the implicit solver propagates.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    if observer_stride < 1:
        raise ValueError("observer_stride must be at least 1")
    stepper = make_stepper(cfg)
    times = [0.0]
    states = [u0]
    reports: list[StepReport | None] = []
    u = u0
    for n in range(1, n_steps + 1):
        u, report = stepper(u)
        reports.append(report)
        if n % observer_stride == 0 or n == n_steps:
            times.append(n * cfg.tau)
            states.append(u)
    return Trajectory(times, states, reports)
