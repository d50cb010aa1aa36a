"""Built-in property suite: oracle equivalences, analytic identities, and
the fractional semigroup estimate, runnable from the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .observables import commutator
from .oracle import convolution_cubic, plane_wave_solution, psiE_oracle, psiI_oracle
from .schemes import nonlinearity, psi_E, psi_I
from .spectral import (
    Grid,
    SpectralField,
    apply_operator,
    band_limit,
    forward_transform,
    frac_semigroup_diff,
    inverse_transform,
    l2_norm,
    operator_multipliers,
    phi1,
    project,
    semigroup,
    sobolev_norm,
)


@dataclass
class PropertyResult:
    name: str
    observed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.observed <= self.tolerance

    @property
    def margin(self) -> float:
        return self.tolerance - self.observed


def _random_field(grid: Grid, rng) -> SpectralField:
    c = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralField(grid, c)


def _check_roundtrip_periodic(rng) -> PropertyResult:
    worst = 0.0
    for K in (8, 64, 256):
        grid = Grid.periodic(K)
        v = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        back = inverse_transform(forward_transform(v, grid))
        worst = max(worst, np.max(np.abs(back - v)) / np.max(np.abs(v)))
    return PropertyResult("roundtrip_periodic", worst, 1e-13)


def _check_roundtrip_dirichlet(rng) -> PropertyResult:
    worst = 0.0
    for K in (8, 64, 256):
        grid = Grid.dirichlet(K)
        v = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        back = inverse_transform(forward_transform(v, grid))
        worst = max(worst, np.max(np.abs(back - v)) / np.max(np.abs(v)))
    return PropertyResult("roundtrip_dirichlet", worst, 1e-13)


def _check_semigroup_unitarity(rng) -> PropertyResult:
    grid = Grid.periodic(64)
    worst = 0.0
    for _ in range(100):
        u = _random_field(grid, rng)
        t = float(rng.uniform(-10, 10))
        drift = abs(l2_norm(apply_operator(u, semigroup(t))) - l2_norm(u))
        worst = max(worst, drift / l2_norm(u))
    return PropertyResult("semigroup_unitarity", worst, 1e-13)


def _check_group_law(rng) -> PropertyResult:
    # phase rounding in s + t grows like |s+t| * lambda_max * eps, so the
    # 1e-13 tolerance constrains the sampled ranges
    grid = Grid.periodic(32)
    worst = 0.0
    for _ in range(25):
        u = _random_field(grid, rng)
        s, t = rng.uniform(-0.5, 0.5, size=2)
        twice = apply_operator(apply_operator(u, semigroup(s)), semigroup(t))
        once = apply_operator(u, semigroup(s + t))
        worst = max(worst, l2_norm(twice - once) / l2_norm(u))
    return PropertyResult("semigroup_group_law", worst, 1e-13)


def _check_phi1_quadrature(rng) -> PropertyResult:
    # tau * phi1(i tau Lap) at eigenvalue lam equals int_0^tau exp(-i s lam) ds
    worst = 0.0
    for _ in range(20):
        lam = float(rng.uniform(0, 400))
        tau = float(rng.uniform(1e-3, 0.5))
        mult = tau * operator_multipliers(phi1(1j * tau), np.array([lam]))[0]
        re = quad(lambda s: np.cos(s * lam), 0, tau, limit=200)[0]
        im = quad(lambda s: -np.sin(s * lam), 0, tau, limit=200)[0]
        worst = max(worst, abs(mult - (re + 1j * im)))
    return PropertyResult("phi1_quadrature_consistency", worst, 1e-10)


def _check_frac_semigroup_bound(rng) -> PropertyResult:
    grid = Grid.periodic(32)
    worst = 0.0
    for _ in range(1000):
        u = _random_field(grid, rng)
        t = float(rng.uniform(1e-12, 10))
        gamma = float(rng.uniform(0, 1))
        out = l2_norm(apply_operator(u, frac_semigroup_diff(t, gamma)))
        worst = max(worst, out / (2 ** (1 - gamma) * l2_norm(u)))
    # bound must hold outright: observed ratio <= 1 (+ rounding)
    return PropertyResult("fractional_semigroup_bound", worst, 1.0 + 1e-12)


def _band_limited_field(grid: Grid, rng, max_mode: int) -> SpectralField:
    return band_limit(_random_field(grid, rng), max_mode)


def _check_psi_e_oracle(rng) -> PropertyResult:
    grid = Grid.periodic(32)
    worst = 0.0
    for _ in range(50):
        v = _band_limited_field(grid, rng, 4)
        tau = float(rng.uniform(1e-3, 0.5))
        fast = psi_E(v, tau)
        slow = project(psiE_oracle(v, tau), grid)
        worst = max(worst, l2_norm(fast - slow) / l2_norm(v) ** 3)
    return PropertyResult("psi_e_oracle_equivalence", worst, 1e-12)


def _check_psi_i_oracle(rng) -> PropertyResult:
    grid = Grid.periodic(32)
    worst = 0.0
    for _ in range(50):
        z = _band_limited_field(grid, rng, 4)
        tau = float(rng.uniform(1e-3, 0.5))
        fast = psi_I(z, tau)
        slow = project(psiI_oracle(z, tau), grid)
        worst = max(worst, l2_norm(fast - slow) / l2_norm(z) ** 3)
    return PropertyResult("psi_i_oracle_equivalence", worst, 1e-12)


def _check_nonlinearity_convolution(rng) -> PropertyResult:
    grid = Grid.periodic(32)
    worst = 0.0
    for _ in range(50):
        u = _band_limited_field(grid, rng, 4)
        fast = nonlinearity(u)
        slow = project(convolution_cubic(u, u, u), grid).scaled(-1j)
        worst = max(worst, l2_norm(fast - slow) / l2_norm(u) ** 3)
    return PropertyResult("nonlinearity_convolution_equivalence", worst, 1e-12)


def _check_commutator_identity(rng) -> PropertyResult:
    grid = Grid.periodic(128)
    worst = 0.0
    for _ in range(10):
        v1 = _band_limited_field(grid, rng, 16)
        v2 = _band_limited_field(grid, rng, 16)
        f1, f2 = commutator(v1, v2)
        worst = max(worst, l2_norm(f1 - f2) / max(l2_norm(f1), 1e-300))
    return PropertyResult("commutator_identity", worst, 1e-8)


def _check_plane_wave_residual(rng) -> PropertyResult:
    # finite-difference d/dt of the exact solution against the PDE right side
    grid = Grid.periodic(32)
    t0, h = 0.37, 3e-6
    worst = 0.0
    for k, c in ((1, 0.8 + 0.3j), (3, 1.1 - 0.2j), (0, 0.5 + 0.0j)):
        um = plane_wave_solution(k, c, t0 - h, grid)
        u0 = plane_wave_solution(k, c, t0, grid)
        up = plane_wave_solution(k, c, t0 + h, grid)
        dudt = (up - um).scaled(1 / (2 * h))
        lap = SpectralField(grid, -grid.eigenvalues * u0.coeffs)
        w = inverse_transform(u0)
        cubic = forward_transform(np.abs(w) ** 2 * w, grid)
        # i u_t = -Lap u + |u|^2 u  =>  u_t = i Lap u - i |u|^2 u
        rhs = lap.scaled(1j) + cubic.scaled(-1j)
        worst = max(worst, l2_norm(dudt - rhs))
    return PropertyResult("plane_wave_pde_residual", worst, 1e-8)


def run_selftest(seed: int = 0) -> list[PropertyResult]:
    rng = np.random.default_rng(seed)
    checks = [
        _check_roundtrip_periodic,
        _check_roundtrip_dirichlet,
        _check_semigroup_unitarity,
        _check_group_law,
        _check_phi1_quadrature,
        _check_frac_semigroup_bound,
        _check_psi_e_oracle,
        _check_psi_i_oracle,
        _check_nonlinearity_convolution,
        _check_commutator_identity,
        _check_plane_wave_residual,
    ]
    return [check(rng) for check in checks]
