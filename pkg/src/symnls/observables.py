"""Conserved quantities and the commutator diagnostic.

Mass is the L2 norm, energy the Hamiltonian 1/2 int |grad u|^2 + 1/4 int |u|^4
(gradient part summed spectrally, quartic part by collocation quadrature).
The commutator check evaluates both closed forms of C[f, i Lap](v1, v2) and is
used as a regression on the derivative stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import (
    Boundary,
    Grid,
    SpectralField,
    forward_transform,
    inverse_transform,
    project,
    sobolev_norm,
)


@dataclass
class ObservableSample:
    time: float
    mass: float
    energy: float
    sobolev_norms: dict = field(default_factory=dict)


def mass(u: SpectralField) -> float:
    """L2 norm of the state; conserved by the exact flow."""
    return sobolev_norm(u, 0.0)


def energy(u: SpectralField, oversample: int = 1) -> float:
    """1/2 sum_k lambda_k |u_k|^2 + 1/4 int |u|^4 (rectangle rule).

    `oversample` refines the quadrature grid for the quartic integral by the
    given factor (pad the spectrum, then integrate); the default collocation
    rule is already spectrally accurate for band-limited integrands.
    """
    gradient_part = 0.5 * float(np.sum(u.grid.eigenvalues * np.abs(u.coeffs) ** 2))
    q = u
    if oversample > 1:
        grid = u.grid
        fine = Grid(
            grid.dimension,
            grid.modes_per_axis * oversample,
            grid.boundary,
            grid.domain_length,
        )
        q = project(u, fine)
    w = inverse_transform(q)
    quartic_part = 0.25 * q.grid.cell_volume * float(np.sum(np.abs(w) ** 4))
    return gradient_part + quartic_part


def sample(u: SpectralField, t: float, norms: tuple[float, ...] = ()) -> ObservableSample:
    return ObservableSample(
        time=t,
        mass=mass(u),
        energy=energy(u),
        sobolev_norms={s: sobolev_norm(u, s) for s in norms},
    )


def _laplacian_samples(u: SpectralField) -> np.ndarray:
    """Physical samples of Laplacian(u) (multiplier -lambda_k)."""
    return inverse_transform(SpectralField(u.grid, -u.grid.eigenvalues * u.coeffs))


def gradient_samples(u: SpectralField) -> list[np.ndarray]:
    """Physical samples of each partial derivative of u.

    Periodic axes use the i*kappa multiplier; the Dirichlet sine series
    differentiates into a cosine series evaluated at the interior points.
    """
    grid = u.grid
    if grid.boundary is Boundary.PERIODIC:
        out = []
        for axis, (k, L) in enumerate(zip(grid.wavenumbers, grid.domain_length)):
            kappa = (2 * np.pi / L) * k
            sh = [1] * grid.dimension
            sh[axis] = grid.modes_per_axis
            deriv = SpectralField(grid, 1j * kappa.reshape(sh) * u.coeffs)
            out.append(inverse_transform(deriv))
        return out
    return [_cosine_matrix(grid) @ u.coeffs]


_COSINE_CACHE: dict[Grid, np.ndarray] = {}


def _cosine_matrix(grid: Grid) -> np.ndarray:
    # d/dx [sqrt(2/L) sin(k pi x / L)] = sqrt(2/L) (k pi / L) cos(k pi x / L)
    mat = _COSINE_CACHE.get(grid)
    if mat is None:
        (L,) = grid.domain_length
        k = grid.wavenumbers[0]
        (x,) = grid.points
        mat = np.sqrt(2 / L) * (k * np.pi / L) * np.cos(np.outer(x, k) * np.pi / L)
        _COSINE_CACHE[grid] = mat
    return mat


def commutator(v1: SpectralField, v2: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Both closed forms of the cubic-nonlinearity commutator with i*Laplacian.

    Form 1: -Lap(v1^2 v2) + 2 v1 v2 Lap(v1) + v1^2 Lap(v2).
    Form 2: -2 (|grad v1|^2 v2 + 2 v1 grad(v1) . grad(v2)).
    The two agree exactly for band-limited inputs; any discrepancy measures
    product/aliasing error.
    """
    grid = v1.grid
    if v2.grid != grid:
        raise ValueError("grid mismatch")
    w1 = inverse_transform(v1)
    w2 = inverse_transform(v2)
    lap1 = _laplacian_samples(v1)
    lap2 = _laplacian_samples(v2)

    cubic = forward_transform(w1 * w1 * w2, grid)
    # -Lap acts as +lambda_k on coefficients
    neg_lap_cubic = inverse_transform(
        SpectralField(grid, grid.eigenvalues * cubic.coeffs)
    )
    form1 = neg_lap_cubic + 2 * w1 * w2 * lap1 + w1 * w1 * lap2

    g1 = gradient_samples(v1)
    g2 = gradient_samples(v2)
    grad1_sq = sum(g * g for g in g1)
    grad_dot = sum(a * b for a, b in zip(g1, g2))
    form2 = -2.0 * (grad1_sq * w2 + 2 * w1 * grad_dot)

    return forward_transform(form1, grid), forward_transform(form2, grid)
