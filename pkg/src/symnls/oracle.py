"""Slow brute-force references for the fast pseudo-spectral paths.

Everything here works coefficient-by-coefficient on 1-d periodic grids:
exact triple-convolution evaluation of the cubic terms, the mode-wise closed
forms of the symmetric scheme's nonlinear increments, and an exact
plane-wave solution of the PDE.  Cubic cost, capped at K <= 32.
"""

from __future__ import annotations

import numpy as np

from .spectral import (
    Boundary,
    Grid,
    SpectralField,
    phi1_scalar,
)

_MAX_ORACLE_MODES = 32


class BandOverflow(ValueError):
    """Triple-sum output landed outside the extended mode band."""


def _check_oracle_grid(grid: Grid) -> None:
    if grid.boundary is not Boundary.PERIODIC or grid.dimension != 1:
        raise ValueError("convolution oracles support 1-d periodic grids only")
    if grid.modes_per_axis > _MAX_ORACLE_MODES:
        raise ValueError(
            f"oracle is O(K^3); capped at K <= {_MAX_ORACLE_MODES}, "
            f"got K = {grid.modes_per_axis}"
        )


def _extended_grid(grid: Grid) -> Grid:
    # 4K is the next power of two holding the 3K output band.
    return Grid.periodic(4 * grid.modes_per_axis, 1, grid.domain_length[0])


def _triple_sum(
    a: np.ndarray,
    b: np.ndarray,
    c_conj_weighted: np.ndarray,
    grid: Grid,
) -> SpectralField:
    """Exact coefficients of sum over k = k2 + k3 - k1, on the extended grid."""
    (k,) = grid.wavenumbers
    out_grid = _extended_grid(grid)
    Kout = out_grid.modes_per_axis
    out = np.zeros(Kout, dtype=np.complex128)
    # index k = k2 + k3 - k1, shifted into the extended array layout
    idx = k[None, :, None] + k[None, None, :] - k[:, None, None] + Kout // 2
    if idx.min() < 0 or idx.max() >= Kout:
        raise BandOverflow("triple sum exceeds the extended band")
    terms = (
        c_conj_weighted[:, None, None] * a[None, :, None] * b[None, None, :]
    )
    np.add.at(out, idx.ravel(), terms.ravel())
    return SpectralField(out_grid, out / grid.domain_length[0])


def convolution_cubic(
    a: SpectralField, b: SpectralField, c_conj: SpectralField
) -> SpectralField:
    """Exact coefficients of a * b * conj(c_conj) on the extended band."""
    grid = a.grid
    _check_oracle_grid(grid)
    if b.grid != grid or c_conj.grid != grid:
        raise ValueError("oracle inputs must share one grid")
    return _triple_sum(a.coeffs, b.coeffs, np.conj(c_conj.coeffs), grid)


def psiE_oracle(v: SpectralField, tau: float) -> SpectralField:
    """Mode-wise closed form of the explicit increment of the symmetric scheme.

    -i (tau/2) e^{-i tau lam_k} sum_{k=k2+k3-k1}
        phi1(i tau lam_{k1}) conj(v_{k1}) v_{k2} v_{k3} / L.
    """
    grid = v.grid
    _check_oracle_grid(grid)
    lam1 = grid.eigenvalues
    weighted = phi1_scalar(1j * tau * lam1) * np.conj(v.coeffs)
    conv = _triple_sum(v.coeffs, v.coeffs, weighted, grid)
    out_grid = conv.grid
    phase = np.exp(-1j * tau * out_grid.eigenvalues)
    return SpectralField(out_grid, -0.5j * tau * phase * conv.coeffs)


def psiI_oracle(z: SpectralField, tau: float) -> SpectralField:
    """Mode-wise closed form of the implicit increment (no outer semigroup)."""
    grid = z.grid
    _check_oracle_grid(grid)
    lam1 = grid.eigenvalues
    weighted = phi1_scalar(-1j * tau * lam1) * np.conj(z.coeffs)
    conv = _triple_sum(z.coeffs, z.coeffs, weighted, grid)
    return SpectralField(conv.grid, -0.5j * tau * conv.coeffs)


def plane_wave_solution(k, c: complex, t: float, grid: Grid) -> SpectralField:
    """Exact solution c e^{ikx} e^{-i (lam_k + |c|^2 / L^d) t} of the PDE.

    `c` is the spectral coefficient in the orthonormal-basis normalization,
    so the physical amplitude is c / sqrt(L^d).
    """
    if grid.boundary is not Boundary.PERIODIC:
        raise ValueError("plane waves require a periodic grid")
    if np.isscalar(k):
        k = (int(k),) * 1
    k = tuple(int(v) for v in k)
    if len(k) != grid.dimension:
        raise ValueError("wavevector dimension mismatch")
    K = grid.modes_per_axis
    idx = []
    for ki in k:
        if not -K // 2 <= ki < K // 2:
            raise ValueError(f"mode {ki} outside the grid band")
        idx.append(ki + K // 2)
    lam = float(grid.eigenvalues[tuple(idx)])
    coeffs = np.zeros(grid.shape, dtype=np.complex128)
    coeffs[tuple(idx)] = c * np.exp(-1j * (lam + abs(c) ** 2 / grid.volume) * t)
    return SpectralField(grid, coeffs)
