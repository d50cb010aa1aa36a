"""Eigenbasis grids, transforms, diagonal operators, graph norms, rough data.

Two discrete eigenbases of -Laplacian are supported: the periodic Fourier
basis e^{ikx}/sqrt(L^d) on a d-dimensional torus, and the Dirichlet sine
basis sqrt(2/L) sin(k pi x / L) on an interval (d=1).  All coefficients are
stored in lexicographic wavevector order (k = -K/2 .. K/2-1 per axis for
periodic grids, k = 1 .. K for Dirichlet grids) so that spectral and
quadrature L2 norms coincide (Parseval).
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np
import scipy.fft


class Boundary(Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Grid:
    """Discrete eigenbasis descriptor owning the eigenvalues of -Laplacian."""

    dimension: int
    modes_per_axis: int
    boundary: Boundary
    domain_length: tuple[float, ...]

    def __post_init__(self):
        d, K = self.dimension, self.modes_per_axis
        if d not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {d}")
        if K < 2 or (K & (K - 1)) != 0:
            raise ValueError(f"modes_per_axis must be a power of two >= 2, got {K}")
        if self.boundary is Boundary.DIRICHLET and d != 1:
            raise ValueError("Dirichlet grids are one-dimensional only")
        if len(self.domain_length) != d:
            raise ValueError("need one domain length per axis")
        if any(L <= 0 for L in self.domain_length):
            raise ValueError("domain lengths must be positive")

    @staticmethod
    def periodic(K: int, d: int = 1, length: float = 2 * math.pi) -> "Grid":
        return Grid(d, K, Boundary.PERIODIC, (float(length),) * d)

    @staticmethod
    def dirichlet(K: int, length: float = 1.0) -> "Grid":
        return Grid(1, K, Boundary.DIRICHLET, (float(length),))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.modes_per_axis,) * self.dimension

    @cached_property
    def wavenumbers(self) -> tuple[np.ndarray, ...]:
        """Integer mode indices per axis, in storage order."""
        K = self.modes_per_axis
        if self.boundary is Boundary.PERIODIC:
            k = np.arange(-K // 2, K // 2)
        else:
            k = np.arange(1, K + 1)
        return (k,) * self.dimension

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """lambda_k of -Laplacian, shaped like a coefficient array."""
        lam = np.zeros(self.shape)
        for axis, (k, L) in enumerate(zip(self.wavenumbers, self.domain_length)):
            if self.boundary is Boundary.PERIODIC:
                kappa = (2 * np.pi / L) * k
            else:
                kappa = (np.pi / L) * k
            sh = [1] * self.dimension
            sh[axis] = self.modes_per_axis
            lam = lam + (kappa**2).reshape(sh)
        lam.flags.writeable = False
        return lam

    @cached_property
    def points(self) -> tuple[np.ndarray, ...]:
        """Collocation coordinates per axis."""
        K = self.modes_per_axis
        out = []
        for L in self.domain_length:
            if self.boundary is Boundary.PERIODIC:
                out.append(L * np.arange(K) / K)
            else:
                out.append(L * np.arange(1, K + 1) / (K + 1))
        return tuple(out)

    @property
    def cell_volume(self) -> float:
        """Quadrature weight of the collocation rectangle rule."""
        K = self.modes_per_axis
        w = 1.0
        for L in self.domain_length:
            w *= L / K if self.boundary is Boundary.PERIODIC else L / (K + 1)
        return w

    @property
    def volume(self) -> float:
        return math.prod(self.domain_length)


@dataclass(frozen=True)
class SpectralField:
    """A state as complex coefficients on a grid's eigenbasis."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match "
                f"grid shape {self.grid.shape}"
            )
        c = np.ascontiguousarray(self.coeffs, dtype=np.complex128)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @staticmethod
    def zero(grid: Grid) -> "SpectralField":
        return SpectralField(grid, np.zeros(grid.shape, dtype=np.complex128))

    def scaled(self, factor: complex) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * factor)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        if other.grid != self.grid:
            raise ValueError("grid mismatch")
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        if other.grid != self.grid:
            raise ValueError("grid mismatch")
        return SpectralField(self.grid, self.coeffs - other.coeffs)


class OperatorKind(Enum):
    SEMIGROUP = "semigroup"
    PHI1 = "phi1"
    FRAC_LAPLACIAN = "frac_laplacian"
    FRAC_SEMIGROUP_DIFF = "frac_semigroup_diff"


@dataclass(frozen=True)
class OperatorSpec:
    """A diagonal function of the Laplacian; one scalar multiplier per mode."""

    kind: OperatorKind
    t: float = 0.0
    a: complex = 0j
    gamma: float = 0.0


def semigroup(t: float) -> OperatorSpec:
    """exp(i t Laplacian): multiplier exp(-i t lambda_k)."""
    return OperatorSpec(OperatorKind.SEMIGROUP, t=float(t))


def phi1(a: complex) -> OperatorSpec:
    """phi1(a Laplacian) with phi1(z) = (e^z - 1)/z: multiplier phi1(-a lambda_k)."""
    return OperatorSpec(OperatorKind.PHI1, a=complex(a))


def frac_laplacian(gamma: float) -> OperatorSpec:
    """(-Laplacian)^gamma: multiplier lambda_k^gamma."""
    return OperatorSpec(OperatorKind.FRAC_LAPLACIAN, gamma=float(gamma))


def frac_semigroup_diff(t: float, gamma: float) -> OperatorSpec:
    """(exp(i t Laplacian) - 1) / (-t Laplacian)^gamma; zero on the kernel."""
    return OperatorSpec(OperatorKind.FRAC_SEMIGROUP_DIFF, t=float(t), gamma=float(gamma))


# Switch to a Taylor series for |z| below this to avoid cancellation in
# (e^z - 1)/z.
_PHI1_TAYLOR_CUTOFF = 1e-4


def phi1_scalar(z: np.ndarray | complex) -> np.ndarray:
    """phi1(z) = (e^z - 1)/z with phi1(0) = 1, stable for small |z|."""
    z = np.asarray(z, dtype=np.complex128)
    small = np.abs(z) < _PHI1_TAYLOR_CUTOFF
    z_safe = np.where(small, 1.0, z)
    direct = (np.exp(z_safe) - 1.0) / z_safe
    taylor = 1.0 + z * (1.0 / 2 + z * (1.0 / 6 + z / 24))
    return np.where(small, taylor, direct)


def operator_multipliers(op: OperatorSpec, lam: np.ndarray) -> np.ndarray:
    """Scalar multiplier of `op` at each eigenvalue in `lam`."""
    if op.kind is OperatorKind.SEMIGROUP:
        return np.exp(-1j * op.t * lam)
    if op.kind is OperatorKind.PHI1:
        return phi1_scalar(-op.a * lam)
    if op.kind is OperatorKind.FRAC_LAPLACIAN:
        if not 0.0 <= op.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        return np.asarray(lam, dtype=np.complex128) ** op.gamma
    if op.kind is OperatorKind.FRAC_SEMIGROUP_DIFF:
        if not 0.0 <= op.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not np.isfinite(op.t):
            raise ValueError("t must be finite")
        # e^{-i t lam} - 1 = (-i t lam) phi1(-i t lam), so the quotient is
        # -i (t lam)^{1-gamma} phi1(-i t lam); the kernel is annihilated.
        tl = op.t * lam
        val = -1j * np.asarray(tl, dtype=np.complex128) ** (1.0 - op.gamma)
        val = val * phi1_scalar(-1j * tl)
        return np.where(lam == 0.0, 0.0, val)
    raise ValueError(f"unknown operator kind {op.kind}")


def apply_operator(field: SpectralField, op: OperatorSpec) -> SpectralField:
    mult = operator_multipliers(op, field.grid.eigenvalues)
    return SpectralField(field.grid, mult * field.coeffs)


def forward_transform(values: np.ndarray, grid: Grid) -> SpectralField:
    """Coefficients of the Fourier or sine expansion of physical samples."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(
            f"sample shape {values.shape} does not match grid shape {grid.shape}"
        )
    K = grid.modes_per_axis
    if grid.boundary is Boundary.PERIODIC:
        scale = math.sqrt(grid.volume) / K**grid.dimension
        coeffs = np.fft.fftshift(np.fft.fftn(values)) * scale
    else:
        (L,) = grid.domain_length
        scale = math.sqrt(L / 2) / (K + 1)
        coeffs = _dst1(values) * scale
    return SpectralField(grid, coeffs)


def inverse_transform(field: SpectralField) -> np.ndarray:
    """Physical complex samples at the grid's collocation points."""
    grid = field.grid
    K = grid.modes_per_axis
    if grid.boundary is Boundary.PERIODIC:
        scale = math.sqrt(grid.volume) / K**grid.dimension
        return np.fft.ifftn(np.fft.ifftshift(field.coeffs / scale))
    (L,) = grid.domain_length
    return _dst1(field.coeffs * math.sqrt(2 / L)) / 2


def _dst1(values: np.ndarray) -> np.ndarray:
    # scipy's DST-I on real and imaginary parts; self-inverse up to 2(K+1).
    if np.iscomplexobj(values):
        return scipy.fft.dst(values.real, type=1) + 1j * scipy.fft.dst(
            values.imag, type=1
        )
    return scipy.fft.dst(values, type=1).astype(np.complex128)


def conjugate(field: SpectralField) -> SpectralField:
    """Coefficients of the complex conjugate of the represented function."""
    grid = field.grid
    if grid.boundary is Boundary.DIRICHLET:
        return SpectralField(grid, np.conj(field.coeffs))
    # Periodic: conj(u)_k = conj(u_{-k}); k = -K/2 aliases onto itself.
    c = field.coeffs
    for axis in range(grid.dimension):
        c = np.roll(np.flip(c, axis=axis), 1, axis=axis)
    return SpectralField(grid, np.conj(c))


def sobolev_norm(field: SpectralField, s: float) -> float:
    """Graph norm sqrt(sum_k (1 + lambda_k^s) |u_k|^2); plain L2 for s = 0."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    mag2 = np.abs(field.coeffs) ** 2
    if s == 0:
        return math.sqrt(float(np.sum(mag2)))
    weight = 1.0 + field.grid.eigenvalues**s
    return math.sqrt(float(np.sum(weight * mag2)))


def l2_norm(field: SpectralField) -> float:
    return sobolev_norm(field, 0.0)


# Decay margin of the rough-data law: keeps the H^alpha norm summable while
# every strictly higher norm diverges under refinement.
_ROUGH_EPS = 0.05


def rough_data(grid: Grid, alpha: float, seed: int, target_norm: float) -> SpectralField:
    """Deterministic data lying in H^alpha and barely so.

    Coefficients are eta_k (1 + lambda_k)^{-(alpha + d/2 + eps)/2} with eta_k
    uniform complex in the unit square, rescaled to the requested H^alpha
    graph norm.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if target_norm <= 0:
        raise ValueError("target_norm must be positive")
    rng = np.random.default_rng(seed)
    eta = rng.random(grid.shape) + 1j * rng.random(grid.shape)
    decay = (1.0 + grid.eigenvalues) ** (-(alpha + grid.dimension / 2 + _ROUGH_EPS) / 2)
    field = SpectralField(grid, eta * decay)
    return field.scaled(target_norm / sobolev_norm(field, alpha))


def dealias(field: SpectralField) -> SpectralField:
    """2/3-rule projection: zero the top third of the mode band; idempotent."""
    grid = field.grid
    K = grid.modes_per_axis
    mask = np.ones(grid.shape, dtype=bool)
    for axis, k in enumerate(grid.wavenumbers):
        if grid.boundary is Boundary.PERIODIC:
            keep = np.abs(k) <= K / 3
        else:
            keep = k <= 2 * K / 3
        sh = [1] * grid.dimension
        sh[axis] = K
        mask &= keep.reshape(sh)
    return SpectralField(grid, np.where(mask, field.coeffs, 0.0))


def project(field: SpectralField, grid: Grid) -> SpectralField:
    """Band projection onto another grid (same boundary and lengths).

    Shared modes copy over; modes absent from the target are dropped and
    modes absent from the source are zero.
    """
    src = field.grid
    if grid.boundary is not src.boundary or grid.dimension != src.dimension:
        raise ValueError("projection requires matching boundary and dimension")
    if grid.domain_length != src.domain_length:
        raise ValueError("projection requires matching domain lengths")
    out = np.zeros(grid.shape, dtype=np.complex128)
    n = min(grid.modes_per_axis, src.modes_per_axis)
    if src.boundary is Boundary.DIRICHLET:
        out[:n] = field.coeffs[:n]
    else:
        src_sl = slice(src.modes_per_axis // 2 - n // 2, src.modes_per_axis // 2 + n // 2)
        dst_sl = slice(grid.modes_per_axis // 2 - n // 2, grid.modes_per_axis // 2 + n // 2)
        out[(dst_sl,) * grid.dimension] = field.coeffs[(src_sl,) * src.dimension]
    return SpectralField(grid, out)


def band_limit(field: SpectralField, max_mode: int) -> SpectralField:
    """Zero every coefficient whose mode index exceeds `max_mode` on any axis."""
    grid = field.grid
    mask = np.ones(grid.shape, dtype=bool)
    for axis, k in enumerate(grid.wavenumbers):
        keep = np.abs(k) <= max_mode
        sh = [1] * grid.dimension
        sh[axis] = grid.modes_per_axis
        mask &= keep.reshape(sh)
    return SpectralField(grid, np.where(mask, field.coeffs, 0.0))


_SNAPSHOT_MAGIC = b"NLSF"
_SNAPSHOT_VERSION = 1
_BOUNDARY_CODES = {Boundary.PERIODIC: 0, Boundary.DIRICHLET: 1}
_BOUNDARY_FROM_CODE = {v: k for k, v in _BOUNDARY_CODES.items()}


def write_snapshot(field: SpectralField, path) -> None:
    """Binary field snapshot: little-endian header + interleaved f64 pairs."""
    grid = field.grid
    header = struct.pack(
        "<4sIIII",
        _SNAPSHOT_MAGIC,
        _SNAPSHOT_VERSION,
        grid.dimension,
        grid.modes_per_axis,
        _BOUNDARY_CODES[grid.boundary],
    )
    header += struct.pack(f"<{grid.dimension}d", *grid.domain_length)
    body = field.coeffs.astype("<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(header + body)


def read_snapshot(path) -> SpectralField:
    with open(path, "rb") as fh:
        raw = fh.read()
    magic, version, d, K, bcode = struct.unpack_from("<4sIIII", raw)
    if magic != _SNAPSHOT_MAGIC:
        raise ValueError(f"{path}: not a field snapshot (bad magic {magic!r})")
    if version != _SNAPSHOT_VERSION:
        raise ValueError(f"{path}: unsupported snapshot version {version}")
    offset = struct.calcsize("<4sIIII")
    lengths = struct.unpack_from(f"<{d}d", raw, offset)
    offset += 8 * d
    grid = Grid(d, K, _BOUNDARY_FROM_CODE[bcode], lengths)
    coeffs = np.frombuffer(raw, dtype="<c16", offset=offset).reshape(grid.shape)
    return SpectralField(grid, coeffs.astype(np.complex128))
